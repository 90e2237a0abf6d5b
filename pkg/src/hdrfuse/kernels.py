"""Backend selection for the hot kernels.

The compiled ``_ckernels`` module is used when it was built; otherwise the
numpy versions in ``_pykernels`` are used. Both expose the same functions.
"""
from contextlib import contextmanager

from hdrfuse import _pykernels

try:
    from hdrfuse import _ckernels
except ImportError:  # extension not built
    _ckernels = None

_BACKENDS = {"python": _pykernels}
if _ckernels is not None:
    _BACKENDS["cython"] = _ckernels

_active = _ckernels if _ckernels is not None else _pykernels


def available_backends():
    return sorted(_BACKENDS)


def backend_name():
    return _active.NAME


def get_backend(name):
    try:
        return _BACKENDS[name]
    except KeyError:
        raise ValueError(f"unknown or unavailable backend {name!r}; have {available_backends()}") from None


def set_backend(name):
    """Switch the process-wide backend. Not thread-safe; meant for benchmarks and tests."""
    global _active
    _active = get_backend(name)


@contextmanager
def use_backend(name):
    previous = _active.NAME
    set_backend(name)
    try:
        yield get_backend(name)
    finally:
        set_backend(previous)


def box_mean(a, r):
    return _active.box_mean(a, r)


def upsample_bilinear(a, out_h, out_w):
    return _active.upsample_bilinear(a, out_h, out_w)


def hist_kmeans(hist, centers, max_iter):
    return _active.hist_kmeans(hist, centers, max_iter)


def spectral_combine(fx, flh, flv, dh, dv, lam):
    return _active.spectral_combine(fx, flh, flv, dh, dv, lam)


def saturation(r, g, b):
    return _active.saturation(r, g, b)
