"""Gradient-domain luminance fusion.

The fused luminance minimises

    ||Y - X||^2 + lam * ||Dh Y - Lh||^2 + lam * ||Dv Y - Lv||^2

where X is the mean of the three exposures, Dh/Dv are forward differences
with periodic wrap and (Lh, Lv) is a target gradient field blended from the
exposures. With periodic boundaries the normal equations are diagonal in
the 2-D DFT, so the solve is two FFTs and a per-frequency division.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.fft as sfft

from hdrfuse import kernels
from hdrfuse.clustering import ClusterMaps
from hdrfuse.guided import GuidedFilterParams, guided_filter
from hdrfuse.image_core import as_plane, check_same_shape

DENSE_MAX_PIXELS = 4096


@dataclass(frozen=True)
class GradientField:
    lh: np.ndarray
    lv: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "lh", as_plane(self.lh))
        object.__setattr__(self, "lv", as_plane(self.lv))
        check_same_shape(self.lh, self.lv)

    @property
    def shape(self):
        return self.lh.shape


@dataclass(frozen=True)
class LuminanceWeights:
    w_ue: np.ndarray
    w_ne: np.ndarray
    w_oe: np.ndarray


@dataclass(frozen=True)
class SolverParams:
    """``lam = SIZE / 2**s_lambda`` with SIZE the image diagonal, unless ``lam`` is given."""

    s_lambda: float = 2.0
    lam: float | None = None

    def __post_init__(self):
        if self.lam is not None and not self.lam > 0:
            raise ValueError("lambda must be > 0")

    def lambda_for(self, shape) -> float:
        if self.lam is not None:
            return float(self.lam)
        h, w = shape
        return math.hypot(w, h) / 2.0**self.s_lambda


def _resolve_lambda(sp, shape) -> float:
    if isinstance(sp, SolverParams):
        return sp.lambda_for(shape)
    lam = float(sp)
    if lam < 0 or not math.isfinite(lam):
        raise ValueError("lambda must be finite and >= 0")
    return lam


def average_luminance(y_ue, y_ne, y_oe) -> np.ndarray:
    planes = [as_plane(p) for p in (y_ue, y_ne, y_oe)]
    check_same_shape(*planes)
    return (planes[2] + planes[1] + planes[0]) / 3.0


def gradients(y) -> GradientField:
    """Forward differences [-1, 1] along rows and columns, wrapping at the edges."""
    y = as_plane(y)
    return GradientField(np.roll(y, -1, axis=1) - y, np.roll(y, -1, axis=0) - y)


def luminance_weights(maps: ClusterMaps, x_guide, gp: GuidedFilterParams = GuidedFilterParams()) -> LuminanceWeights:
    """Guided-filter each cluster map with ``x_guide`` and normalise per pixel.

    Filter overshoot below zero is clipped before normalising so the weights
    stay in [0, 1]; a pixel whose smoothed maps sum to zero gets 1/3 each.
    """
    x_guide = as_plane(x_guide)
    check_same_shape(maps.r_ue, x_guide)
    omega = [guided_filter(x_guide, r, gp) for r in (maps.r_ue, maps.r_ne, maps.r_oe)]
    return normalize_weights(*omega)


def normalize_weights(o_ue, o_ne, o_oe) -> LuminanceWeights:
    omega = [np.maximum(o, 0.0) for o in (o_ue, o_ne, o_oe)]
    total = omega[0] + omega[1] + omega[2]
    zero = total <= 0.0
    safe = np.where(zero, 1.0, total)
    return LuminanceWeights(*(np.where(zero, 1.0 / 3.0, o / safe) for o in omega))


def target_gradients(w: LuminanceWeights, y_ue, y_ne, y_oe) -> GradientField:
    """Blend exposure gradients. The dark-region weight picks the over-exposed
    frame's gradients and the bright-region weight the under-exposed one's."""
    g_ue, g_ne, g_oe = gradients(y_ue), gradients(y_ne), gradients(y_oe)
    lh = w.w_ue * g_oe.lh + w.w_ne * g_ne.lh + w.w_oe * g_ue.lh
    lv = w.w_ue * g_oe.lv + w.w_ne * g_ne.lv + w.w_oe * g_ue.lv
    return GradientField(lh, lv)


@lru_cache(maxsize=16)
def _difference_spectra(h: int, w: int):
    # transfer functions of the zero-padded [-1, 1] kernels on the rfft grid;
    # kernel tap +1 sits at offset -1 (== n-1) so conv(k, y)[j] = y[j+1] - y[j]
    kh = np.zeros((h, w))
    kh[0, 0] = -1.0
    kh[0, -1] += 1.0
    kv = np.zeros((h, w))
    kv[0, 0] = -1.0
    kv[-1, 0] += 1.0
    dh = sfft.rfft2(kh)
    dv = sfft.rfft2(kv)
    dh.setflags(write=False)
    dv.setflags(write=False)
    return dh, dv


def solve_spectral(x, target: GradientField, sp=SolverParams()) -> np.ndarray:
    """Closed-form minimiser via the DFT. ``sp`` is a :class:`SolverParams` or a bare lambda."""
    x = as_plane(x)
    check_same_shape(x, target.lh)
    lam = _resolve_lambda(sp, x.shape)
    h, w = x.shape
    dh, dv = _difference_spectra(h, w)
    spec = kernels.spectral_combine(sfft.rfft2(x), sfft.rfft2(target.lh), sfft.rfft2(target.lv), dh, dv, lam)
    return sfft.irfft2(spec, s=(h, w))


def _circulant_difference(h: int, w: int, axis: int) -> np.ndarray:
    n = h * w
    idx = np.arange(n).reshape(h, w)
    nxt = np.roll(idx, -1, axis=axis)
    c = -np.eye(n)
    c[idx.ravel(), nxt.ravel()] += 1.0
    return c


def solve_dense_oracle(x, target: GradientField, sp=SolverParams()) -> np.ndarray:
    """Materialise the circulant difference matrices and solve the normal equations directly.

    Reference for :func:`solve_spectral`; limited to small planes.
    """
    x = as_plane(x)
    check_same_shape(x, target.lh)
    h, w = x.shape
    if h * w > DENSE_MAX_PIXELS:
        raise ValueError(f"instance too large for the dense oracle: {h * w} > {DENSE_MAX_PIXELS} pixels")
    lam = _resolve_lambda(sp, x.shape)
    ch = _circulant_difference(h, w, axis=1)
    cv = _circulant_difference(h, w, axis=0)
    a = np.eye(h * w) + lam * (ch.T @ ch) + lam * (cv.T @ cv)
    rhs = x.ravel() + lam * (ch.T @ target.lh.ravel()) + lam * (cv.T @ target.lv.ravel())
    return np.linalg.solve(a, rhs).reshape(h, w)


def objective(y, x, target: GradientField, lam: float) -> float:
    g = gradients(y)
    return float(np.sum((y - x) ** 2) + lam * np.sum((g.lh - target.lh) ** 2) + lam * np.sum((g.lv - target.lv) ** 2))


def fuse_luminance(y_ue, y_ne, y_oe, maps: ClusterMaps,
                   gp: GuidedFilterParams = GuidedFilterParams(),
                   sp: SolverParams = SolverParams()) -> np.ndarray:
    x = average_luminance(y_ue, y_ne, y_oe)
    w = luminance_weights(maps, x, gp)
    target = target_gradients(w, y_ue, y_ne, y_oe)
    return solve_spectral(x, target, sp)
