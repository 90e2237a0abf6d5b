"""Gray-guide guided filter with an optional down-sampled fast path."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from hdrfuse import kernels
from hdrfuse.image_core import as_plane, check_same_shape


@dataclass(frozen=True)
class GuidedFilterParams:
    """``r`` is the window radius, ``eps`` the regulariser in guide-variance
    units (gray levels squared for a [0, 255] guide), and the planes are
    down-sampled by ``2**s_g`` before filtering."""

    r: int = 1
    eps: float = 1.0
    s_g: int = 0

    def __post_init__(self):
        if int(self.r) != self.r or self.r < 1:
            raise ValueError("guided filter radius r must be an integer >= 1")
        if not self.eps > 0:
            raise ValueError("guided filter eps must be > 0")
        if int(self.s_g) != self.s_g or not 0 <= self.s_g <= 4:
            raise ValueError("s_g must be an integer in [0, 4]")


def downsample(a: np.ndarray, factor: int) -> np.ndarray:
    """Block average by ``factor``; ragged edges are padded by replication."""
    if factor == 1:
        return a
    h, w = a.shape
    ph, pw = -h % factor, -w % factor
    if ph or pw:
        a = np.pad(a, ((0, ph), (0, pw)), mode="edge")
    hh, ww = a.shape
    return a.reshape(hh // factor, factor, ww // factor, factor).mean(axis=(1, 3))


def _filter(guide, src, r, eps):
    mean_g = kernels.box_mean(guide, r)
    mean_p = kernels.box_mean(src, r)
    cov = kernels.box_mean(guide * src, r) - mean_g * mean_p
    var = kernels.box_mean(guide * guide, r) - mean_g * mean_g
    a = cov / (var + eps)
    b = mean_p - a * mean_g
    return kernels.box_mean(a, r) * guide + kernels.box_mean(b, r)


def guided_filter(guide, src, p: GuidedFilterParams = GuidedFilterParams()) -> np.ndarray:
    guide = as_plane(guide)
    src = as_plane(src)
    check_same_shape(guide, src)
    if p.s_g == 0:
        return _filter(guide, src, p.r, p.eps)
    factor = 2**p.s_g
    small = _filter(downsample(guide, factor), downsample(src, factor), p.r, p.eps)
    h, w = guide.shape
    return kernels.upsample_bilinear(small, h, w)
