"""Saturation-weighted chroma fusion."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from hdrfuse import kernels
from hdrfuse.image_core import ImageRGB, as_plane, check_same_shape


@dataclass(frozen=True)
class ChromaWeights:
    v_ue: np.ndarray
    v_ne: np.ndarray
    v_oe: np.ndarray


def saturation(img: ImageRGB) -> np.ndarray:
    """Euclidean distance of (r, g, b) from its own mean, per pixel."""
    return kernels.saturation(img.r, img.g, img.b)


def chroma_weights(s_ue, s_ne, s_oe) -> ChromaWeights:
    s = [as_plane(p) for p in (s_ue, s_ne, s_oe)]
    check_same_shape(*s)
    if any(np.any(p < 0) for p in s):
        raise ValueError("saturation must be non-negative")
    total = s[0] + s[1] + s[2]
    zero = total == 0.0
    safe = np.where(zero, 1.0, total)
    return ChromaWeights(*(np.where(zero, 1.0 / 3.0, p / safe) for p in s))


def fuse_chroma(w: ChromaWeights, cb_ue, cb_ne, cb_oe, cr_ue, cr_ne, cr_oe):
    """Weighted average of the three exposures' Cb and Cr planes."""
    check_same_shape(w.v_ue, cb_ue, cb_ne, cb_oe, cr_ue, cr_ne, cr_oe)
    cb = w.v_ue * cb_ue + w.v_ne * cb_ne + w.v_oe * cb_oe
    cr = w.v_ue * cr_ue + w.v_ne * cr_ne + w.v_oe * cr_oe
    return cb, cr
