"""Forward camera model: render 8-bit exposures of a linear irradiance map."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from hdrfuse.image_core import ImageRGB, load_pfm

SCENES = ("gradient-ramp", "split-window", "checker-hdr")
SPLIT_RATIO = 1000.0
CHECKER_RATIO = 100.0
RAMP_DECADES = 4


@dataclass(frozen=True)
class IrradianceMap:
    """Linear scene irradiance, H x W x 3, non-negative."""

    e: np.ndarray

    def __post_init__(self):
        e = np.asarray(self.e, dtype=np.float64)
        if e.ndim == 2:
            e = np.repeat(e[..., None], 3, axis=2)
        if e.ndim != 3 or e.shape[2] != 3 or e.shape[0] < 1 or e.shape[1] < 1:
            raise ValueError(f"irradiance must be H x W or H x W x 3, got {e.shape}")
        if not np.all(np.isfinite(e)) or np.any(e < 0):
            raise ValueError("irradiance must be finite and non-negative")
        object.__setattr__(self, "e", e)

    @property
    def shape(self):
        return self.e.shape[:2]

    @classmethod
    def from_pfm(cls, path) -> IrradianceMap:
        return cls(load_pfm(path))


@dataclass(frozen=True)
class CameraResponse:
    """``255 * min(1, (x / white) ** (1 / gamma))`` for exposure ``x = E * t``.

    ``gamma=1`` gives a linear sensor that clips at ``white``.
    """

    gamma: float = 2.2
    white: float = 1.0

    def __post_init__(self):
        if not self.gamma > 0 or not self.white > 0:
            raise ValueError("gamma and white must be positive")

    def __call__(self, x):
        x = np.maximum(np.asarray(x, dtype=np.float64) / self.white, 0.0)
        return 255.0 * np.minimum(1.0, x ** (1.0 / self.gamma))


def expose(scene: IrradianceMap, t: float, resp: CameraResponse = CameraResponse(),
           noise_sigma: float = 0.0, seed=None) -> ImageRGB:
    if not t > 0:
        raise ValueError("exposure time must be positive")
    v = resp(scene.e * t)
    if noise_sigma > 0:
        v = v + np.random.default_rng(seed).normal(0.0, noise_sigma, v.shape)
    return ImageRGB.from_array(np.clip(np.rint(v), 0.0, 255.0))


def _texture(h, w):
    # +-25 % multiplicative ripple so every region carries gradients
    yy, xx = np.mgrid[0:h, 0:w].astype(np.float64)
    return 1.0 + 0.25 * np.sin(2 * np.pi * xx / 16.0) * np.cos(2 * np.pi * yy / 12.0)


def make_test_scene(kind: str, w: int, h: int) -> IrradianceMap:
    """Procedural HDR scenes.

    ``split-window``: left half 1000x darker than the right, same texture.
    ``gradient-ramp``: left-to-right log-uniform ramp over four decades.
    ``checker-hdr``: checkerboard of patches alternating 1:100.
    """
    if w < 8 or h < 8:
        raise ValueError("test scenes need w, h >= 8")
    tint = np.array([1.0, 0.85, 0.7])
    if kind == "split-window":
        base = np.full((h, w), 1.0 / SPLIT_RATIO)
        base[:, w // 2 :] = 1.0
        e = base * _texture(h, w)
    elif kind == "gradient-ramp":
        ramp = np.logspace(-RAMP_DECADES, 0, w)
        e = np.broadcast_to(ramp, (h, w)).copy()
        tint = np.ones(3)
    elif kind == "checker-hdr":
        size = max(2, min(w, h) // 8)
        yy, xx = np.mgrid[0:h, 0:w]
        on = ((yy // size) + (xx // size)) % 2 == 1
        e = np.where(on, 1.0, 1.0 / CHECKER_RATIO)
    else:
        raise ValueError(f"unknown scene {kind!r}; choose from {SCENES}")
    return IrradianceMap(e[..., None] * tint)
