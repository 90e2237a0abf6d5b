"""Split a luminance plane into dark / normal / bright regions.

One-dimensional Lloyd k-means on the 256-bin gray-level histogram. The
dark cluster drives the under-exposed map ``r_ue``, normal drives
``r_ne`` and bright drives ``r_oe``; downstream, each map selects the
gradients of the exposure that renders that region best.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from hdrfuse import kernels
from hdrfuse.image_core import as_plane

N_LEVELS = 256
MAX_ITER = 100
# tercile midpoints of [0, 255]
INITIAL_CENTERS = (42.5, 127.5, 212.5)


@dataclass(frozen=True)
class ClusterMaps:
    r_ue: np.ndarray
    r_ne: np.ndarray
    r_oe: np.ndarray
    means: tuple[float, float, float]

    @property
    def shape(self):
        return self.r_ue.shape

    @classmethod
    def from_labels(cls, labels, means) -> ClusterMaps:
        """Build maps from a per-pixel label plane with values 0 (dark), 1, 2 (bright)."""
        labels = np.asarray(labels)
        maps = [(labels == c).astype(np.float64) for c in range(3)]
        return cls(*maps, means=tuple(float(m) for m in means))

    @classmethod
    def one_hot(cls, shape, which: str = "ne", mean: float = 128.0) -> ClusterMaps:
        """Every pixel in a single cluster; ``which`` is ``"ue"``, ``"ne"`` or ``"oe"``."""
        idx = {"ue": 0, "ne": 1, "oe": 2}[which]
        return cls.from_labels(np.full(shape, idx), (mean, mean, mean))

    def labels(self) -> np.ndarray:
        return (self.r_ne + 2.0 * self.r_oe).astype(np.intp)


def _quantize(y: np.ndarray) -> np.ndarray:
    return np.clip(np.rint(y), 0, N_LEVELS - 1).astype(np.intp)


def _inherit_empty(centers, counts):
    # an empty cluster reports the mean of the nearest populated one
    means = np.array(centers, dtype=np.float64)
    full = np.flatnonzero(counts > 0)
    for c in np.flatnonzero(counts == 0):
        nearest = full[np.argmin(np.abs(centers[full] - centers[c]))]
        means[c] = centers[nearest]
    return means


def cluster_luminance(y_in, k: int = 3) -> ClusterMaps:
    """Cluster gray levels of ``y_in`` (values on [0, 255]) into dark/normal/bright maps.

    Deterministic: fixed initial centres, ties go to the lower cluster. An
    image with a single gray level puts every pixel in the normal cluster.
    """
    if k != 3:
        raise ValueError("the fusion pipeline needs exactly 3 clusters")
    y = as_plane(y_in)
    levels = _quantize(y)
    hist = np.bincount(levels.ravel(), minlength=N_LEVELS).astype(np.float64)

    occupied = np.flatnonzero(hist)
    if occupied.size == 1:
        g = float(occupied[0])
        return ClusterMaps.one_hot(y.shape, "ne", mean=g)

    level_labels, centers, counts = kernels.hist_kmeans(hist, INITIAL_CENTERS, MAX_ITER)
    level_labels = np.asarray(level_labels, dtype=np.intp)
    centers = np.asarray(centers, dtype=np.float64)
    counts = np.asarray(counts, dtype=np.float64)

    # 1-D Lloyd from sorted seeds keeps centres sorted; reorder defensively anyway
    order = np.argsort(centers, kind="stable")
    rank = np.empty_like(order)
    rank[order] = np.arange(order.size)
    means = _inherit_empty(centers[order], counts[order])
    return ClusterMaps.from_labels(rank[level_labels][levels], means)
