"""Exposure-time selection from cluster means and a camera characteristic function.

The characteristic function maps log2 exposure time (relative to the auto
exposure) to the gray level the camera renders. To bring a region whose
mean is ``m`` to ``target_gray`` we shift the exposure by
``cf.inverse(target_gray) - cf.inverse(m)`` stops.
"""
from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from hdrfuse.clustering import ClusterMaps

TARGET_GRAY = 128.0
THIRD_STOP = 1.0 / 3.0


class CharacteristicFnError(ValueError):
    pass


class CharacteristicFn:
    """Piecewise-linear, monotone map from log2 exposure time to gray level.

    Flat runs are allowed only at the two ends of the table (sensor floor and
    saturation); they are trimmed so the remaining table is strictly
    increasing and can be inverted.
    """

    def __init__(self, log_times, grays):
        lt = [float(v) for v in log_times]
        gv = [float(v) for v in grays]
        if len(lt) != len(gv):
            raise CharacteristicFnError("log_times and grays differ in length")
        if len(lt) < 2:
            raise CharacteristicFnError("need at least 2 samples")
        if not all(math.isfinite(v) for v in lt + gv):
            raise CharacteristicFnError("non-finite sample")
        if any(b <= a for a, b in zip(lt, lt[1:])):
            raise CharacteristicFnError("log times must be strictly increasing")
        if any(b < a for a, b in zip(gv, gv[1:])):
            raise CharacteristicFnError("gray levels decrease: characteristic function is not monotone")

        lo = 0
        while lo + 1 < len(gv) and gv[lo + 1] == gv[lo]:
            lo += 1
        hi = len(gv) - 1
        while hi - 1 > lo and gv[hi - 1] == gv[hi]:
            hi -= 1
        if hi - lo < 1:
            raise CharacteristicFnError("characteristic function is constant")
        if any(b == a for a, b in zip(gv[lo:hi], gv[lo + 1 : hi + 1])):
            raise CharacteristicFnError("flat segment inside the table")
        self.log_times = lt[lo : hi + 1]
        self.grays = gv[lo : hi + 1]

    def __repr__(self):
        return f"CharacteristicFn({len(self.log_times)} samples, gray {self.grays[0]:g}..{self.grays[-1]:g})"

    @property
    def gray_range(self):
        return self.grays[0], self.grays[-1]

    @property
    def log_range(self):
        return self.log_times[0], self.log_times[-1]

    def __call__(self, log_t):
        return np.interp(log_t, self.log_times, self.grays)

    def inverse(self, gray: float) -> float:
        """Log time at which the table reaches ``gray``; clamped to the table ends."""
        g = self.grays
        if gray <= g[0]:
            return self.log_times[0]
        if gray >= g[-1]:
            return self.log_times[-1]
        i = bisect.bisect_right(g, gray) - 1
        t0, t1 = self.log_times[i], self.log_times[i + 1]
        return t0 + (gray - g[i]) * (t1 - t0) / (g[i + 1] - g[i])

    @classmethod
    def default(cls, stops: float = 12.0, n: int = 97) -> CharacteristicFn:
        """Smoothstep S-curve over ``stops`` stops, centred on the auto exposure (gray 127.5)."""
        lt = np.linspace(-stops / 2, stops / 2, n)
        u = (lt + stops / 2) / stops
        return cls(lt, 255.0 * u * u * (3.0 - 2.0 * u))

    @classmethod
    def load(cls, path) -> CharacteristicFn:
        """Read ``log2_time gray`` pairs, one per line; ``#`` starts a comment."""
        lt, gv = [], []
        for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2:
                raise CharacteristicFnError(f"{path}:{lineno}: expected 'log2_time gray'")
            try:
                lt.append(float(parts[0]))
                gv.append(float(parts[1]))
            except ValueError:
                raise CharacteristicFnError(f"{path}:{lineno}: not a number") from None
        return cls(lt, gv)

    def save(self, path) -> None:
        lines = ["# log2_time gray"]
        lines += [f"{t!r} {g!r}" for t, g in zip(self.log_times, self.grays)]
        Path(path).write_text("\n".join(lines) + "\n")


@dataclass(frozen=True)
class ExposureTriple:
    t_ue: float
    t_ne: float
    t_oe: float
    warnings: tuple[str, ...] = field(default=())

    def as_tuple(self):
        return self.t_ue, self.t_ne, self.t_oe


def exposure_shift(cf: CharacteristicFn, mean: float, target_gray: float = TARGET_GRAY):
    """Stops to add so a region at ``mean`` renders at ``target_gray``.

    Returns ``(shift, warning)``; ``warning`` is None unless an input had to
    be clamped into the table's gray range.
    """
    warning = None
    g0, g1 = cf.gray_range
    if not g0 <= mean <= g1:
        warning = f"cluster mean {mean:g} outside characteristic range [{g0:g}, {g1:g}]; clamped"
    if not g0 <= target_gray <= g1:
        warning = f"target gray {target_gray:g} outside characteristic range [{g0:g}, {g1:g}]; clamped"
    if mean == target_gray:
        return 0.0, warning
    return cf.inverse(target_gray) - cf.inverse(mean), warning


def _quantize_stops(shift: float) -> float:
    return round(shift / THIRD_STOP) * THIRD_STOP


def select_exposures(maps: ClusterMaps, t_auto: float, cf: CharacteristicFn,
                     target_gray: float = TARGET_GRAY, third_stops: bool = False) -> ExposureTriple:
    """Exposure times for the bracket.

    The dark cluster sets the over-exposed time, the normal cluster the
    normal time, the bright cluster the under-exposed time.
    """
    if not t_auto > 0:
        raise ValueError("t_auto must be positive")
    dark, normal, bright = maps.means
    times = []
    warnings = []
    for m in (bright, normal, dark):
        shift, warning = exposure_shift(cf, m, target_gray)
        if warning:
            warnings.append(warning)
        if third_stops:
            shift = _quantize_stops(shift)
        times.append(t_auto * 2.0**shift)
    t_ue, t_ne, t_oe = times
    return ExposureTriple(t_ue, t_ne, t_oe, tuple(warnings))
