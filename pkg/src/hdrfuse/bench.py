"""Runtime benchmarks: N^2 log N scaling of the fusion core, and compiled vs numpy kernels."""
from __future__ import annotations

import csv
import math
import time
from dataclasses import dataclass

import numpy as np

from hdrfuse import kernels
from hdrfuse.bracket_sim import CameraResponse, expose, make_test_scene
from hdrfuse.clustering import cluster_luminance
from hdrfuse.image_core import rgb_to_ycbcr, ycbcr_to_rgb
from hdrfuse.pipeline import FusionConfig, fuse_bracket

DEFAULT_SIZES = (64, 128, 256, 512, 1024)


def synthetic_bracket(n: int):
    """Split-window bracket (N x N) with each half brought to mid-gray in one frame."""
    scene = make_test_scene("split-window", n, n)
    resp = CameraResponse(gamma=1.0)
    half = n // 2
    x = 128.0 / 255.0
    t_oe = x / scene.e[:, :half].mean()
    t_ue = x / scene.e[:, half:].mean()
    return [expose(scene, t, resp) for t in (t_ue, math.sqrt(t_ue * t_oe), t_oe)]


def fusion_core(rgb, cfg: FusionConfig = FusionConfig()):
    ycc = [rgb_to_ycbcr(im) for im in rgb]
    maps = cluster_luminance(ycc[1].y)
    return ycbcr_to_rgb(fuse_bracket(*ycc, maps, cfg, rgb=rgb))


def time_call(fn, repeats: int = 3) -> float:
    best = math.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def complexity(n):
    return n * n * math.log2(n)


@dataclass
class ScalingFit:
    sizes: list[int]
    times: list[float]
    c: float
    r2: float

    def predicted(self):
        return [self.c * complexity(n) for n in self.sizes]

    def ratios(self):
        """``T(2N) / T(N)`` for consecutive doublings, keyed by the smaller N."""
        out = {}
        for (n0, t0), (n1, t1) in zip(zip(self.sizes, self.times), zip(self.sizes[1:], self.times[1:])):
            if n1 == 2 * n0:
                out[n0] = t1 / t0
        return out


def fit_scaling(sizes, times) -> ScalingFit:
    """Least-squares fit of ``T = C * N^2 log2 N`` (through the origin)."""
    f = np.array([complexity(n) for n in sizes])
    t = np.asarray(times, dtype=np.float64)
    c = float(f @ t / (f @ f))
    ss_res = float(np.sum((t - c * f) ** 2))
    ss_tot = float(np.sum((t - t.mean()) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    return ScalingFit(list(sizes), [float(v) for v in t], c, r2)


def bench_scaling(sizes=DEFAULT_SIZES, repeats: int = 3, cfg: FusionConfig = FusionConfig()) -> ScalingFit:
    sizes = list(sizes)
    if any(n < 64 for n in sizes) or sizes != sorted(sizes):
        raise ValueError("sizes must be ascending and each >= 64")
    times = []
    for n in sizes:
        rgb = synthetic_bracket(n)
        fusion_core(rgb, cfg)  # warm caches
        times.append(time_call(lambda: fusion_core(rgb, cfg), repeats))
    return fit_scaling(sizes, times)


def write_scaling_csv(path, fit: ScalingFit) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["n", "seconds", "fit_seconds"])
        for n, t, p in zip(fit.sizes, fit.times, fit.predicted()):
            w.writerow([n, f"{t:.6g}", f"{p:.6g}"])
        w.writerow([])
        w.writerow(["C", f"{fit.c:.6g}"])
        w.writerow(["r2", f"{fit.r2:.6f}"])


def format_scaling(fit: ScalingFit) -> str:
    lines = [f"{'N':>6} {'seconds':>10} {'C*N^2*log2N':>12}"]
    for n, t, p in zip(fit.sizes, fit.times, fit.predicted()):
        lines.append(f"{n:>6} {t:>10.4f} {p:>12.4f}")
    lines.append(f"C = {fit.c:.4g} s   R^2 = {fit.r2:.4f}")
    return "\n".join(lines)


def bench_backends(n: int = 512, repeats: int = 3):
    """Time each kernel and the full fusion core under every available backend.

    Returns ``{backend: {task: seconds}}``.
    """
    rng = np.random.default_rng(0)
    plane = rng.uniform(0, 255, (n, n))
    small = rng.uniform(0, 1, (n // 8, n // 8))
    hist = np.bincount(rng.integers(0, 256, n * n), minlength=256).astype(np.float64)
    spec = [np.fft.rfft2(rng.normal(size=(n, n))) for _ in range(5)]
    rgb = synthetic_bracket(n)
    tasks = {
        "box_mean r=1": lambda k: k.box_mean(plane, 1),
        "box_mean r=8": lambda k: k.box_mean(plane, 8),
        "upsample x8": lambda k: k.upsample_bilinear(small, n, n),
        "hist_kmeans": lambda k: k.hist_kmeans(hist, (42.5, 127.5, 212.5), 100),
        "spectral_combine": lambda k: k.spectral_combine(*spec, 3.0),
        "saturation": lambda k: k.saturation(plane, plane.T, plane[::-1]),
    }
    results = {}
    for name in kernels.available_backends():
        with kernels.use_backend(name) as k:
            row = {task: time_call(lambda fn=fn: fn(k), repeats) for task, fn in tasks.items()}
            row["fusion core"] = time_call(lambda: fusion_core(rgb), repeats)
        results[name] = row
    return results


def format_backends(results, n: int) -> str:
    names = sorted(results)
    header = f"{'task (N=' + str(n) + ')':<20}" + "".join(f"{b:>12}" for b in names)
    if len(names) == 2:
        header += f"{'speedup':>10}"
    lines = [header]
    for task in results[names[0]]:
        row = f"{task:<20}" + "".join(f"{results[b][task] * 1e3:>10.2f}ms" for b in names)
        if len(names) == 2 and "cython" in results:
            row += f"{results['python'][task] / results['cython'][task]:>9.1f}x"
        lines.append(row)
    return "\n".join(lines)
