import math

import pytest

from hdrfuse.bench import bench_scaling, complexity, fit_scaling


def test_fit_recovers_exact_constant():
    sizes = [64, 128, 256, 512]
    fit = fit_scaling(sizes, [3e-8 * complexity(n) for n in sizes])
    assert fit.c == pytest.approx(3e-8)
    assert fit.r2 == pytest.approx(1.0)


def test_fit_quality_drops_for_wrong_law():
    sizes = [64, 128, 256, 512, 1024]
    fit = fit_scaling(sizes, [1e-3 * n for n in sizes])
    assert fit.r2 < 0.95


def test_ratio_model():
    # 4 * (1 + 1/log2 N) for a pure N^2 log N cost
    for n in (256, 512):
        assert complexity(2 * n) / complexity(n) == pytest.approx(4 * (1 + 1 / math.log2(n)))


def test_rejects_small_or_unsorted_sizes():
    with pytest.raises(ValueError):
        bench_scaling([32, 64])
    with pytest.raises(ValueError):
        bench_scaling([128, 64])


@pytest.mark.slow
def test_measured_doubling_ratio():
    fit = bench_scaling((256, 512, 1024), repeats=5)
    ratios = fit.ratios()
    assert set(ratios) == {256, 512}
    for n, r in ratios.items():
        assert 3.5 <= r <= 5.5, f"T({2 * n})/T({n}) = {r:.2f}"
