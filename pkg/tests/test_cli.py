import csv

import numpy as np
import pytest

from hdrfuse.cli import EXIT_INVALID, EXIT_IO, EXIT_OK, main
from hdrfuse.image_core import ImageRGB, load_image, save_image


@pytest.fixture
def bracket(tmp_path):
    out = tmp_path / "bracket"
    assert main(["simulate-bracket", "--scene", "split-window", "--width", "64", "--height", "48",
                 "--times", "0.5,15,500", "--gamma", "1", "--out", str(out)]) == EXIT_OK
    return [out / n for n in ("under.png", "normal.png", "over.png")]


def test_simulate_writes_three_pngs(bracket):
    files = sorted(p.name for p in bracket[0].parent.iterdir())
    assert files == ["normal.png", "over.png", "under.png"]
    assert load_image(bracket[0]).shape == (48, 64)


def test_simulate_from_pfm(tmp_path):
    from hdrfuse.image_core import save_pfm

    save_pfm(tmp_path / "e.pfm", np.full((8, 10, 3), 0.5, np.float32))
    assert main(["simulate-bracket", "--pfm", str(tmp_path / "e.pfm"), "--times", "0.1,1,2",
                 "--out", str(tmp_path / "o")]) == EXIT_OK
    assert load_image(tmp_path / "o" / "over.png").shape == (8, 10)


@pytest.mark.parametrize("times", ["1,2", "3,2,1", "0,1,2"])
def test_simulate_rejects_bad_times(tmp_path, times):
    assert main(["simulate-bracket", "--times", times, "--out", str(tmp_path)]) == EXIT_INVALID


def test_fuse_and_determinism(bracket, tmp_path):
    a, b = tmp_path / "a.png", tmp_path / "b.png"
    assert main(["fuse", *map(str, bracket), "-o", str(a)]) == EXIT_OK
    assert main(["fuse", *map(str, bracket), "-o", str(b)]) == EXIT_OK
    assert a.read_bytes() == b.read_bytes()
    assert load_image(a).shape == (48, 64)


def test_fuse_fast_and_flags(bracket, tmp_path):
    out = tmp_path / "f.png"
    assert main(["fuse", *map(str, bracket), "-o", str(out), "--fast", "--s-lambda", "3",
                 "--guided-r", "2", "--guided-eps", "4"]) == EXIT_OK
    assert main(["--backend", "python", "fuse", *map(str, bracket), "-o", str(out), "--s-g", "1"]) == EXIT_OK
    assert main(["fuse", *map(str, bracket), "-o", str(out), "--s-g", "9"]) == EXIT_INVALID


def test_fuse_identical_images(tmp_path, rng):
    a = rng.integers(0, 256, (24, 32, 3)).astype(float)
    save_image(tmp_path / "in.png", ImageRGB.from_array(a))
    p = str(tmp_path / "in.png")
    assert main(["fuse", p, p, p, "-o", str(tmp_path / "out.png")]) == EXIT_OK
    out = load_image(tmp_path / "out.png").stack()
    assert np.abs(out - a).max() <= 1


def test_fuse_dimension_mismatch(bracket, tmp_path):
    save_image(tmp_path / "small.png", ImageRGB.from_array(np.zeros((4, 4, 3))))
    code = main(["fuse", str(bracket[0]), str(bracket[1]), str(tmp_path / "small.png"), "-o", str(tmp_path / "o.png")])
    assert code == EXIT_INVALID


def test_fuse_unreadable(bracket, tmp_path):
    code = main(["fuse", str(bracket[0]), str(bracket[1]), str(tmp_path / "nope.png"), "-o", str(tmp_path / "o.png")])
    assert code == EXIT_IO


def test_select_exposures_mid_gray(tmp_path, capsys):
    save_image(tmp_path / "gray.png", ImageRGB.from_array(np.full((8, 8, 3), 128.0)))
    assert main(["select-exposures", "--t-auto", "0.02", str(tmp_path / "gray.png")]) == EXIT_OK
    lines = capsys.readouterr().out.split()
    assert lines == ["t_ue", "0.02", "t_ne", "0.02", "t_oe", "0.02"]


def test_select_exposures_warns_outside_cf(tmp_path, capsys):
    (tmp_path / "cf.txt").write_text("-2 50\n0 128\n2 200\n")
    a = np.full((8, 8, 3), 10.0)
    a[:, 4:] = 128
    save_image(tmp_path / "img.png", ImageRGB.from_array(a))
    assert main(["select-exposures", "--cf", str(tmp_path / "cf.txt"), "--t-auto", "1",
                 str(tmp_path / "img.png")]) == EXIT_OK
    captured = capsys.readouterr()
    assert "warning" in captured.err and "outside" in captured.err
    assert "t_oe 4" in captured.out


def test_select_exposures_errors(tmp_path):
    save_image(tmp_path / "g.png", ImageRGB.from_array(np.full((4, 4, 3), 128.0)))
    (tmp_path / "bad.txt").write_text("0 100\n1 50\n")
    img = str(tmp_path / "g.png")
    assert main(["select-exposures", "--cf", str(tmp_path / "bad.txt"), "--t-auto", "1", img]) == EXIT_INVALID
    assert main(["select-exposures", "--cf", str(tmp_path / "none.txt"), "--t-auto", "1", img]) == EXIT_IO
    assert main(["select-exposures", "--t-auto", "-1", img]) == EXIT_INVALID


def test_bench_scaling_csv(tmp_path, capsys):
    out = tmp_path / "scaling.csv"
    assert main(["bench-scaling", "--sizes", "64,128", "--repeats", "1", "--csv", str(out)]) == EXIT_OK
    rows = list(csv.reader(out.open()))
    assert rows[0] == ["n", "seconds", "fit_seconds"]
    assert [r[0] for r in rows[1:3]] == ["64", "128"]
    assert "R^2" in capsys.readouterr().out
    assert main(["bench-scaling", "--sizes", "32,64"]) == EXIT_INVALID


def test_bench_backends(capsys):
    assert main(["bench-backends", "--size", "32", "--repeats", "1"]) == EXIT_OK
    assert "fusion core" in capsys.readouterr().out
