import itertools

import numpy as np
import pytest
from PIL import Image

from hdrfuse.image_core import (
    _RGB_TO_YCC,
    _YCC_TO_RGB,
    ImageRGB,
    ImageYCbCr,
    MalformedImageError,
    UnreadableImageError,
    UnsupportedBitDepthError,
    load_image,
    load_pfm,
    rgb_to_ycbcr,
    save_image,
    save_pfm,
    ycbcr_to_rgb,
)


def pixel(r, g, b):
    return ImageRGB(np.array([[r]], float), np.array([[g]], float), np.array([[b]], float))


def ycc_pixel(y, cb, cr):
    return ImageYCbCr(np.array([[y]], float), np.array([[cb]], float), np.array([[cr]], float))


def values(img, names):
    return tuple(float(getattr(img, n)[0, 0]) for n in names)


def test_black_and_white():
    assert values(rgb_to_ycbcr(pixel(0, 0, 0)), "y cb cr".split()) == pytest.approx((0, 128, 128), abs=1e-12)
    assert values(rgb_to_ycbcr(pixel(255, 255, 255)), "y cb cr".split()) == pytest.approx((255, 128, 128), abs=1e-9)


def test_pure_red():
    y, cb, cr = values(rgb_to_ycbcr(pixel(255, 0, 0)), "y cb cr".split())
    assert y == pytest.approx(0.299 * 255)
    assert cb == pytest.approx(128 - 0.299 / 1.772 * 255)
    assert cb == pytest.approx(84.97, abs=0.005)
    assert cr == 255.0


def test_inverse_examples():
    assert values(ycbcr_to_rgb(ycc_pixel(128, 128, 128)), "rgb") == pytest.approx((128, 128, 128), abs=1e-9)
    assert values(ycbcr_to_rgb(ycc_pixel(255, 128, 128)), "rgb") == pytest.approx((255, 255, 255), abs=1e-9)


def test_matrices_are_mutual_inverses():
    np.testing.assert_allclose(_RGB_TO_YCC @ _YCC_TO_RGB, np.eye(3), atol=1e-12)
    np.testing.assert_allclose(_YCC_TO_RGB @ _RGB_TO_YCC, np.eye(3), atol=1e-12)


def test_roundtrip_lattice_within_one_level():
    lattice = np.array(list(itertools.product(np.linspace(0, 255, 8).round(), repeat=3)))
    img = ImageRGB.from_array(lattice.reshape(8, 64, 3))
    back = ycbcr_to_rgb(rgb_to_ycbcr(img)).to_uint8().astype(int)
    assert np.abs(back - lattice.reshape(8, 64, 3)).max() <= 1


def test_float_roundtrip_without_clipping(rng):
    # chroma-interior colours: exact inverse before quantisation
    a = rng.uniform(40, 215, (16, 16, 3))
    back = ycbcr_to_rgb(rgb_to_ycbcr(ImageRGB.from_array(a)), clamp=False).stack()
    np.testing.assert_allclose(back, a, atol=1e-10)


def test_output_clamped():
    out = ycbcr_to_rgb(ycc_pixel(300, 250, 5))
    assert all(0 <= v <= 255 for v in values(out, "rgb"))


def test_plane_validation():
    with pytest.raises(ValueError):
        ImageRGB(np.zeros((2, 2)), np.zeros((2, 3)), np.zeros((2, 2)))
    with pytest.raises(ValueError):
        ImageRGB(np.full((2, 2), np.nan), np.zeros((2, 2)), np.zeros((2, 2)))
    with pytest.raises(ValueError):
        ImageRGB(np.zeros((0, 2)), np.zeros((0, 2)), np.zeros((0, 2)))


def test_ppm_roundtrip_2x2(tmp_path):
    a = np.array([[[0, 10, 20], [30, 40, 50]], [[255, 254, 253], [1, 2, 3]]], float)
    save_image(tmp_path / "a.ppm", ImageRGB.from_array(a))
    np.testing.assert_array_equal(load_image(tmp_path / "a.ppm").stack(), a)


def test_ppm_load_save_bit_identical(tmp_path, rng):
    a = rng.integers(0, 256, (5, 7, 3)).astype(np.uint8)
    raw = b"P6\n7 5\n255\n" + a.tobytes()
    (tmp_path / "in.ppm").write_bytes(raw)
    save_image(tmp_path / "out.ppm", load_image(tmp_path / "in.ppm"))
    assert (tmp_path / "out.ppm").read_bytes() == raw


def test_ppm_header_comments(tmp_path):
    (tmp_path / "c.ppm").write_bytes(b"P6\n# comment\n1 1\n# another\n255\n\x01\x02\x03")
    assert load_image(tmp_path / "c.ppm").stack().ravel().tolist() == [1, 2, 3]


def test_png_roundtrip(tmp_path, rng):
    a = rng.integers(0, 256, (6, 5, 3)).astype(float)
    save_image(tmp_path / "a.png", ImageRGB.from_array(a))
    np.testing.assert_array_equal(load_image(tmp_path / "a.png").stack(), a)


def test_png_rgba_and_gray(tmp_path):
    Image.new("RGBA", (3, 2), (10, 20, 30, 0)).save(tmp_path / "rgba.png")
    assert load_image(tmp_path / "rgba.png").stack()[0, 0].tolist() == [10, 20, 30]
    Image.new("L", (3, 2), 77).save(tmp_path / "l.png")
    assert load_image(tmp_path / "l.png").stack()[1, 2].tolist() == [77, 77, 77]


def test_png_16bit_rejected(tmp_path):
    Image.fromarray(np.full((4, 4), 40000, dtype=np.uint16)).save(tmp_path / "deep.png")
    with pytest.raises(UnsupportedBitDepthError):
        load_image(tmp_path / "deep.png")


def test_ppm_16bit_rejected(tmp_path):
    (tmp_path / "deep.ppm").write_bytes(b"P6\n1 1\n65535\n" + b"\0" * 6)
    with pytest.raises(UnsupportedBitDepthError):
        load_image(tmp_path / "deep.ppm")


def test_truncated_files(tmp_path, rng):
    a = ImageRGB.from_array(rng.integers(0, 256, (32, 32, 3)).astype(float))
    save_image(tmp_path / "a.png", a)
    data = (tmp_path / "a.png").read_bytes()
    (tmp_path / "t.png").write_bytes(data[: len(data) // 2])
    with pytest.raises(MalformedImageError):
        load_image(tmp_path / "t.png")
    (tmp_path / "h.png").write_bytes(data[:20])
    with pytest.raises(MalformedImageError):
        load_image(tmp_path / "h.png")
    save_image(tmp_path / "a.ppm", a)
    data = (tmp_path / "a.ppm").read_bytes()
    (tmp_path / "t.ppm").write_bytes(data[:-10])
    with pytest.raises(MalformedImageError):
        load_image(tmp_path / "t.ppm")
    (tmp_path / "hdr.ppm").write_bytes(b"P6\n3")
    with pytest.raises(MalformedImageError):
        load_image(tmp_path / "hdr.ppm")


def test_unreadable(tmp_path):
    with pytest.raises(UnreadableImageError):
        load_image(tmp_path / "missing.png")
    with pytest.raises(MalformedImageError):
        (tmp_path / "junk.bin").write_bytes(b"hello world")
        load_image(tmp_path / "junk.bin")


def test_errors_are_distinct():
    assert len({UnreadableImageError, UnsupportedBitDepthError, MalformedImageError}) == 3
    assert not issubclass(MalformedImageError, UnsupportedBitDepthError)


def test_pfm_roundtrip(tmp_path, rng):
    a = rng.uniform(0, 1000, (4, 6, 3)).astype(np.float32)
    save_pfm(tmp_path / "e.pfm", a)
    np.testing.assert_array_equal(load_pfm(tmp_path / "e.pfm"), a)


def test_pfm_big_endian_and_row_order(tmp_path):
    # two rows, stored bottom row first
    body = np.array([[3.0], [1.0]], dtype=">f4").tobytes()
    (tmp_path / "g.pfm").write_bytes(b"Pf\n1 2\n1.0\n" + body)
    assert load_pfm(tmp_path / "g.pfm")[:, 0, 0].tolist() == [1.0, 3.0]
