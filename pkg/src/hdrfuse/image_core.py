"""Planar images, full-range BT.601 colour conversion and raster I/O.

A plane is a 2-D float64 numpy array (rows x columns). Images are frozen
dataclasses of three planes. Arithmetic stays in float on the [0, 255]
scale; values are rounded to 8 bits only when written to disk.
"""
from __future__ import annotations

import struct
import zlib
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image

# full-range BT.601 (JPEG/JFIF)
_RGB_TO_YCC = np.array(
    [
        [0.299, 0.587, 0.114],
        [-0.299 / 1.772, -0.587 / 1.772, 0.5],
        [0.5, -0.587 / 1.402, -0.114 / 1.402],
    ]
)
_YCC_TO_RGB = np.linalg.inv(_RGB_TO_YCC)
CHROMA_OFFSET = 128.0


class ImageIOError(Exception):
    """Base class for raster read/write failures."""


class UnreadableImageError(ImageIOError):
    pass


class UnsupportedBitDepthError(ImageIOError):
    pass


class MalformedImageError(ImageIOError):
    pass


def as_plane(a) -> np.ndarray:
    """Validate and return ``a`` as a finite 2-D float64 plane."""
    p = np.asarray(a, dtype=np.float64)
    if p.ndim != 2 or p.shape[0] < 1 or p.shape[1] < 1:
        raise ValueError(f"plane must be 2-D and non-empty, got shape {p.shape}")
    if not np.all(np.isfinite(p)):
        raise ValueError("plane contains non-finite values")
    return p


def check_same_shape(*planes) -> tuple[int, int]:
    shapes = {np.shape(p) for p in planes}
    if len(shapes) != 1:
        raise ValueError(f"dimension mismatch: {sorted(shapes)}")
    return shapes.pop()


@dataclass(frozen=True)
class ImageRGB:
    r: np.ndarray
    g: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        for name in ("r", "g", "b"):
            object.__setattr__(self, name, as_plane(getattr(self, name)))
        check_same_shape(self.r, self.g, self.b)

    @property
    def shape(self):
        return self.r.shape

    def stack(self) -> np.ndarray:
        return np.stack([self.r, self.g, self.b], axis=-1)

    @classmethod
    def from_array(cls, a) -> ImageRGB:
        a = np.asarray(a, dtype=np.float64)
        if a.ndim != 3 or a.shape[2] != 3:
            raise ValueError(f"expected H x W x 3 array, got {a.shape}")
        return cls(a[..., 0], a[..., 1], a[..., 2])

    def to_uint8(self) -> np.ndarray:
        return np.clip(np.rint(self.stack()), 0, 255).astype(np.uint8)


@dataclass(frozen=True)
class ImageYCbCr:
    y: np.ndarray
    cb: np.ndarray
    cr: np.ndarray

    def __post_init__(self):
        for name in ("y", "cb", "cr"):
            object.__setattr__(self, name, as_plane(getattr(self, name)))
        check_same_shape(self.y, self.cb, self.cr)

    @property
    def shape(self):
        return self.y.shape


def rgb_to_ycbcr(img: ImageRGB) -> ImageYCbCr:
    """Full-range BT.601. Chroma is clipped to [0, 255] (pure red/blue reach 255.5)."""
    ycc = img.stack() @ _RGB_TO_YCC.T
    cb = np.clip(ycc[..., 1] + CHROMA_OFFSET, 0.0, 255.0)
    cr = np.clip(ycc[..., 2] + CHROMA_OFFSET, 0.0, 255.0)
    return ImageYCbCr(ycc[..., 0], cb, cr)


def ycbcr_to_rgb(img: ImageYCbCr, clamp: bool = True) -> ImageRGB:
    """Inverse of :func:`rgb_to_ycbcr`; clamps to [0, 255] unless told not to."""
    ycc = np.stack([img.y, img.cb - CHROMA_OFFSET, img.cr - CHROMA_OFFSET], axis=-1)
    rgb = ycc @ _YCC_TO_RGB.T
    if clamp:
        rgb = np.clip(rgb, 0.0, 255.0)
    return ImageRGB.from_array(rgb)


# ---------------------------------------------------------------- raster I/O

_PNG_SIG = b"\x89PNG\r\n\x1a\n"


def _read_bytes(path) -> bytes:
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        raise UnreadableImageError(f"cannot read {path}: {exc}") from exc


def _ppm_tokens(data: bytes, count: int):
    """Return ``count`` header tokens and the offset of the raster."""
    tokens = []
    i, n = 0, len(data)
    while len(tokens) < count:
        while i < n and data[i : i + 1].isspace():
            i += 1
        if i < n and data[i : i + 1] == b"#":
            while i < n and data[i : i + 1] not in (b"\n", b"\r"):
                i += 1
            continue
        start = i
        while i < n and not data[i : i + 1].isspace() and data[i : i + 1] != b"#":
            i += 1
        if start == i:
            raise MalformedImageError("truncated PPM header")
        tokens.append(data[start:i])
    # exactly one whitespace byte separates the header from the raster
    if i >= n or not data[i : i + 1].isspace():
        raise MalformedImageError("truncated PPM header")
    return tokens, i + 1


def _load_ppm(data: bytes) -> np.ndarray:
    tokens, offset = _ppm_tokens(data, 4)
    if tokens[0] != b"P6":
        raise MalformedImageError(f"unsupported PNM magic {tokens[0]!r}")
    try:
        w, h, maxval = (int(t) for t in tokens[1:])
    except ValueError:
        raise MalformedImageError("non-numeric PPM header field") from None
    if w < 1 or h < 1 or maxval < 1:
        raise MalformedImageError("invalid PPM dimensions")
    if maxval > 255:
        raise UnsupportedBitDepthError(f"PPM maxval {maxval} (16-bit) is not supported")
    need = w * h * 3
    raster = data[offset : offset + need]
    if len(raster) < need:
        raise MalformedImageError(f"truncated PPM raster: {len(raster)} of {need} bytes")
    a = np.frombuffer(raster, dtype=np.uint8).reshape(h, w, 3).astype(np.float64)
    if maxval != 255:
        a = a * (255.0 / maxval)
    return a


def _png_ihdr(data: bytes):
    if len(data) < 33 or data[12:16] != b"IHDR":
        raise MalformedImageError("truncated or missing PNG IHDR chunk")
    w, h, depth, color_type = struct.unpack(">IIBB", data[16:26])
    if zlib.crc32(data[12:29]) != struct.unpack(">I", data[29:33])[0]:
        raise MalformedImageError("PNG IHDR checksum mismatch")
    return w, h, depth, color_type


def _load_png(path, data: bytes) -> np.ndarray:
    _, _, depth, color_type = _png_ihdr(data)
    # palette images carry 8-bit samples regardless of index depth
    if color_type != 3 and depth != 8:
        raise UnsupportedBitDepthError(f"PNG bit depth {depth} is not supported (8-bit only)")
    try:
        with Image.open(path) as im:
            im.load()
            rgb = im.convert("RGB")
    except (OSError, SyntaxError, ValueError) as exc:
        raise MalformedImageError(f"corrupt PNG stream in {path}: {exc}") from exc
    return np.asarray(rgb, dtype=np.float64)


def load_image(path) -> ImageRGB:
    """Read an 8-bit PNG (grey, RGB, RGBA, palette) or binary PPM (P6)."""
    data = _read_bytes(path)
    if data.startswith(_PNG_SIG):
        a = _load_png(path, data)
    elif data.startswith(b"P6"):
        a = _load_ppm(data)
    else:
        raise MalformedImageError(f"{path}: not a PNG or P6 PPM file")
    return ImageRGB.from_array(a)


def save_image(path, img: ImageRGB) -> None:
    """Write PNG, or binary PPM when the suffix is ``.ppm``."""
    path = Path(path)
    a = img.to_uint8()
    try:
        if path.suffix.lower() == ".ppm":
            h, w, _ = a.shape
            path.write_bytes(b"P6\n%d %d\n255\n" % (w, h) + a.tobytes())
        else:
            Image.fromarray(a).save(path, format="PNG")
    except OSError as exc:
        raise ImageIOError(f"cannot write {path}: {exc}") from exc


def load_pfm(path) -> np.ndarray:
    """Read a PFM file into an H x W x C float64 array (C is 1 or 3), top row first."""
    data = _read_bytes(path)
    tokens, offset = _ppm_tokens(data, 4)
    magic = tokens[0]
    if magic not in (b"PF", b"Pf"):
        raise MalformedImageError(f"unsupported PFM magic {magic!r}")
    channels = 3 if magic == b"PF" else 1
    try:
        w, h = int(tokens[1]), int(tokens[2])
        scale = float(tokens[3])
    except ValueError:
        raise MalformedImageError("non-numeric PFM header field") from None
    if w < 1 or h < 1 or scale == 0.0:
        raise MalformedImageError("invalid PFM header")
    dtype = "<f4" if scale < 0 else ">f4"
    need = w * h * channels * 4
    raster = data[offset : offset + need]
    if len(raster) < need:
        raise MalformedImageError(f"truncated PFM raster: {len(raster)} of {need} bytes")
    a = np.frombuffer(raster, dtype=dtype).reshape(h, w, channels)
    # PFM stores the bottom row first
    return np.ascontiguousarray(a[::-1], dtype=np.float64)


def save_pfm(path, a) -> None:
    """Write a little-endian PFM from an H x W or H x W x 3 array."""
    a = np.asarray(a, dtype="<f4")
    if a.ndim == 2:
        a = a[..., None]
    h, w, c = a.shape
    if c not in (1, 3):
        raise ValueError("PFM supports 1 or 3 channels")
    header = b"%s\n%d %d\n-1.0\n" % (b"PF" if c == 3 else b"Pf", w, h)
    Path(path).write_bytes(header + np.ascontiguousarray(a[::-1]).tobytes())
