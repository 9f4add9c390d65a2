"""Raster types, color conversion, resampling, and gradients.

Everything downstream moves pixels through :class:`ImageBuffer`: 8-bit,
1 or 3 channels, row-major. All operations are pure functions with
pinned rounding (round half up) so outputs are byte-stable across runs.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image


class InvalidArgumentError(ValueError):
    """Raised when an operation is called outside its documented domain."""


def round_u8(values: np.ndarray) -> np.ndarray:
    """Round half up and clip to the 8-bit range (keeps the input's float width)."""
    arr = np.asarray(values)
    if not np.issubdtype(arr.dtype, np.floating):
        arr = arr.astype(np.float64)
    return np.clip(np.floor(arr + 0.5), 0, 255).astype(np.uint8)


@dataclass
class ImageBuffer:
    """Owned 8-bit raster, shape (height, width, channels), channels 1 or 3."""

    data: np.ndarray

    def __post_init__(self) -> None:
        arr = np.asarray(self.data)
        if arr.ndim == 2:
            arr = arr[:, :, np.newaxis]
        if arr.ndim != 3 or arr.shape[2] not in (1, 3):
            raise InvalidArgumentError(f"expected (h, w, 1|3) array, got shape {arr.shape}")
        if arr.shape[0] < 1 or arr.shape[1] < 1:
            raise InvalidArgumentError("image dimensions must be >= 1")
        if arr.dtype != np.uint8:
            if np.issubdtype(arr.dtype, np.floating):
                arr = round_u8(arr)
            else:
                if arr.min() < 0 or arr.max() > 255:
                    raise InvalidArgumentError("integer samples outside [0, 255]")
                arr = arr.astype(np.uint8)
        self.data = np.ascontiguousarray(arr)

    @property
    def width(self) -> int:
        return self.data.shape[1]

    @property
    def height(self) -> int:
        return self.data.shape[0]

    @property
    def channels(self) -> int:
        return self.data.shape[2]

    @property
    def plane(self) -> np.ndarray:
        """2-D view of a single-channel image."""
        if self.channels != 1:
            raise InvalidArgumentError("plane only defined for 1-channel images")
        return self.data[:, :, 0]

    def copy(self) -> "ImageBuffer":
        return ImageBuffer(self.data.copy())

    def tobytes(self) -> bytes:
        return self.data.tobytes()

    @classmethod
    def full(cls, width: int, height: int, value, channels: int = 3) -> "ImageBuffer":
        arr = np.empty((height, width, channels), dtype=np.uint8)
        arr[:] = value
        return cls(arr)


@dataclass
class ChromaPlanes:
    """Signed chroma saved by a gray split; same spatial dimensions as the luma."""

    u: np.ndarray
    v: np.ndarray

    def __post_init__(self) -> None:
        self.u = np.asarray(self.u, dtype=np.float32)
        self.v = np.asarray(self.v, dtype=np.float32)
        if self.u.shape != self.v.shape or self.u.ndim != 2:
            raise InvalidArgumentError("chroma planes must be matching 2-D arrays")


# BT.601 full-range: Y = .299 R + .587 G + .114 B, with signed chroma scaled so
# that R = Y + 1.402 V and B = Y + 1.772 U hold exactly.
_KR, _KG, _KB = 0.299, 0.587, 0.114


def luma_float(img: ImageBuffer) -> np.ndarray:
    """Unrounded BT.601 luma as float32 (1-channel input passes through)."""
    d = img.data.astype(np.float32)
    if img.channels == 1:
        return d[:, :, 0]
    return np.float32(_KR) * d[:, :, 0] + np.float32(_KG) * d[:, :, 1] \
        + np.float32(_KB) * d[:, :, 2]


def to_gray(img: ImageBuffer) -> tuple[ImageBuffer, ChromaPlanes]:
    """Split an RGB image into rounded luma plus saved signed chroma.

    Luma math stays float64 so the rounded plane is bit-stable against a
    scalar reference evaluation of the same weights.
    """
    if img.channels != 3:
        raise InvalidArgumentError("to_gray requires a 3-channel image")
    d = img.data.astype(np.float64)
    y = _KR * d[:, :, 0] + _KG * d[:, :, 1] + _KB * d[:, :, 2]
    u = (d[:, :, 2] - y) / 1.772
    v = (d[:, :, 0] - y) / 1.402
    return ImageBuffer(round_u8(y)), ChromaPlanes(u, v)


def to_color(luma: ImageBuffer, chroma: ChromaPlanes) -> ImageBuffer:
    """Recombine luma with saved chroma; inverse of :func:`to_gray` within +/-2."""
    if luma.channels != 1:
        raise InvalidArgumentError("to_color expects a 1-channel luma image")
    if chroma.u.shape != (luma.height, luma.width):
        raise InvalidArgumentError(
            f"chroma dimensions {chroma.u.shape} do not match luma {(luma.height, luma.width)}")
    y = luma.data[:, :, 0].astype(np.float64)
    u = chroma.u.astype(np.float64)
    v = chroma.v.astype(np.float64)
    r = y + 1.402 * v
    b = y + 1.772 * u
    g = (y - _KR * r - _KB * b) / _KG
    out = np.empty(y.shape + (3,), np.uint8)
    out[:, :, 0] = round_u8(r)
    out[:, :, 1] = round_u8(g)
    out[:, :, 2] = round_u8(b)
    return ImageBuffer(out)


def _box_halve(data: np.ndarray) -> np.ndarray:
    """One 2x2 box-mean halving step; trailing odd row/column is dropped."""
    h, w = data.shape[:2]
    h2, w2 = h // 2, w // 2
    d = data[: 2 * h2, : 2 * w2].astype(np.uint32)
    s = d[0::2, 0::2] + d[0::2, 1::2] + d[1::2, 0::2] + d[1::2, 1::2]
    return ((s + 2) // 4).astype(np.uint8)


def _bilinear_f64(data: np.ndarray, new_w: int, new_h: int) -> np.ndarray:
    """Bilinear resample (float64) with half-pixel-center mapping and edge clamping."""
    h, w = data.shape[:2]
    sx = (np.arange(new_w, dtype=np.float64) + 0.5) * (w / new_w) - 0.5
    sy = (np.arange(new_h, dtype=np.float64) + 0.5) * (h / new_h) - 0.5
    x0 = np.clip(np.floor(sx), 0, w - 1).astype(np.int64)
    y0 = np.clip(np.floor(sy), 0, h - 1).astype(np.int64)
    x1 = np.minimum(x0 + 1, w - 1)
    y1 = np.minimum(y0 + 1, h - 1)
    fx = np.clip(sx - x0, 0.0, 1.0)
    fy = np.clip(sy - y0, 0.0, 1.0)
    d = data.astype(np.float64)
    if d.ndim == 3:
        fx = fx[:, None]
        wy = fy[:, None, None]
    else:
        wy = fy[:, None]
    top = d[y0[:, None], x0] * (1 - fx) + d[y0[:, None], x1] * fx
    bot = d[y1[:, None], x0] * (1 - fx) + d[y1[:, None], x1] * fx
    return top * (1 - wy) + bot * wy


def _bilinear(data: np.ndarray, new_w: int, new_h: int) -> np.ndarray:
    if data.shape[:2] == (new_h, new_w):
        return data.copy()
    return round_u8(_bilinear_f64(data, new_w, new_h))


def resize_plane_float(plane: np.ndarray, new_w: int, new_h: int) -> np.ndarray:
    """Bilinear resample of a float plane (used for saved chroma)."""
    if plane.shape == (new_h, new_w):
        return plane.copy()
    return _bilinear_f64(plane, new_w, new_h).astype(np.float32)


def resize(img: ImageBuffer, new_w: int, new_h: int) -> ImageBuffer:
    """Resample: 2x2 box halving while both dimensions stay >= 2x target, then bilinear."""
    if new_w < 1 or new_h < 1:
        raise InvalidArgumentError("target dimensions must be >= 1")
    if (img.width, img.height) == (new_w, new_h):
        return img.copy()
    data = img.data
    while data.shape[1] >= 2 * new_w and data.shape[0] >= 2 * new_h:
        data = _box_halve(data)
    if data.shape[:2] != (new_h, new_w):
        data = _bilinear(data, new_w, new_h)
    return ImageBuffer(data)


def halving_chain(size: int, target: int) -> list[int]:
    """Sizes visited by the box-halving stage along one axis (for inspection/tests)."""
    chain = [size]
    while chain[-1] >= 2 * target:
        chain.append(chain[-1] // 2)
    return chain


def fit_within(img: ImageBuffer, max_dim: int) -> ImageBuffer:
    """Downscale so max(w, h) <= max_dim, preserving aspect; never upscales."""
    if max_dim < 1:
        raise InvalidArgumentError("max_dim must be >= 1")
    scale = max_dim / max(img.width, img.height)
    if scale >= 1.0:
        return img.copy()
    new_w = max(1, int(np.floor(img.width * scale + 0.5)))
    new_h = max(1, int(np.floor(img.height * scale + 0.5)))
    return resize(img, new_w, new_h)


def central_gradient(plane: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Per-pixel (gx, gy) via central differences; one-sided at borders.

    Accepts a 2-D array or 1-channel ImageBuffer. A dimension of length 1
    yields zero gradient along that axis.
    """
    if isinstance(plane, ImageBuffer):
        plane = plane.plane
    d = np.asarray(plane, dtype=np.float64)
    gx = np.zeros_like(d)
    gy = np.zeros_like(d)
    if d.shape[1] >= 2:
        gx[:, 1:-1] = (d[:, 2:] - d[:, :-2]) / 2.0
        gx[:, 0] = d[:, 1] - d[:, 0]
        gx[:, -1] = d[:, -1] - d[:, -2]
    if d.shape[0] >= 2:
        gy[1:-1, :] = (d[2:, :] - d[:-2, :]) / 2.0
        gy[0, :] = d[1, :] - d[0, :]
        gy[-1, :] = d[-1, :] - d[-2, :]
    return gx, gy


def load_image(path: str | Path) -> ImageBuffer:
    """Decode a PNG/JPEG file to an RGB or grayscale buffer."""
    with Image.open(path) as im:
        if im.mode in ("L",):
            arr = np.asarray(im, dtype=np.uint8)
        else:
            arr = np.asarray(im.convert("RGB"), dtype=np.uint8)
    return ImageBuffer(arr)


def decode_image(raw: bytes) -> ImageBuffer:
    """Decode PNG/JPEG bytes to a buffer."""
    import io

    with Image.open(io.BytesIO(raw)) as im:
        if im.mode in ("L",):
            arr = np.asarray(im, dtype=np.uint8)
        else:
            arr = np.asarray(im.convert("RGB"), dtype=np.uint8)
    return ImageBuffer(arr)


def _to_pil(img: ImageBuffer) -> Image.Image:
    if img.channels == 1:
        return Image.fromarray(img.data[:, :, 0], mode="L")
    return Image.fromarray(img.data, mode="RGB")


# deflate level 4 keeps interactive previews fast for ~1% larger files;
# CLI and service must share it so their PNG bytes stay identical
_PNG_COMPRESS_LEVEL = 4


def save_png(img: ImageBuffer, path: str | Path) -> None:
    _to_pil(img).save(path, format="PNG", compress_level=_PNG_COMPRESS_LEVEL)


def save_jpeg(img: ImageBuffer, path: str | Path, quality: int = 92) -> None:
    _to_pil(img).save(path, format="JPEG", quality=quality)


def encode_png(img: ImageBuffer) -> bytes:
    """PNG bytes; canonical lossless output, stable for golden comparisons."""
    import io

    buf = io.BytesIO()
    _to_pil(img).save(buf, format="PNG", compress_level=_PNG_COMPRESS_LEVEL)
    return buf.getvalue()
