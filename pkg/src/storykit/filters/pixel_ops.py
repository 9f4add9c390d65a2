"""Pointwise filter blocks: tone quantization, thresholding, color moves."""

from __future__ import annotations

import numpy as np

from ..imaging import (
    ChromaPlanes,
    ImageBuffer,
    InvalidArgumentError,
    luma_float,
    round_u8,
    to_color,
    to_gray,
)


def _apply_luma(img: ImageBuffer, fn) -> ImageBuffer:
    """Run a luma-plane transform; 3-channel inputs round-trip through gray."""
    if img.channels == 1:
        return fn(img)
    luma, chroma = to_gray(img)
    return to_color(fn(luma), chroma)


def _posterize_lut(levels: int) -> np.ndarray:
    if not 2 <= levels <= 255:
        raise InvalidArgumentError("posterize levels must be in [2, 255]")
    i = np.arange(256, dtype=np.float64)
    q = np.floor(i * (levels - 1) / 255.0 + 0.5)
    return round_u8(q * 255.0 / (levels - 1))


def posterize(img: ImageBuffer, levels: int) -> ImageBuffer:
    """Quantize each channel to at most `levels` evenly spaced tones."""
    lut = _posterize_lut(int(levels))
    return ImageBuffer(lut[img.data])


def luma_posterize(img: ImageBuffer, levels: int) -> ImageBuffer:
    """Posterize the luma channel only; saved chroma is untouched."""
    return _apply_luma(img, lambda luma: posterize(luma, levels))


def brightness(img: ImageBuffer, factor: float) -> ImageBuffer:
    """Scale the luma channel by `factor`, clipping."""
    if factor < 0:
        raise InvalidArgumentError("brightness factor must be >= 0")
    lut = round_u8(np.arange(256, dtype=np.float64) * factor)
    return _apply_luma(img, lambda luma: ImageBuffer(lut[luma.data]))


def soft_threshold(img: ImageBuffer, phi: float, epsilon: float) -> ImageBuffer:
    """Smooth cutoff: 255 * (1 + tanh(min(0, phi * (v - epsilon)))), per channel.

    Values at or above the cutoff map to 255; the response is monotone
    non-decreasing in the input.
    """
    if phi <= 0:
        raise InvalidArgumentError("phi must be > 0")
    i = np.arange(256, dtype=np.float64)
    lut = round_u8(255.0 * (1.0 + np.tanh(np.minimum(0.0, phi * (i - epsilon)))))
    return ImageBuffer(lut[img.data])


def saturate(img: ImageBuffer, s: float) -> ImageBuffer:
    """Push channels away from (s > 1) or toward (s < 1) the grayscale image."""
    if img.channels != 3:
        raise InvalidArgumentError("saturation requires a 3-channel image")
    if s < 0:
        raise InvalidArgumentError("saturation factor must be >= 0")
    gray = luma_float(img)[:, :, np.newaxis]
    out = gray + np.float32(s) * (img.data.astype(np.float32) - gray)
    return ImageBuffer(round_u8(out))


def hue(img: ImageBuffer, angle: float, bias: tuple[float, float, float] = (0, 0, 0)) -> ImageBuffer:
    """Rotate chroma by `angle` degrees, then add a per-channel RGB bias."""
    if img.channels != 3:
        raise InvalidArgumentError("hue requires a 3-channel image")
    luma, chroma = to_gray(img)
    theta = np.deg2rad(angle)
    c, s = np.float32(np.cos(theta)), np.float32(np.sin(theta))
    rotated = ChromaPlanes(c * chroma.u - s * chroma.v, s * chroma.u + c * chroma.v)
    rgb = to_color(luma, rotated).data.astype(np.float32)
    rgb += np.asarray(bias, dtype=np.float32)
    return ImageBuffer(round_u8(rgb))


def colorize(img: ImageBuffer, hue_deg: float, sat: float) -> ImageBuffer:
    """Monochrome HSL mapping: fixed hue/saturation, lightness from luma."""
    if not 0.0 <= sat <= 1.0:
        raise InvalidArgumentError("colorize saturation must be in [0, 1]")
    lum = luma_float(img) * np.float32(1.0 / 255.0)
    c = (np.float32(1.0) - np.abs(np.float32(2.0) * lum - np.float32(1.0))) * np.float32(sat)
    hp = (hue_deg % 360.0) / 60.0
    x = c * np.float32(1.0 - abs(hp % 2.0 - 1.0))
    seg = int(hp) % 6
    zero = np.zeros_like(c)
    r1, g1, b1 = [
        (c, x, zero), (x, c, zero), (zero, c, x),
        (zero, x, c), (x, zero, c), (c, zero, x),
    ][seg]
    m = lum - c * np.float32(0.5)
    out = np.stack([r1 + m, g1 + m, b1 + m], axis=-1) * np.float32(255.0)
    return ImageBuffer(round_u8(out))
