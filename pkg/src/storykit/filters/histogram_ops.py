"""Histogram modification blocks, usually placed first in a chain."""

from __future__ import annotations

import numpy as np

from ..imaging import ImageBuffer, InvalidArgumentError, round_u8, to_color, to_gray


def luma_percentile(plane: np.ndarray, percent: float) -> int:
    """Smallest value whose cumulative count reaches percent% of the pixels."""
    counts = np.bincount(plane.ravel(), minlength=256)
    cdf = counts.cumsum()
    threshold = percent / 100.0 * plane.size
    return int(np.argmax(cdf >= threshold))


def _apply_luma_lut(img: ImageBuffer, lut: np.ndarray | None) -> ImageBuffer:
    """Apply a luma LUT; None means a decided no-op and returns a byte-identical copy."""
    if lut is None:
        return img.copy()
    if img.channels == 1:
        return ImageBuffer(lut[img.data])
    luma, chroma = to_gray(img)
    return to_color(ImageBuffer(lut[luma.data]), chroma)


def _luma_plane(img: ImageBuffer) -> np.ndarray:
    if img.channels == 1:
        return img.data[:, :, 0]
    return to_gray(img)[0].data[:, :, 0]


def linear_equalize(img: ImageBuffer, low: float = 5, high: float = 95) -> ImageBuffer:
    """Stretch luma so the low percentile hits 0 and the high one hits 255."""
    if not 0 <= low < high <= 100:
        raise InvalidArgumentError("percentiles must satisfy 0 <= low < high <= 100")
    plane = _luma_plane(img)
    p_lo = luma_percentile(plane, low)
    p_hi = luma_percentile(plane, high)
    if p_hi == p_lo:
        return _apply_luma_lut(img, None)
    i = np.arange(256, dtype=np.float64)
    lut = round_u8(255.0 * (i - p_lo) / (p_hi - p_lo))
    return _apply_luma_lut(img, lut)


def min_dynamic_range(img: ImageBuffer, dr: float) -> ImageBuffer:
    """Expand the p5..p95 luma span to at least `dr` levels; no-op if already wider."""
    if not 0 <= dr <= 255:
        raise InvalidArgumentError("dr must be in [0, 255]")
    plane = _luma_plane(img)
    p_lo = luma_percentile(plane, 5)
    p_hi = luma_percentile(plane, 95)
    span = p_hi - p_lo
    if span >= dr or span == 0:
        return _apply_luma_lut(img, None)
    mid = (p_lo + p_hi) / 2.0
    i = np.arange(256, dtype=np.float64)
    lut = round_u8(mid + (i - mid) * dr / span)
    return _apply_luma_lut(img, lut)
