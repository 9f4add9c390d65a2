"""Neighborhood filter blocks: smoothing, flow, edges, screens, detail."""

from __future__ import annotations

import cv2
import numpy as np

from .. import kernels
from ..imaging import (
    ImageBuffer,
    InvalidArgumentError,
    central_gradient,
    resize,
    round_u8,
    to_gray,
)

# Bilateral base for detail control; fixed by design, see README.
BILATERAL_RADIUS = 9
BILATERAL_SIGMA_SPATIAL = 3.0
BILATERAL_SIGMA_RANGE = 25.0


def _luma_plane(img: ImageBuffer) -> np.ndarray:
    if img.channels == 1:
        return img.data[:, :, 0]
    return to_gray(img)[0].data[:, :, 0]


def _per_channel(img: ImageBuffer, fn) -> ImageBuffer:
    planes = [fn(img.data[:, :, c]) for c in range(img.channels)]
    return ImageBuffer(np.stack(planes, axis=-1))


def gaussian(img: ImageBuffer, sigma: float) -> ImageBuffer:
    """Separable Gaussian blur, kernel radius ceil(3*sigma), clamp-to-edge."""
    if sigma <= 0:
        raise InvalidArgumentError("gaussian sigma must be > 0")
    return _per_channel(img, lambda p: round_u8(
        kernels.gaussian_blur_f32(p.astype(np.float32), sigma)))


def sobel(img: ImageBuffer) -> ImageBuffer:
    """3x3 Sobel gradient magnitude of the luma, clipped to 8 bits."""
    mag = kernels.sobel_magnitude_f32(_luma_plane(img).astype(np.float32))
    return ImageBuffer(round_u8(mag))


XDOG_K = 1.6


def xdog(img: ImageBuffer, sigma: float, p: float) -> ImageBuffer:
    """Extended difference-of-Gaussians on luma: (1+p)*G_sigma - p*G_{1.6 sigma}."""
    if sigma <= 0:
        raise InvalidArgumentError("xdog sigma must be > 0")
    luma = _luma_plane(img).astype(np.float32)
    g1 = kernels.gaussian_blur_f32(luma, sigma)
    g2 = kernels.gaussian_blur_f32(luma, XDOG_K * sigma)
    return ImageBuffer(round_u8(np.float32(1.0 + p) * g1 - np.float32(p) * g2))


def etf(img: ImageBuffer, radius: int, iterations: int) -> ImageBuffer:
    """Flow-guided smoothing: edge tangent field plus line integral convolution.

    Tangents start perpendicular to the luma gradient and are smoothed
    `iterations` times over a disk; each channel is then blurred along the
    streamlines with a total arc length of 2*radius.
    """
    radius = int(radius)
    iterations = int(iterations)
    if radius < 1 or iterations < 1:
        raise InvalidArgumentError("etf radius and iterations must be >= 1")
    gx, gy = central_gradient(_luma_plane(img))
    tx, ty, _ = kernels.etf_field(gx, gy, radius, iterations)
    return _per_channel(img, lambda p: round_u8(
        kernels.lic_smooth_f32(p.astype(np.float32), tx, ty, radius)))


def tvf(img: ImageBuffer, iterations: int, dt: float = 0.2, eps: float = 0.255) -> ImageBuffer:
    """Total-variation flow toward piecewise-constant regions, per channel."""
    iterations = int(iterations)
    if iterations < 1:
        raise InvalidArgumentError("tvf iterations must be >= 1")
    if not 0 < dt <= 0.25:
        raise InvalidArgumentError("tvf dt must be in (0, 0.25]")
    if eps <= 0:
        raise InvalidArgumentError("tvf eps must be > 0")
    return _per_channel(img, lambda p: round_u8(
        kernels.tvf_run_f32(p.astype(np.float32), iterations, dt, eps)))


def size(img: ImageBuffer, percent: float) -> ImageBuffer:
    """Rescale by a percentage; the pipeline restores output dimensions at the end."""
    if not 10 <= percent <= 400:
        raise InvalidArgumentError("size percent must be in [10, 400]")
    new_w = max(1, int(np.floor(img.width * percent / 100.0 + 0.5)))
    new_h = max(1, int(np.floor(img.height * percent / 100.0 + 0.5)))
    return resize(img, new_w, new_h)


def bilateral_f32(plane: np.ndarray) -> np.ndarray:
    """Disk-supported bilateral with the fixed detail-control parameters."""
    src = np.ascontiguousarray(plane, dtype=np.float32)
    return cv2.bilateralFilter(
        src,
        d=2 * BILATERAL_RADIUS + 1,
        sigmaColor=BILATERAL_SIGMA_RANGE,
        sigmaSpace=BILATERAL_SIGMA_SPATIAL,
        borderType=cv2.BORDER_REPLICATE,
    )


def detail_control(img: ImageBuffer, delta: float) -> ImageBuffer:
    """Scale the luma residual around a bilateral base: smooth (<0) or boost (>0).

    Detail lives in the luma plane; color inputs round-trip through the
    gray split so chroma is untouched.
    """
    if not -100 <= delta <= 60:
        raise InvalidArgumentError("detail control delta must be in [-100, 60]")
    scale = np.float32(1.0 + delta / 100.0)

    def one(luma: ImageBuffer) -> ImageBuffer:
        plane = luma.data[:, :, 0].astype(np.float32)
        base = bilateral_f32(plane)
        return ImageBuffer(round_u8(base + scale * (plane - base)))

    from .pixel_ops import _apply_luma

    return _apply_luma(img, one)


def default_tiles() -> list[np.ndarray]:
    """Built-in 8x8 cross-hatch tiles, blank (lightest) to dense (darkest)."""
    yy, xx = np.mgrid[0:8, 0:8]
    masks = [
        np.zeros((8, 8), bool),
        (xx + yy) % 8 == 0,
        (xx + yy) % 4 == 0,
        ((xx + yy) % 4 == 0) | ((xx - yy) % 8 == 0),
        ((xx + yy) % 4 == 0) | ((xx - yy) % 4 == 0),
        ((xx + yy) % 4 == 0) | ((xx - yy) % 4 == 0) | (yy % 4 == 0),
        ((xx + yy) % 2 == 0) | (yy % 4 == 0),
        (xx + yy) % 4 != 0,
    ]
    return [np.where(m, 0, 255).astype(np.uint8) for m in masks]


def pattern_fill(img: ImageBuffer, levels: int, textures: list[np.ndarray] | None = None) -> ImageBuffer:
    """Replace each luma-posterized level with a repeating texture tile."""
    levels = int(levels)
    if not 2 <= levels <= 8:
        raise InvalidArgumentError("pattern levels must be in [2, 8]")
    tiles = default_tiles() if textures is None else [np.asarray(t, np.uint8) for t in textures]
    if len(tiles) < levels:
        raise InvalidArgumentError(f"pattern needs >= {levels} tiles, got {len(tiles)}")
    luma = _luma_plane(img)
    q = np.floor(luma.astype(np.float64) * (levels - 1) / 255.0 + 0.5).astype(np.int64)
    # darkest level -> densest tile, lightest -> first tile
    tile_idx = np.floor((1.0 - q / (levels - 1)) * (len(tiles) - 1) + 0.5).astype(np.int64)
    h, w = luma.shape
    yy, xx = np.mgrid[0:h, 0:w]
    out = np.empty((h, w), np.uint8)
    for t, tile in enumerate(tiles):
        mask = tile_idx == t
        if mask.any():
            th, tw = tile.shape
            out[mask] = tile[yy[mask] % th, xx[mask] % tw]
    return ImageBuffer(out)


SCREEN_ANGLES = {"K": 45.0, "C": 15.0, "M": 75.0, "Y": 0.0}


def halftone(img: ImageBuffer, cell: int, cmyk: bool = False) -> ImageBuffer:
    """Print-style dot screens: single black screen, or four-color separation.

    Per screen cell the dot radius is cell*sqrt(coverage)/2, coverage being
    the boxed local ink fraction; dots are antialiased disks on white.
    """
    cell = int(cell)
    if not 2 <= cell <= 32:
        raise InvalidArgumentError("halftone cell must be in [2, 32]")
    if not cmyk:
        coverage = 1.0 - _luma_plane(img).astype(np.float64) / 255.0
        cov = kernels.box_prefilter(coverage, cell)
        alpha = kernels.screen_alpha(cov, cell, SCREEN_ANGLES["K"]).astype(np.float64)
        return ImageBuffer(round_u8(255.0 * (1.0 - alpha)))
    if img.channels == 1:
        rgb = np.repeat(img.data, 3, axis=2).astype(np.float64) / 255.0
    else:
        rgb = img.data.astype(np.float64) / 255.0
    k = 1.0 - rgb.max(axis=2)
    denom = np.maximum(1.0 - k, 1e-9)
    c = (1.0 - rgb[:, :, 0] - k) / denom
    m = (1.0 - rgb[:, :, 1] - k) / denom
    y = (1.0 - rgb[:, :, 2] - k) / denom
    alphas = {}
    for name, ink in (("C", c), ("M", m), ("Y", y), ("K", k)):
        cov = kernels.box_prefilter(np.clip(ink, 0.0, 1.0), cell)
        alphas[name] = kernels.screen_alpha(cov, cell, SCREEN_ANGLES[name]).astype(np.float64)
    keep_k = 1.0 - alphas["K"]
    out = np.stack([
        255.0 * (1.0 - alphas["C"]) * keep_k,
        255.0 * (1.0 - alphas["M"]) * keep_k,
        255.0 * (1.0 - alphas["Y"]) * keep_k,
    ], axis=-1)
    return ImageBuffer(round_u8(out))
