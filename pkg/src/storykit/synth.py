"""Deterministic synthetic scenes: test corpora, bundled fixtures, bench inputs.

Scenes mix smooth gradients, soft color blobs, hard-edged shapes, and mild
noise so that hashing, sharpness, and the filter chains all have realistic
structure to bite on. Everything is keyed by Philox streams, so the same
seed always produces the same bytes.
"""

from __future__ import annotations

import numpy as np

from .imaging import ImageBuffer, round_u8
from .kernels import gaussian_blur_f32


def _rng(seed: int, stream: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=[seed, stream]))


def _grid(width: int, height: int):
    ys, xs = np.mgrid[0:height, 0:width].astype(np.float64)
    return xs / max(width - 1, 1), ys / max(height - 1, 1)


def _base_canvas(rng: np.random.Generator, width: int, height: int) -> np.ndarray:
    xs, ys = _grid(width, height)
    canvas = np.empty((height, width, 3), np.float64)
    for c in range(3):
        a = rng.uniform(90, 170)
        bx, by = rng.uniform(-60, 60, size=2)
        amp = rng.uniform(8, 36)
        fx, fy = rng.uniform(0.4, 2.2, size=2)
        phase = rng.uniform(0, 2 * np.pi)
        canvas[:, :, c] = a + bx * xs + by * ys \
            + amp * np.sin(2 * np.pi * (fx * xs + fy * ys) + phase)
    return canvas


def _add_blobs(canvas: np.ndarray, rng: np.random.Generator, count: int,
               centers: np.ndarray | None = None) -> None:
    height, width = canvas.shape[:2]
    xs, ys = _grid(width, height)
    for i in range(count):
        if centers is not None:
            cx, cy = centers[i]
        else:
            cx, cy = rng.uniform(0.1, 0.9, size=2)
        rx = rng.uniform(0.06, 0.25)
        ry = rng.uniform(0.06, 0.25)
        color = rng.uniform(-90, 90, size=3)
        d2 = ((xs - cx) / rx) ** 2 + ((ys - cy) / ry) ** 2
        mask = np.exp(-d2)
        canvas += mask[:, :, None] * color


def _add_shapes(canvas: np.ndarray, rng: np.random.Generator, count: int) -> None:
    height, width = canvas.shape[:2]
    for _ in range(count):
        w0 = int(rng.uniform(0.08, 0.4) * width)
        h0 = int(rng.uniform(0.08, 0.4) * height)
        x0 = int(rng.uniform(0, width - w0))
        y0 = int(rng.uniform(0, height - h0))
        color = rng.uniform(10, 245, size=3)
        alpha = rng.uniform(0.65, 1.0)
        region = canvas[y0:y0 + h0, x0:x0 + w0]
        region *= (1 - alpha)
        region += alpha * color


def _add_soft_shapes(canvas: np.ndarray, rng: np.random.Generator, count: int,
                     feather: float = 0.8) -> None:
    height, width = canvas.shape[:2]
    for _ in range(count):
        w0 = int(rng.uniform(0.12, 0.45) * width)
        h0 = int(rng.uniform(0.12, 0.45) * height)
        x0 = int(rng.uniform(0, width - w0))
        y0 = int(rng.uniform(0, height - h0))
        color = rng.uniform(20, 235, size=3)
        alpha = rng.uniform(0.6, 1.0)
        mask = np.zeros((height, width), np.float32)
        mask[y0:y0 + h0, x0:x0 + w0] = 1.0
        soft = gaussian_blur_f32(mask, feather).astype(np.float64) * alpha
        canvas *= 1.0 - soft[:, :, None]
        canvas += soft[:, :, None] * color


# Texture octaves: spatial frequencies chosen so successive blur levels
# (sigma 1, 2, 4) each push one octave under the quantization floor, which
# keeps the sharpness metric falling monotonically on this corpus.
_TEXTURE_OCTAVES = ((0.35, 1.3), (0.16, 1.0), (0.08, 1.0))


def _add_texture(canvas: np.ndarray, rng: np.random.Generator, gamp: float = 5.5) -> None:
    height, width = canvas.shape[:2]
    ys, xs = np.mgrid[0:height, 0:width].astype(np.float64)
    for freq, boost in _TEXTURE_OCTAVES:
        for _ in range(3):
            theta = rng.uniform(0, np.pi)
            fx, fy = freq * np.cos(theta), freq * np.sin(theta)
            phase = rng.uniform(0, 2 * np.pi)
            amp = rng.uniform(0.8, 1.2) * boost * gamp / (2 * np.pi * freq)
            cx, cy = rng.uniform(0.1, 0.9, size=2)
            env = np.exp(-(((xs / width - cx) / 0.75) ** 2 + ((ys / height - cy) / 0.75) ** 2))
            canvas += (amp * np.sin(2 * np.pi * (fx * xs + fy * ys) + phase) * env)[:, :, None]


def scene(seed: int, width: int = 160, height: int = 120, noise: float = 0.25) -> ImageBuffer:
    """One photo-like synthetic scene, fully determined by the seed."""
    rng = _rng(seed, 0xC0FFEE)
    canvas = _base_canvas(rng, width, height)
    _add_blobs(canvas, rng, int(rng.integers(3, 8)))
    _add_soft_shapes(canvas, rng, int(rng.integers(2, 5)))
    _add_texture(canvas, rng)
    if noise > 0:
        canvas += rng.normal(0.0, noise, size=canvas.shape)
    return ImageBuffer(round_u8(canvas))


def corpus(seed: int, count: int, width: int = 160, height: int = 120) -> list[ImageBuffer]:
    """Distinct-scene corpus; scene i uses seed*1000003 + i."""
    return [scene(seed * 1000003 + i, width, height) for i in range(count)]


def blur_buffer(img: ImageBuffer, sigma: float) -> ImageBuffer:
    """Plain Gaussian defocus of a buffer (synthetic blurry frames)."""
    planes = [
        round_u8(gaussian_blur_f32(img.data[:, :, c].astype(np.float32), sigma).astype(np.float64))
        for c in range(img.channels)
    ]
    return ImageBuffer(np.stack(planes, axis=-1))


FRAMES_PER_SHOT = 4


def video_frames(seed: int = 42, count: int = 32, width: int = 320,
                 height: int = 180) -> list[ImageBuffer]:
    """Frame dump of a synthetic clip: short shots with drifting subjects.

    Frames within a shot are near-duplicates (small motion); every shot cut
    changes the whole composition. One frame per shot is defocused so that
    sharpness ranking has work to do.
    """
    frames: list[ImageBuffer] = []
    for idx in range(count):
        shot = idx // FRAMES_PER_SHOT
        t = (idx % FRAMES_PER_SHOT) / FRAMES_PER_SHOT
        rng = _rng(seed + shot * 7919, 0xF1D0)
        canvas = _base_canvas(rng, width, height)
        n_blobs = int(rng.integers(3, 6))
        centers = rng.uniform(0.15, 0.85, size=(n_blobs, 2))
        velocity = rng.uniform(-0.05, 0.05, size=(n_blobs, 2))
        _add_blobs(canvas, rng, n_blobs, centers=centers + velocity * t)
        _add_shapes(canvas, rng, int(rng.integers(1, 3)))
        _add_texture(canvas, rng)
        canvas += _rng(seed + idx, 0xA11CE).normal(0.0, 2.0, size=canvas.shape)
        frame = ImageBuffer(round_u8(canvas))
        if idx % FRAMES_PER_SHOT == FRAMES_PER_SHOT - 1:
            frame = blur_buffer(frame, 2.0)
        frames.append(frame)
    return frames


def bench_image(width: int, height: int, seed: int = 2024) -> ImageBuffer:
    """Deterministic benchmark input with realistic mixed content."""
    return scene(seed, width, height, noise=3.0)
