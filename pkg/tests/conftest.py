"""Shared fixtures: deterministic corpora and warmed-up kernels."""

from __future__ import annotations

import numpy as np
import pytest

from storykit import synth
from storykit.imaging import ImageBuffer


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    from storykit import kernels

    kernels.warm_up()


@pytest.fixture(scope="session")
def corpus50():
    return synth.corpus(seed=11, count=50)


@pytest.fixture(scope="session")
def corpus100():
    return synth.corpus(seed=11, count=100)


@pytest.fixture(scope="session")
def frames32():
    return synth.video_frames(seed=42, count=32)


def random_rgb(rng: np.random.Generator, w: int, h: int) -> ImageBuffer:
    return ImageBuffer(rng.integers(0, 256, (h, w, 3), dtype=np.uint8))


def random_gray(rng: np.random.Generator, w: int, h: int) -> ImageBuffer:
    return ImageBuffer(rng.integers(0, 256, (h, w, 1), dtype=np.uint8))


@pytest.fixture()
def rng():
    return np.random.default_rng(20240817)
