"""Reduce an image set to a deduplicated, sharpness-ranked candidate pool.

Near-duplicates are detected with a 64-bit gradient-sign fingerprint and
Hamming distance; the sharpest member of each duplicate cluster is kept.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .imaging import ImageBuffer, InvalidArgumentError, central_gradient, resize, to_gray

DEFAULT_DUPLICATE_THRESHOLD = 6  # Hamming bits; calibrated on the synthetic corpus


@dataclass(frozen=True)
class Fingerprint:
    """64-bit perceptual hash; a pure function of image content."""

    bits: int

    def __post_init__(self) -> None:
        if not 0 <= self.bits < (1 << 64):
            raise InvalidArgumentError("fingerprint must fit in 64 bits")


@dataclass
class SharpnessConfig:
    """Gradient-statistics settings.

    `magnitude` picks how a pixel's gradient enters the histogram: "axis"
    contributes |gx| and |gy| as two samples, "euclid" one Euclidean norm.
    Axis-wise is the calibrated default: it keeps the blur ordering
    property monotone on the bundled corpus where the Euclidean variant
    falls short.
    """

    subsample_factor: int = 3
    bin_count: int = 256
    magnitude: str = "axis"

    def __post_init__(self) -> None:
        if self.subsample_factor < 1:
            raise InvalidArgumentError("subsample_factor must be >= 1")
        if self.bin_count < 2:
            raise InvalidArgumentError("bin_count must be >= 2")
        if self.magnitude not in ("axis", "euclid"):
            raise InvalidArgumentError("magnitude must be 'axis' or 'euclid'")


@dataclass
class SelectionReport:
    clusters: list[list[str]]
    representatives: list[str]
    sharpness: dict[str, float]

    def to_json_dict(self) -> dict:
        return {
            "clusters": self.clusters,
            "representatives": self.representatives,
            "sharpness": self.sharpness,
        }


def _gray_plane(img: ImageBuffer) -> ImageBuffer:
    if img.channels == 1:
        return img
    gray, _ = to_gray(img)
    return gray


def perceptual_hash(img: ImageBuffer) -> Fingerprint:
    """Fingerprint from gradient signs on a 9x9 thumbnail.

    Even output rows take horizontal forward differences, odd rows vertical
    ones; 8 sign bits per row over 8 rows. A non-positive difference maps
    to bit 0 so flat regions hash deterministically.
    """
    small = resize(_gray_plane(img), 9, 9).plane.astype(np.int16)
    bits = 0
    for r in range(8):
        if r % 2 == 0:
            diffs = small[r, 1:9] - small[r, 0:8]
        else:
            diffs = small[r + 1, 0:8] - small[r, 0:8]
        for x in range(8):
            if diffs[x] > 0:
                bits |= 1 << (r * 8 + x)
    return Fingerprint(bits)


def hamming(a: Fingerprint, b: Fingerprint) -> int:
    """Number of differing fingerprint bits, in [0, 64]."""
    return (a.bits ^ b.bits).bit_count()


def gradient_histogram(img: ImageBuffer, cfg: SharpnessConfig | None = None) -> np.ndarray:
    """Histogram of floored gradient magnitudes over the subsample grid.

    Central differences of the luma, sampled every `subsample_factor`
    pixels per axis, magnitudes floored and clipped into
    [0, bin_count - 1]. See SharpnessConfig.magnitude for the two
    magnitude definitions.
    """
    cfg = cfg or SharpnessConfig()
    plane = _gray_plane(img).plane
    gx, gy = central_gradient(plane)
    f = cfg.subsample_factor
    gx, gy = gx[::f, ::f], gy[::f, ::f]
    if cfg.magnitude == "euclid":
        mag = np.hypot(gx, gy).ravel()
    else:
        mag = np.concatenate([np.abs(gx).ravel(), np.abs(gy).ravel()])
    binned = np.clip(np.floor(mag).astype(np.int64), 0, cfg.bin_count - 1)
    return np.bincount(binned, minlength=cfg.bin_count).astype(np.int64)


def sharpness(img: ImageBuffer, cfg: SharpnessConfig | None = None) -> float:
    """Mean over standard deviation of the gradient-magnitude distribution.

    Degenerate distributions (zero spread, e.g. constant images or pure
    ramps) are defined to score 0.
    """
    cfg = cfg or SharpnessConfig()
    hist = gradient_histogram(img, cfg)
    return sharpness_from_histogram(hist)


def sharpness_from_histogram(hist: np.ndarray) -> float:
    hist = np.asarray(hist, dtype=np.float64)
    n = hist.sum()
    if n < 2:
        raise InvalidArgumentError("sharpness needs at least 2 samples in the domain")
    bins = np.arange(hist.size, dtype=np.float64)
    mean = float((bins * hist).sum() / n)
    var = float((hist * (bins - mean) ** 2).sum() / n)
    std = var ** 0.5
    if std == 0.0:
        return 0.0
    return mean / std


@dataclass
class _Cluster:
    anchor: Fingerprint
    members: list[str] = field(default_factory=list)


def select(
    images: list[tuple[str, ImageBuffer]],
    duplicate_threshold: int = DEFAULT_DUPLICATE_THRESHOLD,
    cfg: SharpnessConfig | None = None,
) -> SelectionReport:
    """Greedy in-order clustering by fingerprint distance; sharpest member wins.

    An image joins the first cluster whose founding image is within
    ``duplicate_threshold`` bits, else founds a new cluster. Ties on
    sharpness go to the earliest member.
    """
    if not images:
        raise InvalidArgumentError("select requires at least one image")
    cfg = cfg or SharpnessConfig()
    clusters: list[_Cluster] = []
    scores: dict[str, float] = {}
    for image_id, buf in images:
        fp = perceptual_hash(buf)
        scores[image_id] = sharpness(buf, cfg)
        for cluster in clusters:
            if hamming(cluster.anchor, fp) <= duplicate_threshold:
                cluster.members.append(image_id)
                break
        else:
            clusters.append(_Cluster(anchor=fp, members=[image_id]))
    representatives = []
    for cluster in clusters:
        best = max(cluster.members, key=lambda i: scores[i])  # max keeps earliest on ties
        representatives.append(best)
    return SelectionReport(
        clusters=[c.members for c in clusters],
        representatives=representatives,
        sharpness=scores,
    )


def uniform_sample(n_frames: int, k: int) -> list[int]:
    """k frame indices spread evenly over [0, n_frames); deduplicated if k > n."""
    if n_frames < 1 or k < 1:
        raise InvalidArgumentError("n_frames and k must be >= 1")
    if k == 1:
        return [n_frames // 2]
    raw = [int(np.floor(i * (n_frames - 1) / (k - 1) + 0.5)) for i in range(k)]
    out: list[int] = []
    for idx in raw:
        if not out or idx != out[-1]:
            out.append(idx)
    return out
