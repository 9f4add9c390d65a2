"""Layout templates, detection-driven framing, and page composition."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from .imaging import ImageBuffer, InvalidArgumentError, resize, to_gray
from .kernels import sobel_magnitude_f32
from .pipeline import StylePipeline, execute


@dataclass(frozen=True)
class Panel:
    id: str
    rect: tuple[float, float, float, float]  # normalized (x, y, w, h)
    border_width: float = 0.004

    def __post_init__(self) -> None:
        x, y, w, h = self.rect
        if w <= 0 or h <= 0:
            raise InvalidArgumentError(f"panel {self.id}: width/height must be > 0")
        if x < 0 or y < 0 or x + w > 1.0 + 1e-9 or y + h > 1.0 + 1e-9:
            raise InvalidArgumentError(f"panel {self.id}: rect outside the unit square")

    @property
    def center(self) -> tuple[float, float]:
        x, y, w, h = self.rect
        return (x + w / 2.0, y + h / 2.0)


@dataclass
class LayoutTemplate:
    id: str
    page_aspect: float  # width / height
    panels: list[Panel]
    gutter: float = 0.02
    merge_groups: list[list[str]] = field(default_factory=list)

    def validate(self) -> None:
        if self.page_aspect <= 0:
            raise InvalidArgumentError(f"layout {self.id}: page_aspect must be > 0")
        ids = [p.id for p in self.panels]
        if len(set(ids)) != len(ids):
            raise InvalidArgumentError(f"layout {self.id}: duplicate panel ids")
        known = set(ids)
        grouped: dict[str, int] = {}
        for gi, group in enumerate(self.merge_groups):
            for pid in group:
                if pid not in known:
                    raise InvalidArgumentError(
                        f"layout {self.id}: merge group references unknown panel {pid!r}")
                if pid in grouped:
                    raise InvalidArgumentError(
                        f"layout {self.id}: panel {pid!r} in multiple merge groups")
                grouped[pid] = gi
        for i, a in enumerate(self.panels):
            for b in self.panels[i + 1:]:
                if _rects_overlap(a.rect, b.rect):
                    same_group = grouped.get(a.id) is not None \
                        and grouped.get(a.id) == grouped.get(b.id)
                    if not same_group:
                        raise InvalidArgumentError(
                            f"layout {self.id}: panels {a.id!r} and {b.id!r} overlap")

    def units(self) -> list[list[Panel]]:
        """Render units in reading order; a merge group is one unit."""
        by_id = {p.id: p for p in self.panels}
        grouped: set[str] = set()
        units: list[list[Panel]] = []
        for group in self.merge_groups:
            units.append([by_id[pid] for pid in group])
            grouped.update(group)
        units.extend([p] for p in self.panels if p.id not in grouped)

        def reading_key(unit: list[Panel]):
            cy, cx = min((p.center[1], p.center[0]) for p in unit)
            return (round(cy, 6), round(cx, 6))

        return sorted(units, key=reading_key)


def _rects_overlap(a, b) -> bool:
    ax, ay, aw, ah = a
    bx, by, bw, bh = b
    eps = 1e-9
    return ax < bx + bw - eps and bx < ax + aw - eps \
        and ay < by + bh - eps and by < ay + ah - eps


def _layout_from_dict(entry: dict) -> LayoutTemplate:
    panels = [
        Panel(id=p["id"], rect=tuple(p["rect"]), border_width=p.get("border_width", 0.004))
        for p in entry["panels"]
    ]
    layout = LayoutTemplate(
        id=entry["id"],
        page_aspect=float(entry["page_aspect"]),
        panels=panels,
        gutter=float(entry.get("gutter", 0.02)),
        merge_groups=[list(g) for g in entry.get("merge_groups", [])],
    )
    layout.validate()
    return layout


def load_layouts(path: str | Path) -> list[LayoutTemplate]:
    """Load and validate a layout template file."""
    doc = json.loads(Path(path).read_text())
    return [_layout_from_dict(e) for e in doc["layouts"]]


def bundled_layouts() -> list[LayoutTemplate]:
    text = (resources.files("storykit.data") / "layouts.json").read_text()
    return [_layout_from_dict(e) for e in json.loads(text)["layouts"]]


@dataclass(frozen=True)
class DetectionBox:
    image_id: str
    rect: tuple[int, int, int, int]  # pixels (x, y, w, h)
    kind: str = "object"
    confidence: float = 0.5

    def __post_init__(self) -> None:
        if self.kind not in ("face", "object"):
            raise InvalidArgumentError("detection kind must be 'face' or 'object'")
        if not 0.0 <= self.confidence <= 1.0:
            raise InvalidArgumentError("confidence must be in [0, 1]")
        x, y, w, h = self.rect
        if w < 1 or h < 1 or x < 0 or y < 0:
            raise InvalidArgumentError("detection rect must be positive and in-bounds")


@dataclass(frozen=True)
class CropCandidate:
    rect: tuple[int, int, int, int]

    @property
    def aspect(self) -> float:
        return self.rect[2] / self.rect[3]

    @property
    def area(self) -> int:
        return self.rect[2] * self.rect[3]


def _clamped(x0: float, y0: float, x1: float, y1: float, img_w: int, img_h: int):
    xi0 = max(0, int(math.floor(x0)))
    yi0 = max(0, int(math.floor(y0)))
    xi1 = min(img_w, int(math.ceil(x1)))
    yi1 = min(img_h, int(math.ceil(y1)))
    return (xi0, yi0, xi1 - xi0, yi1 - yi0)


def candidate_crops(box: DetectionBox, img_w: int, img_h: int) -> list[CropCandidate]:
    """The fixed crop-suggestion family around a detection, clamped and deduplicated.

    Expansions: 20 px on every side; height and/or width grown 10% or 50%
    (centered); full image height or width; the whole image.
    """
    x, y, w, h = box.rect
    if x + w > img_w or y + h > img_h:
        raise InvalidArgumentError("detection box outside image bounds")
    x1, y1 = x + w, y + h
    raw = [
        (x - 20, y - 20, x1 + 20, y1 + 20),
        (x, y - 0.05 * h, x1, y1 + 0.05 * h),
        (x - 0.05 * w, y, x1 + 0.05 * w, y1),
        (x - 0.05 * w, y - 0.05 * h, x1 + 0.05 * w, y1 + 0.05 * h),
        (x, y - 0.25 * h, x1, y1 + 0.25 * h),
        (x - 0.25 * w, y, x1 + 0.25 * w, y1),
        (x - 0.25 * w, y - 0.25 * h, x1 + 0.25 * w, y1 + 0.25 * h),
        (x, 0, x1, img_h),
        (0, y, img_w, y1),
        (0, 0, img_w, img_h),
    ]
    out: list[CropCandidate] = []
    seen = set()
    for x0, y0, xe, ye in raw:
        rect = _clamped(x0, y0, xe, ye, img_w, img_h)
        if rect not in seen:
            seen.add(rect)
            out.append(CropCandidate(rect))
    return out


def best_crop(
    candidates: list[CropCandidate],
    target_aspect: float,
    img_w: int,
    img_h: int,
    contain: tuple[int, int, int, int] | None = None,
) -> CropCandidate:
    """Pick the candidate with the closest log aspect, then fit the target exactly.

    The winner is symmetrically expanded along the deficient axis (or
    center-trimmed once it hits the image border), slid to stay inside the
    image, and, when possible, to keep containing `contain`.
    """
    if not candidates:
        raise InvalidArgumentError("best_crop needs at least one candidate")
    if target_aspect <= 0:
        raise InvalidArgumentError("target aspect must be > 0")

    def key(c: CropCandidate):
        return (abs(math.log(c.aspect) - math.log(target_aspect)), -c.area)

    winner = min(candidates, key=key)
    x, y, w, h = (float(v) for v in winner.rect)
    cx, cy = x + w / 2.0, y + h / 2.0
    # expand the deficient axis; fall back to trimming the other at the border
    if w < target_aspect * h:
        w = target_aspect * h
        if w > img_w:
            w = float(img_w)
            h = w / target_aspect
    else:
        h = w / target_aspect
        if h > img_h:
            h = float(img_h)
            w = h * target_aspect
    # integer dims: derive the longer axis from the shorter so the ratio survives rounding
    if target_aspect >= 1.0:
        hi = max(1, min(img_h, int(math.floor(h + 0.5))))
        wi = max(1, min(img_w, int(math.floor(hi * target_aspect + 0.5))))
    else:
        wi = max(1, min(img_w, int(math.floor(w + 0.5))))
        hi = max(1, min(img_h, int(math.floor(wi / target_aspect + 0.5))))
    if contain is not None:
        # rounding the derived axis can undercut the box by one pixel; the
        # bump stays within the 1 px aspect tolerance
        if wi < contain[2] <= img_w:
            wi = contain[2]
        if hi < contain[3] <= img_h:
            hi = contain[3]
    lo_x, hi_x = 0, img_w - wi
    lo_y, hi_y = 0, img_h - hi
    if contain is not None:
        bx, by, bw, bh = contain
        if bw <= wi:
            lo_x = max(lo_x, bx + bw - wi)
            hi_x = min(hi_x, bx)
        if bh <= hi:
            lo_y = max(lo_y, by + bh - hi)
            hi_y = min(hi_y, by)
    xi = int(math.floor(min(max(cx - wi / 2.0, lo_x), hi_x) + 0.5))
    yi = int(math.floor(min(max(cy - hi / 2.0, lo_y), hi_y) + 0.5))
    xi = min(max(xi, lo_x), max(lo_x, hi_x))
    yi = min(max(yi, lo_y), max(lo_y, hi_y))
    xi = min(max(xi, 0), img_w - wi)
    yi = min(max(yi, 0), img_h - hi)
    return CropCandidate((xi, yi, wi, hi))


FALLBACK_WINDOW_FRACTION = 0.4


def fallback_region(img: ImageBuffer, image_id: str = "") -> DetectionBox:
    """Gradient-energy window used when no detector sidecar is available.

    Slides a square window (40% of the min dimension) over the Sobel
    magnitude via an integral image; ties resolve toward the center.
    """
    gray = img if img.channels == 1 else to_gray(img)[0]
    plane = gray.plane.astype(np.float32)
    side = max(1, int(math.floor(min(img.width, img.height) * FALLBACK_WINDOW_FRACTION + 0.5)))
    mag = sobel_magnitude_f32(plane).astype(np.float64)
    ii = np.pad(mag.cumsum(axis=0).cumsum(axis=1), ((1, 0), (1, 0)))
    sums = (ii[side:, side:] - ii[:-side, side:] - ii[side:, :-side] + ii[:-side, :-side])
    best = sums.max()
    ys, xs = np.nonzero(sums >= best - 1e-9)
    cy0 = (img.height - side) / 2.0
    cx0 = (img.width - side) / 2.0
    dist = (ys - cy0) ** 2 + (xs - cx0) ** 2
    order = np.lexsort((xs, ys, dist))
    pick = order[0]
    return DetectionBox(image_id=image_id, rect=(int(xs[pick]), int(ys[pick]), side, side),
                        kind="object", confidence=0.5)


def best_box(boxes: list[DetectionBox]) -> DetectionBox:
    """Highest-confidence detection; earliest wins ties."""
    return max(boxes, key=lambda b: b.confidence)


def crop_image(img: ImageBuffer, rect: tuple[int, int, int, int]) -> ImageBuffer:
    x, y, w, h = rect
    return ImageBuffer(img.data[y:y + h, x:x + w].copy())


def frame_into(
    img: ImageBuffer,
    box: DetectionBox | None,
    panel_w: int,
    panel_h: int,
) -> ImageBuffer:
    """Crop around the subject to the panel aspect, then zoom to panel pixels."""
    if box is None:
        box = fallback_region(img)
    cands = candidate_crops(box, img.width, img.height)
    chosen = best_crop(cands, panel_w / panel_h, img.width, img.height, contain=box.rect)
    return resize(crop_image(img, chosen.rect), panel_w, panel_h)


def compose(
    images: list[tuple[str, ImageBuffer]],
    layout: LayoutTemplate,
    style: StylePipeline,
    page_w: int,
    assignment_seed: int = 0,
    detections: dict[str, list[DetectionBox]] | None = None,
) -> ImageBuffer:
    """Fill the layout with stylized crops, in temporal order, on a white page."""
    if page_w < 320:
        raise InvalidArgumentError("page width must be >= 320 px")
    if not images:
        raise InvalidArgumentError("compose requires at least one image")
    units = layout.units()
    if len(images) < len(units):
        raise InvalidArgumentError(
            f"layout {layout.id!r} needs {len(units)} images, got {len(images)}")
    page_h = int(math.floor(page_w / layout.page_aspect + 0.5))
    rng = np.random.Generator(np.random.Philox(key=[assignment_seed, 0x5eed]))
    chosen = sorted(rng.choice(len(images), size=len(units), replace=False).tolist())
    page = np.full((page_h, page_w, 3), 255, np.uint8)
    detections = detections or {}
    for unit, img_idx in zip(units, chosen):
        image_id, img = images[img_idx]
        x0 = min(p.rect[0] for p in unit)
        y0 = min(p.rect[1] for p in unit)
        x1 = max(p.rect[0] + p.rect[2] for p in unit)
        y1 = max(p.rect[1] + p.rect[3] for p in unit)
        px = int(math.floor(x0 * page_w + 0.5))
        py = int(math.floor(y0 * page_h + 0.5))
        pw = max(1, int(math.floor(x1 * page_w + 0.5)) - px)
        ph = max(1, int(math.floor(y1 * page_h + 0.5)) - py)
        boxes = detections.get(image_id)
        box = best_box(boxes) if boxes else None
        framed = frame_into(img, box, pw, ph)
        page[py:py + ph, px:px + pw] = execute(style, framed).data
    for panel in layout.panels:
        _draw_border(page, panel, page_w, page_h)
    return ImageBuffer(page)


def generate_pages(
    images: list[tuple[str, ImageBuffer]],
    styles: dict[str, StylePipeline],
    count: int,
    seed: int,
    page_w: int = 1024,
    layouts: list[LayoutTemplate] | None = None,
    detections: dict[str, list[DetectionBox]] | None = None,
) -> list[tuple[str, str, ImageBuffer]]:
    """`count` randomized (layout, style, assignment) pages, seeded.

    Returns (layout_id, style_name, page) triples. Layouts that need more
    images than are available are excluded up front; page i draws from the
    stream Philox(seed, i), so a page set is reproducible page by page.
    """
    pool = layouts if layouts is not None else bundled_layouts()
    eligible = [l for l in pool if len(l.units()) <= len(images)]
    if not eligible:
        raise InvalidArgumentError(
            f"no layout in the pool fits {len(images)} usable image(s)")
    if not styles:
        raise InvalidArgumentError("generate_pages needs at least one style")
    names = sorted(styles)
    pages = []
    for i in range(count):
        rng = np.random.Generator(np.random.Philox(key=[seed, i]))
        layout = eligible[int(rng.integers(len(eligible)))]
        style_name = names[int(rng.integers(len(names)))]
        assignment = int(rng.integers(0, 2 ** 32))
        page = compose(images, layout, styles[style_name], page_w, assignment, detections)
        pages.append((layout.id, style_name, page))
    return pages


def _draw_border(page: np.ndarray, panel: Panel, page_w: int, page_h: int) -> None:
    x, y, w, h = panel.rect
    px = int(math.floor(x * page_w + 0.5))
    py = int(math.floor(y * page_h + 0.5))
    pw = max(1, int(math.floor((x + w) * page_w + 0.5)) - px)
    ph = max(1, int(math.floor((y + h) * page_h + 0.5)) - py)
    t = max(1, int(math.floor(panel.border_width * page_w + 0.5)))
    page[py:py + t, px:px + pw] = 0
    page[py + ph - t:py + ph, px:px + pw] = 0
    page[py:py + ph, px:px + t] = 0
    page[py:py + ph, px + pw - t:px + pw] = 0
