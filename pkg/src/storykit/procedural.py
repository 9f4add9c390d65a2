"""Random style generation under fixed rules, plus pluggable aesthetic scoring.

Generation is a pure function of the seed (NumPy Philox 4x64, a counter
based generator, so streams are reproducible across platforms). Chains are
background-only; kinds that repeat sample with replacement, everything
else without.
"""

from __future__ import annotations

import html
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np

from .filters import FilterBlock, SPEC_BY_KIND
from .imaging import ImageBuffer, InvalidArgumentError, fit_within, save_png, to_gray
from .kernels import sobel_magnitude_f32
from .pipeline import StylePipeline, execute, validate
from .filters.histogram_ops import luma_percentile

REPEATABLE_KINDS = ("XDoG", "TVF")
SINGLE_USE_KINDS = ("SoftThreshold", "DetailControl", "LumaPosterize", "Saturation", "Size")

# Sampling ranges for generated parameters; kinds absent here keep defaults.
DEFAULT_PARAM_RANGES: dict[str, dict[str, tuple[float, float]]] = {
    "XDoG": {"sigma": (0.5, 8.0), "p": (1.0, 40.0)},
    "SoftThreshold": {"phi": (0.013, 0.059), "epsilon": (50.0, 110.0)},
    "DetailControl": {"delta": (-100.0, 60.0)},
    "LumaPosterize": {"levels": (5, 12)},
    "Saturation": {"s": (1.5, 2.2)},
    "Size": {"percent": (100.0, 300.0)},
}
INTEGER_PARAMS = {("LumaPosterize", "levels")}


@dataclass
class ProcGenConfig:
    seed: int = 0
    count: int = 1
    min_blocks: int = 4
    max_blocks: int = 9
    p_togray: float = 0.2
    param_ranges: dict[str, dict[str, tuple[float, float]]] = field(
        default_factory=lambda: {k: dict(v) for k, v in DEFAULT_PARAM_RANGES.items()})

    def __post_init__(self) -> None:
        if not 0 <= self.seed < (1 << 64):
            raise InvalidArgumentError("seed must fit in 64 bits")
        if self.count < 0:
            raise InvalidArgumentError("count must be >= 0")
        if not 1 <= self.min_blocks <= self.max_blocks:
            raise InvalidArgumentError("need 1 <= min_blocks <= max_blocks")
        if self.p_togray > 0 and self.min_blocks < 3:
            raise InvalidArgumentError("min_blocks must be >= 3 when the gray pair can appear")
        if not 0.0 <= self.p_togray <= 1.0:
            raise InvalidArgumentError("p_togray must be in [0, 1]")
        for kind, ranges in self.param_ranges.items():
            spec = SPEC_BY_KIND.get(kind)
            if spec is None:
                raise InvalidArgumentError(f"param range for unknown kind {kind!r}")
            by_name = {p.name: p for p in spec.params}
            for name, (lo, hi) in ranges.items():
                if name not in by_name:
                    raise InvalidArgumentError(f"{kind} has no parameter {name!r}")
                ps = by_name[name]
                if lo > hi or lo < ps.min or hi > ps.max:
                    raise InvalidArgumentError(
                        f"range for {kind}.{name} must sit inside [{ps.min}, {ps.max}]")


@dataclass
class ScoredStyle:
    style: StylePipeline
    score: float
    scorer_id: str
    terms: dict[str, float] = field(default_factory=dict)


def _style_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=[seed, index]))


def _sample_params(kind: str, cfg: ProcGenConfig, rng: np.random.Generator) -> dict[str, float]:
    params: dict[str, float] = {}
    for name, (lo, hi) in cfg.param_ranges.get(kind, {}).items():
        if (kind, name) in INTEGER_PARAMS:
            params[name] = float(rng.integers(int(lo), int(hi) + 1))
        else:
            params[name] = float(lo + (hi - lo) * rng.random())
    return params


def _generate_one(cfg: ProcGenConfig, index: int) -> StylePipeline:
    rng = _style_rng(cfg.seed, index)
    n = int(rng.integers(cfg.min_blocks, cfg.max_blocks + 1))
    gray = bool(rng.random() < cfg.p_togray)
    k = n - 2 if gray else n
    remaining = list(SINGLE_USE_KINDS)
    kinds: list[str] = []
    for _ in range(k):
        options = list(REPEATABLE_KINDS) + remaining
        pick = options[int(rng.integers(0, len(options)))]
        if pick in remaining:
            remaining.remove(pick)
        kinds.append(pick)
    order = rng.permutation(k)
    kinds = [kinds[i] for i in order]
    # Saturation needs color input: keep it ahead of any XDoG (which drops to 1ch)
    if "Saturation" in kinds and "XDoG" in kinds:
        i_sat = kinds.index("Saturation")
        i_x = kinds.index("XDoG")
        if i_sat > i_x:
            kinds.pop(i_sat)
            kinds.insert(int(rng.integers(0, i_x + 1)), "Saturation")
    if gray:
        lo = kinds.index("Saturation") + 1 if "Saturation" in kinds else 0
        hi = kinds.index("XDoG") if "XDoG" in kinds else k
        slot = int(rng.integers(lo, hi + 1))
        kinds.insert(slot, "ToGray")
        kinds.append("ToColor")
    blocks = [FilterBlock(kind, _sample_params(kind, cfg, rng)) for kind in kinds]
    style = StylePipeline(name=f"proc-{cfg.seed}-{index}", background=blocks)
    problems = validate(style)
    if problems:  # generation rules guarantee validity; treat violations as bugs
        raise AssertionError(f"generated style failed validation: {problems}")
    return style


def generate(cfg: ProcGenConfig) -> list[StylePipeline]:
    """`cfg.count` random styles; same config (seed included) gives the same list."""
    return [_generate_one(cfg, i) for i in range(cfg.count)]


SCORE_WEIGHTS = {"edges": 0.4, "colorfulness": 0.3, "dynamic_range": 0.3}


def heuristic_terms(img: ImageBuffer) -> dict[str, float]:
    """Normalized scoring terms of one stylized image, each in about [0, 1]."""
    luma, chroma = to_gray(img)
    plane = luma.data[:, :, 0]
    edges = float(sobel_magnitude_f32(plane.astype(np.float32)).mean() / 255.0)
    colorfulness = float((chroma.u.std() + chroma.v.std()) / 255.0)
    dr = (luma_percentile(plane, 95) - luma_percentile(plane, 5)) / 255.0
    return {"edges": edges, "colorfulness": colorfulness, "dynamic_range": dr}


def heuristic_score(img: ImageBuffer) -> float:
    terms = heuristic_terms(img)
    return sum(SCORE_WEIGHTS[k] * v for k, v in terms.items())


def score(
    style: StylePipeline,
    probe_images: list[ImageBuffer],
    scorer: Callable[[ImageBuffer], float] | None = None,
    scorer_id: str = "builtin-v1",
) -> ScoredStyle:
    """Mean scorer output over stylized probes. The built-in scorer is a
    documented stand-in: a weighted sum of edge density, chroma spread, and
    luma dynamic range."""
    if not probe_images:
        raise InvalidArgumentError("score requires at least one probe image")
    stylized = [execute(style, probe) for probe in probe_images]
    if scorer is not None:
        values = [float(scorer(s)) for s in stylized]
        return ScoredStyle(style, float(np.mean(values)), scorer_id)
    per_term: dict[str, list[float]] = {k: [] for k in SCORE_WEIGHTS}
    for s in stylized:
        for k, v in heuristic_terms(s).items():
            per_term[k].append(v)
    terms = {k: float(np.mean(v)) for k, v in per_term.items()}
    total = sum(SCORE_WEIGHTS[k] * terms[k] for k in SCORE_WEIGHTS)
    return ScoredStyle(style, float(total), scorer_id, terms)


THUMB_MAX_DIM = 192


def explore_report(
    scored: list[ScoredStyle],
    probe_images: list[ImageBuffer],
    out_dir: str | Path,
) -> Path:
    """Write a static gallery (index.html + gallery.json + thumbnails), best first."""
    out = Path(out_dir)
    try:
        (out / "thumbs").mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OSError(f"cannot create gallery directory {out}: {exc}") from exc
    ranked = sorted(scored, key=lambda s: (-s.score, s.style.name))
    manifest = {"schema_version": 1, "styles": []}
    rows = []
    for entry in ranked:
        thumbs = []
        for i, probe in enumerate(probe_images):
            thumb = fit_within(execute(entry.style, probe), THUMB_MAX_DIM)
            rel = f"thumbs/{entry.style.name}_{i}.png"
            save_png(thumb, out / rel)
            thumbs.append(rel)
        manifest["styles"].append({
            "name": entry.style.name,
            "score": round(entry.score, 6),
            "scorer_id": entry.scorer_id,
            "terms": {k: round(v, 6) for k, v in sorted(entry.terms.items())},
            "thumbnails": thumbs,
        })
        imgs = "".join(f'<img src="{html.escape(t)}" loading="lazy">' for t in thumbs)
        rows.append(
            f'<div class="row"><h3>{html.escape(entry.style.name)}'
            f' <small>{entry.score:.4f}</small></h3>{imgs}</div>')
    (out / "gallery.json").write_text(json.dumps(manifest, indent=2) + "\n")
    page = (
        "<!doctype html><meta charset='utf-8'><title>Style gallery</title>"
        "<style>body{font-family:sans-serif;background:#222;color:#eee}"
        ".row{margin:12px}img{margin:2px;border:1px solid #555}</style>"
        f"<h1>Generated styles ({len(ranked)})</h1>" + "".join(rows) + "\n")
    (out / "index.html").write_text(page)
    return out / "gallery.json"
