"""Two-layer style model: background chain, optional line foreground, compositing.

A style executes its background chain for color, and (optionally) a
foreground chain that must end single-channel; the foreground acts as an
alpha mask where black paints line_color and white is transparent.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from .filters import FilterBlock, SPEC_BY_KIND, apply_block, output_channels, validate_block
from .imaging import (
    ChromaPlanes,
    ImageBuffer,
    InvalidArgumentError,
    resize,
    resize_plane_float,
    round_u8,
    to_color,
    to_gray,
)

SCHEMA_VERSION = 1


class StyleParseError(ValueError):
    """Malformed style document; `location` points at the offending field."""

    def __init__(self, message: str, location: str = "$"):
        super().__init__(f"{location}: {message}")
        self.location = location
        self.reason = message


class PipelineValidationError(InvalidArgumentError):
    def __init__(self, errors: list[str]):
        super().__init__("; ".join(errors))
        self.errors = errors


@dataclass
class StylePipeline:
    name: str = "untitled"
    background: list[FilterBlock] = field(default_factory=list)
    foreground: list[FilterBlock] | None = None
    line_color: tuple[int, int, int] = (0, 0, 0)


def _validate_chain(blocks: list[FilterBlock], chain: str, must_end_1ch: bool) -> list[str]:
    errors: list[str] = []
    channels = 3
    gray_stack = 0
    for i, block in enumerate(blocks):
        errors.extend(validate_block(block, i, chain))
        spec = SPEC_BY_KIND.get(block.kind)
        if spec is None:
            continue
        if block.kind == "ToColor" and gray_stack == 0:
            errors.append(f"{chain}[{i}]: ToColor without prior ToGray")
            channels = 3
            continue
        if spec.requires_channels is not None and channels != spec.requires_channels:
            errors.append(
                f"{chain}[{i}]: {block.kind} needs {spec.requires_channels}-channel input, "
                f"chain carries {channels}")
        if block.kind == "ToGray":
            gray_stack += 1
        elif block.kind == "ToColor":
            gray_stack -= 1
        channels = output_channels(block, channels) if spec.requires_channels is None \
            else output_channels(block, spec.requires_channels)
    if must_end_1ch and channels != 1:
        errors.append(f"{chain}: foreground chain must end single-channel, ends with {channels}")
    return errors


def validate(style: StylePipeline) -> list[str]:
    """Every channel-compatibility and parameter violation; empty list means executable."""
    errors = _validate_chain(style.background, "background", must_end_1ch=False)
    if style.foreground is not None:
        errors.extend(_validate_chain(style.foreground, "foreground", must_end_1ch=True))
    if len(style.line_color) != 3 or any(not 0 <= int(c) <= 255 for c in style.line_color):
        errors.append("line_color: components must be in [0, 255]")
    return errors


def _restore_dims(img: ImageBuffer, width: int, height: int) -> ImageBuffer:
    if (img.width, img.height) == (width, height):
        return img
    return resize(img, width, height)


def _as_rgb(img: ImageBuffer) -> ImageBuffer:
    if img.channels == 3:
        return img
    return ImageBuffer(np.repeat(img.data, 3, axis=2))


def execute(style: StylePipeline, img: ImageBuffer) -> ImageBuffer:
    """Run both chains and composite; any Size scaling is undone at the end."""
    out, _ = _execute_inner(style, img, timer=None)
    return out


def execute_timed(style: StylePipeline, img: ImageBuffer):
    """Like execute, also returning [(chain, kind, seconds)] per block plus
    a final ('page', 'Composite', s) entry."""
    import time

    return _execute_inner(style, img, timer=time.perf_counter)


def _execute_inner(style: StylePipeline, img: ImageBuffer, timer):
    errors = validate(style)
    if errors:
        raise PipelineValidationError(errors)
    timings: list[tuple[str, str, float]] = []

    def run_chain(blocks, chain_name):
        current = img
        chroma_stack: list[ChromaPlanes] = []
        for block in blocks:
            t0 = timer() if timer else 0.0
            if block.kind == "ToGray":
                current, chroma = to_gray(current)
                chroma_stack.append(chroma)
            elif block.kind == "ToColor":
                chroma = chroma_stack.pop()
                if chroma.u.shape != (current.height, current.width):
                    chroma = ChromaPlanes(
                        resize_plane_float(chroma.u, current.width, current.height),
                        resize_plane_float(chroma.v, current.width, current.height),
                    )
                current = to_color(current, chroma)
            else:
                current = apply_block(block, current)
            if timer:
                timings.append((chain_name, block.kind, timer() - t0))
        return current

    bg_raw = run_chain(style.background, "background")
    fg_raw = run_chain(style.foreground, "foreground") if style.foreground is not None else None
    tc = timer() if timer else 0.0
    bg = _as_rgb(_restore_dims(bg_raw, img.width, img.height))
    if fg_raw is None:
        result = bg
    else:
        fg = _restore_dims(fg_raw, img.width, img.height)
        alpha = (np.float32(255.0) - fg.data[:, :, 0].astype(np.float32)) * np.float32(1 / 255.0)
        line = np.asarray(style.line_color, dtype=np.float32)
        out = (np.float32(1.0) - alpha)[:, :, None] * bg.data.astype(np.float32) \
            + alpha[:, :, None] * line
        result = ImageBuffer(round_u8(out))
    if timer:
        timings.append(("page", "Composite", timer() - tc))
    return result, timings


def to_document(style: StylePipeline) -> dict:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "name": style.name,
        "line_color": [int(c) for c in style.line_color],
        "background": [b.to_json_dict() for b in style.background],
    }
    if style.foreground is not None:
        doc["foreground"] = [b.to_json_dict() for b in style.foreground]
    return doc


def serialize(style: StylePipeline) -> str:
    """Canonical JSON document (stable field order, 2-space indent)."""
    return json.dumps(to_document(style), indent=2) + "\n"


def _parse_block(entry, location: str) -> FilterBlock:
    if not isinstance(entry, dict):
        raise StyleParseError("block must be an object", location)
    kind = entry.get("kind")
    if not isinstance(kind, str):
        raise StyleParseError("missing or non-string 'kind'", f"{location}.kind")
    if kind not in SPEC_BY_KIND:
        raise StyleParseError(f"unknown filter kind {kind!r}", f"{location}.kind")
    params = entry.get("params", {})
    if not isinstance(params, dict):
        raise StyleParseError("'params' must be an object", f"{location}.params")
    for key, value in params.items():
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            raise StyleParseError("parameter values must be numbers",
                                  f"{location}.params.{key}")
    return FilterBlock(kind, {k: float(v) for k, v in params.items()})


def from_document(doc: dict) -> StylePipeline:
    if not isinstance(doc, dict):
        raise StyleParseError("style document must be an object")
    version = doc.get("schema_version")
    if version != SCHEMA_VERSION:
        raise StyleParseError(f"unsupported schema_version {version!r}", "$.schema_version")
    name = doc.get("name", "untitled")
    if not isinstance(name, str):
        raise StyleParseError("'name' must be a string", "$.name")
    line_color = doc.get("line_color", [0, 0, 0])
    if (not isinstance(line_color, list) or len(line_color) != 3
            or any(not isinstance(c, int) or not 0 <= c <= 255 for c in line_color)):
        raise StyleParseError("'line_color' must be three ints in [0, 255]", "$.line_color")
    bg_raw = doc.get("background", [])
    if not isinstance(bg_raw, list):
        raise StyleParseError("'background' must be a list", "$.background")
    background = [_parse_block(e, f"$.background[{i}]") for i, e in enumerate(bg_raw)]
    foreground = None
    if "foreground" in doc and doc["foreground"] is not None:
        fg_raw = doc["foreground"]
        if not isinstance(fg_raw, list):
            raise StyleParseError("'foreground' must be a list", "$.foreground")
        foreground = [_parse_block(e, f"$.foreground[{i}]") for i, e in enumerate(fg_raw)]
    return StylePipeline(name=name, background=background, foreground=foreground,
                         line_color=tuple(line_color))


def parse(text: str) -> StylePipeline:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise StyleParseError(f"invalid JSON: {exc.msg}",
                              f"$ (line {exc.lineno}, col {exc.colno})") from exc
    return from_document(doc)


def bundled_style_names() -> list[str]:
    root = resources.files("storykit.data") / "styles"
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def load_bundled_style(name: str) -> StylePipeline:
    path = resources.files("storykit.data") / "styles" / f"{name}.json"
    if not path.is_file():
        raise InvalidArgumentError(f"no bundled style named {name!r}")
    return parse(path.read_text())


def load_style_file(path) -> StylePipeline:
    """Parse a style document from a filesystem path."""
    from pathlib import Path

    return parse(Path(path).read_text())
