"""Batch entry points: selection, stylization, storyboards, benchmarks, procgen.

Exit codes: 0 success, 1 I/O problems, 2 validation failures.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from . import bench as bench_mod
from . import pipeline, procedural, synth
from .imaging import (
    ImageBuffer,
    InvalidArgumentError,
    encode_png,
    fit_within,
    load_image,
    save_png,
)
from .selection import DEFAULT_DUPLICATE_THRESHOLD, select
from .storyboard import DetectionBox, bundled_layouts, generate_pages

IMAGE_EXTS = (".png", ".jpg", ".jpeg")


class ValidationFailure(click.ClickException):
    exit_code = 2


class IOFailure(click.ClickException):
    exit_code = 1


def _load_dir_images(path: Path) -> list[tuple[str, ImageBuffer]]:
    if not path.is_dir():
        raise IOFailure(f"not a directory: {path}")
    files = sorted(p for p in path.iterdir() if p.suffix.lower() in IMAGE_EXTS)
    if not files:
        raise IOFailure("no images")
    out = []
    for f in files:
        try:
            out.append((f.name, load_image(f)))
        except OSError as exc:
            raise IOFailure(f"unreadable image {f}: {exc}") from exc
    return out


def _load_style(ref: str) -> pipeline.StylePipeline:
    path = Path(ref)
    try:
        if path.is_file():
            style = pipeline.load_style_file(path)
        elif ref in pipeline.bundled_style_names():
            style = pipeline.load_bundled_style(ref)
        else:
            raise IOFailure(f"no style file or bundled style named {ref!r}")
    except pipeline.StyleParseError as exc:
        raise ValidationFailure(f"style document rejected: {exc}") from exc
    errors = pipeline.validate(style)
    if errors:
        raise ValidationFailure("invalid style:\n  " + "\n  ".join(errors))
    return style


@click.group()
@click.version_option()
def main() -> None:
    """Stylized storyboards from image sets."""


@main.command("select")
@click.option("--in", "in_dir", required=True, type=click.Path(path_type=Path))
@click.option("--threshold", default=DEFAULT_DUPLICATE_THRESHOLD, show_default=True,
              type=click.IntRange(0, 64), help="Hamming bits for near-duplicates.")
@click.option("--report", "report_path", required=True, type=click.Path(path_type=Path))
def select_cmd(in_dir: Path, threshold: int, report_path: Path) -> None:
    """Cluster near-duplicates and rank by sharpness."""
    images = _load_dir_images(in_dir)
    report = select(images, threshold)
    report_path.write_text(json.dumps(report.to_json_dict(), indent=2) + "\n")
    click.echo(f"{len(images)} images -> {len(report.clusters)} clusters")


@main.command("stylize")
@click.option("--in", "in_path", required=True, type=click.Path(path_type=Path))
@click.option("--style", "style_ref", required=True)
@click.option("--out", "out_path", required=True, type=click.Path(path_type=Path))
@click.option("--max-dim", default=None, type=click.IntRange(16, 8192),
              help="Downscale so max(w, h) <= this before stylizing.")
def stylize_cmd(in_path: Path, style_ref: str, out_path: Path, max_dim: int | None) -> None:
    """Apply a style document to one image."""
    style = _load_style(style_ref)
    try:
        img = load_image(in_path)
    except OSError as exc:
        raise IOFailure(f"cannot read {in_path}: {exc}") from exc
    if max_dim is not None:
        img = fit_within(img, max_dim)
    out = pipeline.execute(style, img)
    save_png(out, out_path)
    click.echo(f"wrote {out_path} ({out.width}x{out.height})")


def _load_detections(path: Path) -> dict[str, list[DetectionBox]]:
    doc = json.loads(path.read_text())
    out: dict[str, list[DetectionBox]] = {}
    for entry in doc["detections"]:
        boxes = [
            DetectionBox(entry["image_id"], (b["x"], b["y"], b["w"], b["h"]),
                         b["kind"], b["confidence"])
            for b in entry["boxes"]
        ]
        out[entry["image_id"]] = boxes
    return out


@main.command("storyboard")
@click.option("--in", "in_dir", required=True, type=click.Path(path_type=Path))
@click.option("--count", default=14, show_default=True, type=click.IntRange(0, 500))
@click.option("--seed", default=0, show_default=True, type=click.IntRange(0))
@click.option("--out", "out_dir", required=True, type=click.Path(path_type=Path))
@click.option("--threshold", default=DEFAULT_DUPLICATE_THRESHOLD, show_default=True,
              type=click.IntRange(0, 64))
@click.option("--page-width", default=1024, show_default=True, type=click.IntRange(320, 8192))
@click.option("--detections", "detections_path", default=None,
              type=click.Path(path_type=Path), help="Detections sidecar JSON.")
def storyboard_cmd(in_dir: Path, count: int, seed: int, out_dir: Path, threshold: int,
                   page_width: int, detections_path: Path | None) -> None:
    """Frames/photos in a directory -> stylized storyboard pages."""
    images = _load_dir_images(in_dir)
    report = select(images, threshold)
    order = {image_id: i for i, (image_id, _) in enumerate(images)}
    keep = sorted(report.representatives, key=lambda i: order[i])
    by_id = dict(images)
    usable = [(i, by_id[i]) for i in keep]
    detections = _load_detections(detections_path) if detections_path else None
    styles = {n: pipeline.load_bundled_style(n) for n in pipeline.bundled_style_names()}
    try:
        pages = generate_pages(usable, styles, count, seed, page_width,
                               detections=detections)
    except InvalidArgumentError as exc:
        raise ValidationFailure(str(exc)) from exc
    out_dir.mkdir(parents=True, exist_ok=True)
    manifest = {"seed": seed, "page_width": page_width, "pages": []}
    for i, (layout_id, style_name, page) in enumerate(pages):
        name = f"page_{i:03d}.png"
        save_png(page, out_dir / name)
        manifest["pages"].append({"file": name, "layout_id": layout_id,
                                  "style_name": style_name})
    (out_dir / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")
    click.echo(f"wrote {len(pages)} pages to {out_dir} "
               f"({len(usable)} usable of {len(images)} input images)")


@main.command("bench")
@click.option("--style", "style_ref", required=True)
@click.option("--size", default="1920x1080", show_default=True)
@click.option("--repeat", default=3, show_default=True, type=click.IntRange(1, 99))
@click.option("--threads", default=None, type=click.IntRange(1, 256),
              help="Worker threads for the filter kernels.")
@click.option("--out", "out_path", default=None, type=click.Path(path_type=Path),
              help="Also write the JSON report here.")
def bench_cmd(style_ref: str, size: str, repeat: int, threads: int | None,
              out_path: Path | None) -> None:
    """Per-block wall times for a style on a synthetic image."""
    style = _load_style(style_ref)
    try:
        w, h = (int(v) for v in size.lower().split("x"))
    except ValueError:
        raise ValidationFailure(f"--size must look like 1920x1080, got {size!r}")
    if threads is not None:
        bench_mod.set_threads(threads)
    report = bench_mod.run_bench(style, w, h, repeat)
    click.echo(bench_mod.format_table(report))
    if out_path is not None:
        out_path.write_text(json.dumps(report, indent=2) + "\n")


@main.command("procgen")
@click.option("--seed", default=0, show_default=True, type=click.IntRange(0))
@click.option("--count", default=50, show_default=True, type=click.IntRange(0, 100000))
@click.option("--probes", "probes_dir", required=True, type=click.Path(path_type=Path))
@click.option("--out", "out_dir", required=True, type=click.Path(path_type=Path))
@click.option("--top", "top_n", default=10, show_default=True, type=click.IntRange(0))
def procgen_cmd(seed: int, count: int, probes_dir: Path, out_dir: Path, top_n: int) -> None:
    """Generate random styles, score them on probe images, emit a gallery."""
    probes = [fit_within(img, 320) for _, img in _load_dir_images(probes_dir)]
    cfg = procedural.ProcGenConfig(seed=seed, count=count)
    styles = procedural.generate(cfg)
    scored = [procedural.score(s, probes) for s in styles]
    procedural.explore_report(scored, probes, out_dir)
    ranked = sorted(scored, key=lambda s: (-s.score, s.style.name))
    styles_dir = out_dir / "styles"
    styles_dir.mkdir(parents=True, exist_ok=True)
    for entry in ranked[:top_n]:
        (styles_dir / f"{entry.style.name}.json").write_text(pipeline.serialize(entry.style))
    click.echo(f"{count} styles scored; gallery at {out_dir / 'index.html'}; "
               f"top {min(top_n, len(ranked))} saved to {styles_dir}")


@main.command("fixtures")
@click.option("--out", "out_dir", required=True, type=click.Path(path_type=Path))
@click.option("--seed", default=42, show_default=True, type=click.IntRange(0))
@click.option("--count", default=32, show_default=True, type=click.IntRange(1, 500))
def fixtures_cmd(out_dir: Path, seed: int, count: int) -> None:
    """Regenerate the bundled synthetic frame dump (fixture maintenance)."""
    out_dir.mkdir(parents=True, exist_ok=True)
    for i, frame in enumerate(synth.video_frames(seed=seed, count=count)):
        save_png(frame, out_dir / f"frame_{i:03d}.png")
    click.echo(f"wrote {count} frames to {out_dir}")


@main.command("serve")
@click.option("--port", default=None, type=click.IntRange(1, 65535),
              help="Defaults to $PORT or 8023.")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--data-dir", default=None, type=click.Path(path_type=Path),
              help="Session storage directory.")
def serve_cmd(port: int | None, host: str, data_dir: Path | None) -> None:
    """Run the studio HTTP service."""
    import os

    import uvicorn

    from .service import create_app

    resolved = port or int(os.environ.get("PORT", "8023"))
    uvicorn.run(create_app(data_dir), host=host, port=resolved)


if __name__ == "__main__":
    sys.exit(main())
