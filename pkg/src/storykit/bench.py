"""Per-block timing harness for style pipelines."""

from __future__ import annotations

import statistics
import time

from .pipeline import StylePipeline, execute_timed
from .synth import bench_image

# Block labels as the timing tables print them.
TABLE_NAMES = {
    "ToGray": "ToGray",
    "ToColor": "ToRgb",
    "SoftThreshold": "Thresh.",
    "Posterize": "Posteriz.",
    "LumaPosterize": "LumaPost.",
    "DetailControl": "Detail C.",
    "PatternFill": "Pattern",
    "Saturation": "Saturate",
    "Brightness": "Brightness",
    "Gaussian": "Gaussian",
    "ETF": "ETF",
    "TVF": "TVF",
    "Sobel": "Sobel",
    "XDoG": "XDoG",
    "Size": "Size",
    "Hue": "Hue",
    "Colorize": "Colorize",
    "Halftone": "Halftone",
    "LinearEqualize": "Equalize",
    "MinDynamicRange": "MinDR",
    "Composite": "Composite",
}


def run_bench(style: StylePipeline, width: int, height: int, repeat: int = 3,
              warmup: int = 1, seed: int = 2024) -> dict:
    """Median per-block wall times over `repeat` runs (after `warmup` untimed
    runs that absorb JIT compilation)."""
    img = bench_image(width, height, seed)
    for _ in range(warmup):
        execute_timed(style, img)
    runs: list[list[tuple[str, str, float]]] = []
    totals: list[float] = []
    for _ in range(max(1, repeat)):
        t0 = time.perf_counter()
        _, timings = execute_timed(style, img)
        totals.append(time.perf_counter() - t0)
        runs.append(timings)
    blocks = []
    for idx, (chain, kind, _) in enumerate(runs[0]):
        times = [run[idx][2] * 1000.0 for run in runs]
        blocks.append({
            "name": TABLE_NAMES.get(kind, kind),
            "kind": kind,
            "chain": chain,
            "median_ms": round(statistics.median(times), 3),
            "times_ms": [round(t, 3) for t in times],
        })
    import cv2
    from numba import get_num_threads

    return {
        "style": style.name,
        "size": f"{width}x{height}",
        "repeat": repeat,
        "warmup": warmup,
        "threads": {"numba": get_num_threads(), "opencv": cv2.getNumThreads()},
        "blocks": blocks,
        "block_sum_median_ms": round(sum(b["median_ms"] for b in blocks), 3),
        "total_median_ms": round(statistics.median(totals) * 1000.0, 3),
        "totals_ms": [round(t * 1000.0, 3) for t in totals],
    }


def set_threads(n: int) -> None:
    import cv2
    from numba import set_num_threads

    set_num_threads(max(1, n))
    cv2.setNumThreads(max(1, n))


def format_table(report: dict) -> str:
    lines = [f"{report['style']}  {report['size']}  "
             f"(median of {report['repeat']}, warmup {report['warmup']})"]
    chain = None
    for b in report["blocks"]:
        if b["chain"] != chain:
            chain = b["chain"]
            lines.append(f"  [{chain}]")
        lines.append(f"    {b['name']:<12} {b['median_ms']:>10.2f} ms")
    lines.append(f"  {'total':<14} {report['total_median_ms']:>10.2f} ms")
    return "\n".join(lines)
