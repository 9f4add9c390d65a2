"""The filter block catalog: every block is a pure buffer-to-buffer transform."""

from __future__ import annotations

from ..imaging import ImageBuffer
from .advanced import (
    detail_control,
    etf,
    gaussian,
    halftone,
    pattern_fill,
    size,
    sobel,
    tvf,
    xdog,
)
from .catalog import (
    ALL_KINDS,
    KIND_SPECS,
    SPEC_BY_KIND,
    FilterBlock,
    KindSpec,
    ParamSchema,
    catalog_document,
    output_channels,
    validate_block,
)
from .histogram_ops import linear_equalize, min_dynamic_range
from .pixel_ops import (
    brightness,
    colorize,
    hue,
    luma_posterize,
    posterize,
    saturate,
    soft_threshold,
)

__all__ = [
    "ALL_KINDS", "KIND_SPECS", "SPEC_BY_KIND", "FilterBlock", "KindSpec", "ParamSchema",
    "catalog_document", "output_channels", "validate_block", "apply_block",
    "posterize", "luma_posterize", "brightness", "soft_threshold", "saturate",
    "hue", "colorize", "gaussian", "etf", "tvf", "sobel", "xdog", "size",
    "pattern_fill", "halftone", "detail_control", "linear_equalize", "min_dynamic_range",
]


def apply_block(block: FilterBlock, img: ImageBuffer) -> ImageBuffer:
    """Run one context-free block. ToGray/ToColor carry chroma state and are
    executed by the pipeline, not here."""
    kind = block.kind
    p = block.param
    if kind == "Posterize":
        return posterize(img, int(round(p("levels"))))
    if kind == "LumaPosterize":
        return luma_posterize(img, int(round(p("levels"))))
    if kind == "Brightness":
        return brightness(img, p("factor"))
    if kind == "SoftThreshold":
        return soft_threshold(img, p("phi"), p("epsilon"))
    if kind == "Saturation":
        return saturate(img, p("s"))
    if kind == "Hue":
        return hue(img, p("angle"), (p("bias_r"), p("bias_g"), p("bias_b")))
    if kind == "Colorize":
        return colorize(img, p("hue"), p("sat"))
    if kind == "Gaussian":
        return gaussian(img, p("sigma"))
    if kind == "ETF":
        return etf(img, int(round(p("radius"))), int(round(p("iterations"))))
    if kind == "TVF":
        return tvf(img, int(round(p("iterations"))), p("dt"), p("eps"))
    if kind == "Sobel":
        return sobel(img)
    if kind == "XDoG":
        return xdog(img, p("sigma"), p("p"))
    if kind == "Size":
        return size(img, p("percent"))
    if kind == "PatternFill":
        return pattern_fill(img, int(round(p("levels"))))
    if kind == "Halftone":
        return halftone(img, int(round(p("cell"))), cmyk=int(round(p("cmyk"))) == 1)
    if kind == "DetailControl":
        return detail_control(img, p("delta"))
    if kind == "LinearEqualize":
        return linear_equalize(img, p("low"), p("high"))
    if kind == "MinDynamicRange":
        return min_dynamic_range(img, p("dr"))
    raise ValueError(f"block kind {kind!r} is not context-free (or unknown)")
