"""Filter block descriptors: the machine-readable catalog and validation.

The catalog is the single source of truth for block kinds, parameter
ranges, defaults and channel behavior; the service, CLI, and studio UI all
consume it. Out-of-range parameters are rejected here, never clamped.
"""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class ParamSchema:
    name: str
    min: float
    max: float
    default: float
    step: float

    def __post_init__(self) -> None:
        if not self.min <= self.default <= self.max:
            raise ValueError(f"default for {self.name} outside [{self.min}, {self.max}]")


@dataclass(frozen=True)
class KindSpec:
    kind: str
    group: str              # pixel | advanced | histogram
    params: tuple[ParamSchema, ...]
    requires_channels: int | None = None   # None = any
    # 'same', 1, 3, or 'halftone' (1 unless cmyk param set)
    output_channels: object = "same"


def _p(name, lo, hi, default, step) -> ParamSchema:
    return ParamSchema(name, lo, hi, default, step)


# Ordered catalog; order is stable and mirrored by the HTTP catalog endpoint.
KIND_SPECS: tuple[KindSpec, ...] = (
    KindSpec("ToGray", "pixel", (), requires_channels=3, output_channels=1),
    KindSpec("ToColor", "pixel", (), requires_channels=1, output_channels=3),
    KindSpec("Posterize", "pixel", (_p("levels", 2, 255, 10, 1),)),
    KindSpec("LumaPosterize", "pixel", (_p("levels", 2, 255, 8, 1),)),
    KindSpec("Brightness", "pixel", (_p("factor", 0.0, 4.0, 1.0, 0.05),)),
    KindSpec("SoftThreshold", "pixel", (
        _p("phi", 0.013, 0.059, 0.03, 0.001),
        _p("epsilon", 50, 110, 80, 1),
    )),
    KindSpec("Saturation", "pixel", (_p("s", 0.0, 3.0, 1.0, 0.05),), requires_channels=3),
    KindSpec("Hue", "pixel", (
        _p("angle", 0, 360, 0, 1),
        _p("bias_r", -128, 128, 0, 1),
        _p("bias_g", -128, 128, 0, 1),
        _p("bias_b", -128, 128, 0, 1),
    ), requires_channels=3),
    KindSpec("Colorize", "pixel", (
        _p("hue", 0, 360, 30, 1),
        _p("sat", 0.0, 1.0, 0.5, 0.01),
    ), output_channels=3),
    KindSpec("Gaussian", "advanced", (_p("sigma", 0.1, 16.0, 2.0, 0.1),)),
    KindSpec("ETF", "advanced", (
        _p("radius", 1, 16, 5, 1),
        _p("iterations", 1, 8, 3, 1),
    )),
    KindSpec("TVF", "advanced", (
        _p("iterations", 1, 200, 30, 1),
        _p("dt", 0.01, 0.25, 0.2, 0.01),
        _p("eps", 0.01, 2.55, 0.255, 0.005),
    )),
    KindSpec("Sobel", "advanced", (), output_channels=1),
    KindSpec("XDoG", "advanced", (
        _p("sigma", 0.5, 8.0, 2.0, 0.1),
        _p("p", 1.0, 40.0, 20.0, 0.5),
    ), output_channels=1),
    KindSpec("Size", "advanced", (_p("percent", 10, 400, 100, 1),)),
    KindSpec("PatternFill", "advanced", (_p("levels", 2, 8, 4, 1),), output_channels=1),
    KindSpec("Halftone", "advanced", (
        _p("cell", 2, 32, 8, 1),
        _p("cmyk", 0, 1, 0, 1),
    ), output_channels="halftone"),
    KindSpec("DetailControl", "advanced", (_p("delta", -100, 60, 0, 1),)),
    KindSpec("LinearEqualize", "histogram", (
        _p("low", 0, 100, 5, 1),
        _p("high", 0, 100, 95, 1),
    )),
    KindSpec("MinDynamicRange", "histogram", (_p("dr", 0, 255, 120, 1),)),
)

SPEC_BY_KIND: dict[str, KindSpec] = {s.kind: s for s in KIND_SPECS}
ALL_KINDS: tuple[str, ...] = tuple(s.kind for s in KIND_SPECS)


@dataclass
class FilterBlock:
    """One parameterized filter step; params missing from the map take defaults."""

    kind: str
    params: dict[str, float] = field(default_factory=dict)

    def schema(self) -> KindSpec:
        return SPEC_BY_KIND[self.kind]

    def param(self, name: str) -> float:
        if name in self.params:
            return float(self.params[name])
        for ps in SPEC_BY_KIND[self.kind].params:
            if ps.name == name:
                return float(ps.default)
        raise KeyError(f"{self.kind} has no parameter {name!r}")

    def normalized(self) -> "FilterBlock":
        """Copy with every parameter made explicit (defaults filled in)."""
        spec = SPEC_BY_KIND[self.kind]
        full = {ps.name: float(self.params.get(ps.name, ps.default)) for ps in spec.params}
        return FilterBlock(self.kind, full)

    def to_json_dict(self) -> dict:
        return {"kind": self.kind, "params": dict(self.normalized().params)}


def validate_block(block: FilterBlock, index: int | None = None, chain: str = "") -> list[str]:
    """Parameter-level validation errors for one block (empty list = valid)."""
    where = f"{chain}[{index}]" if index is not None else block.kind
    spec = SPEC_BY_KIND.get(block.kind)
    if spec is None:
        return [f"{where}: unknown filter kind {block.kind!r}"]
    errors = []
    names = {ps.name for ps in spec.params}
    for name in block.params:
        if name not in names:
            errors.append(f"{where}: {block.kind} has no parameter {name!r}")
    for ps in spec.params:
        if ps.name in block.params:
            value = block.params[ps.name]
            if not isinstance(value, (int, float)) or isinstance(value, bool):
                errors.append(f"{where}: parameter {ps.name!r} must be a number")
            elif not (ps.min <= float(value) <= ps.max):
                errors.append(
                    f"{where}: {block.kind}.{ps.name}={value} outside [{ps.min}, {ps.max}]")
    return errors


def output_channels(block: FilterBlock, in_channels: int) -> int:
    """Channel count this block produces for the given input."""
    rule = SPEC_BY_KIND[block.kind].output_channels
    if rule == "same":
        return in_channels
    if rule == "halftone":
        return 3 if int(round(block.param("cmyk"))) == 1 else 1
    return int(rule)


def catalog_document() -> dict:
    """Catalog as a plain JSON-ready document (kinds, params, channel rules)."""
    return {
        "schema_version": 1,
        "filters": [
            {
                "kind": s.kind,
                "group": s.group,
                "requires_channels": s.requires_channels,
                "output_channels": s.output_channels if isinstance(s.output_channels, (int, str)) else s.output_channels,
                "params": [
                    {"name": p.name, "min": p.min, "max": p.max,
                     "default": p.default, "step": p.step}
                    for p in s.params
                ],
            }
            for s in KIND_SPECS
        ],
    }
