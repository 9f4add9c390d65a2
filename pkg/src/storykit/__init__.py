"""storykit: stylized storyboard pages from image sets, plus a style design studio."""

__version__ = "0.1.0"

from .imaging import ChromaPlanes, ImageBuffer, InvalidArgumentError
from .filters import FilterBlock
from .pipeline import StylePipeline, execute, parse, serialize, validate

__all__ = [
    "__version__",
    "ChromaPlanes",
    "ImageBuffer",
    "InvalidArgumentError",
    "FilterBlock",
    "StylePipeline",
    "execute",
    "parse",
    "serialize",
    "validate",
]
