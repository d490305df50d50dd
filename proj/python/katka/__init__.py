"""Lossy augmented FM-indexes over genome collections."""

from ._core import (
    FormatError,
    Index,
    IoError,
    ValidationError,
    build_index,
    classify_range,
    evaluate,
    read_collection,
    synthesize,
    variant_text,
)

__all__ = [
    "FormatError",
    "Index",
    "IoError",
    "ValidationError",
    "build_index",
    "classify_range",
    "evaluate",
    "read_collection",
    "synthesize",
    "variant_text",
]
