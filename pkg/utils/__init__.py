"""Utility functions package."""

from .helpers import atomic_write, default_output_path, sanitize_filename
from .numerics import (
    CompensatedSum,
    adaptive_simpson,
    hermite_interpolate,
    integrate_pieces,
)

__all__ = [
    "atomic_write",
    "default_output_path",
    "sanitize_filename",
    "CompensatedSum",
    "adaptive_simpson",
    "hermite_interpolate",
    "integrate_pieces",
]
