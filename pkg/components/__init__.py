"""Command-line and output components package."""

from .cli import Invocation, build_invocation, build_parser, load_config_file
from .output import emit_svg, table_to_csv, write_csv

__all__ = [
    "Invocation",
    "build_invocation",
    "build_parser",
    "load_config_file",
    "emit_svg",
    "table_to_csv",
    "write_csv",
]
