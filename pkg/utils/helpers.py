"""Utility helper functions."""

import os
import tempfile
from pathlib import Path

import config


def sanitize_filename(filename: str) -> str:
    """
    Sanitize a filename to be safe for the filesystem.

    Args:
        filename: Original filename

    Returns:
        Sanitized filename
    """
    invalid_chars = '<>:"/\\|?* ,='
    for char in invalid_chars:
        filename = filename.replace(char, '_')
    return filename


def default_output_path(stem: str, suffix: str) -> Path:
    """Output file under OUTPUT_DIR named after a run."""
    return config.OUTPUT_DIR / f"{sanitize_filename(stem)}.{suffix.lstrip('.')}"


def atomic_write(path: Path, data: bytes) -> Path:
    """
    Write bytes to path through a temp file in the same directory.

    The temp file is renamed over the target only after a complete write,
    so readers never see a partial file.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=path.parent)
    try:
        with os.fdopen(fd, "wb") as handle:
            handle.write(data)
            handle.flush()
            os.fsync(handle.fileno())
        os.replace(tmp_name, path)
    except BaseException:
        if os.path.exists(tmp_name):
            os.unlink(tmp_name)
        raise
    return path
