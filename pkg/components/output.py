"""Result emission: CSV text and SVG plots."""

import io
import logging
import sys
from pathlib import Path
from typing import Optional

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

import config  # noqa: E402
from models.schemas import ResultTable  # noqa: E402
from utils.helpers import atomic_write  # noqa: E402

logger = logging.getLogger(__name__)


def table_to_csv(table: ResultTable) -> str:
    """
    Render a table as CSV text.

    Comment lines prefixed with '#' come first, then a header row and the
    data with 17 significant digits, ',' separators and '\\n' line ends.
    """
    buffer = io.StringIO()
    for line in table.comments:
        buffer.write(f"# {line}\n")
    table.data.to_csv(buffer, index=False, float_format=config.FLOAT_FORMAT, lineterminator="\n")
    return buffer.getvalue()


def write_csv(table: ResultTable, path: Optional[Path] = None) -> Optional[Path]:
    """
    Write a table as CSV to path atomically, or to stdout when path is None.

    Returns:
        The written path, or None for stdout
    """
    text = table_to_csv(table)
    if path is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return None
    written = atomic_write(Path(path), text.encode("utf-8"))
    logger.info("Wrote %d rows to %s", len(table.data), written)
    return written


def emit_svg(table: ResultTable, path: Path) -> Path:
    """
    Plot a table to a standalone SVG file.

    One curve per y column, or per (group, y column) pair for long-format
    tables. Axis labels are the column names; infinite samples are left out.

    Raises:
        ValueError: if the table is empty
    """
    if table.is_empty:
        raise ValueError("cannot plot an empty table")

    fig, ax = plt.subplots(figsize=(7, 4.5))
    try:
        groups = table.data.groupby(table.group, sort=False) if table.group else [(None, table.data)]
        for label, frame in groups:
            x = frame[table.x].to_numpy(dtype=float)
            for column in table.y:
                y = frame[column].to_numpy(dtype=float)
                y = np.where(np.isfinite(y), y, np.nan)
                name = column if label is None else f"{column} ({label})"
                ax.plot(x, y, label=name)

        ax.set_xlabel(table.x)
        ax.set_ylabel(", ".join(table.y))
        if table.title:
            ax.set_title(table.title)
        ax.grid(True, alpha=0.3)
        ax.legend(fontsize="small")

        buffer = io.BytesIO()
        fig.savefig(buffer, format="svg", bbox_inches="tight", metadata={"Date": None})
    finally:
        plt.close(fig)

    written = atomic_write(Path(path), buffer.getvalue())
    logger.info("Wrote plot to %s", written)
    return written
