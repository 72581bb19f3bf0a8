"""Reproducible CSV output.

Every file starts with ``#`` comment lines recording the package version,
the command and its full configuration, so two runs with the same header
produce the same bytes. Floats are written with 9 significant digits.
"""

from __future__ import annotations

import csv
import json
import math
from typing import Iterable, Sequence, TextIO

from . import __version__


def format_value(x) -> str:
    if isinstance(x, bool):
        return str(x).lower()
    if isinstance(x, int):
        return str(x)
    if isinstance(x, float) or hasattr(x, "dtype"):
        x = float(x)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return f"{x:.9g}"
    return str(x)


def provenance_lines(command: str, config: dict) -> list[str]:
    return [
        f"# gaussmet {__version__}",
        f"# command: {command}",
        f"# config: {json.dumps(config, sort_keys=True, default=str)}",
        f"# seed: {config.get('seed', 'none')}",
    ]


def write_csv(fh: TextIO, columns: Sequence[str], rows: Iterable[Sequence], command: str | None = None, config: dict | None = None):
    """Write an optional provenance header, the column names, then ``rows``."""
    if command is not None:
        for line in provenance_lines(command, config or {}):
            fh.write(line + "\n")
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_value(x) for x in row])


def read_csv(fh: TextIO) -> tuple[list[str], list[list[str]]]:
    """Inverse of :func:`write_csv`: returns the header and the rows as strings."""
    lines = [line for line in fh if not line.startswith("#")]
    reader = csv.reader(lines)
    header = next(reader, [])
    return header, [row for row in reader]
