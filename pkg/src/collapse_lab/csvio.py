"""Deterministic CSV serialization.

Floats are written with ``repr``, the shortest string that round-trips
(never more than 17 significant digits); lines end in ``\\n``.
"""

from __future__ import annotations

import csv
import io
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .errors import IoFailure


@dataclass
class CsvTable:
    header: list[str]
    rows: list[list] = field(default_factory=list)

    def __post_init__(self):
        for i, row in enumerate(self.rows):
            if len(row) != len(self.header):
                raise ValueError(
                    f"row {i} has {len(row)} fields, header has {len(self.header)}"
                )

    def append(self, row):
        if len(row) != len(self.header):
            raise ValueError(f"row has {len(row)} fields, header has {len(self.header)}")
        self.rows.append(list(row))

    def column(self, name):
        j = self.header.index(name)
        return [row[j] for row in self.rows]


def format_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float) or hasattr(value, "dtype"):
        v = float(value)
        if not math.isfinite(v):
            raise ValueError(f"non-finite value {v!r} cannot be serialized")
        return repr(v)
    return str(value)


def to_csv_string(table: CsvTable) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(table.header)
    # format everything first so a NaN aborts before any output exists
    writer.writerows([[format_value(v) for v in row] for row in table.rows])
    return buf.getvalue()


def write_csv(table: CsvTable, sink=None) -> None:
    """Write ``table`` to a path, an open text stream, or stdout (``None``/``"-"``)."""
    text = to_csv_string(table)
    try:
        if sink is None or sink == "-":
            sys.stdout.write(text)
        elif isinstance(sink, (str, Path)):
            with open(sink, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        else:
            sink.write(text)
    except OSError as exc:
        raise IoFailure(f"could not write CSV: {exc}") from exc


def parse_value(text: str):
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        return text


def read_csv(source) -> CsvTable:
    """Inverse of :func:`write_csv`; numbers come back as int or float.

    ``source`` is a path, an open text stream, or CSV text (any ``str``
    containing a newline).
    """
    if isinstance(source, Path) or (isinstance(source, str) and "\n" not in source):
        text = Path(source).read_text(encoding="utf-8")
    elif isinstance(source, str):
        text = source
    else:
        text = source.read()
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    return CsvTable(header, [[parse_value(v) for v in row] for row in reader])
