"""Rectangular result tables with reproducible CSV serialization.

CSV layout: '# key=value' metadata comment lines (sorted by key), a
header row, then data rows.  Floats are written with 9 significant
digits and LF line endings so identical runs serialize byte-identically.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ParseError

VERSION = "gsl-0.1.0"


def format_value(v) -> str:
    if isinstance(v, str):
        return v
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    return format(float(v), ".9g")


@dataclass
class ResultTable:
    columns: list[str]
    rows: list[list]
    metadata: dict[str, str] = field(default_factory=dict)
    wall_time_s: float | None = None  # informational; never serialized

    def __post_init__(self):
        for row in self.rows:
            if len(row) != len(self.columns):
                raise ValueError("ragged row in result table")

    def column(self, name: str) -> list:
        idx = self.columns.index(name)
        return [row[idx] for row in self.rows]

    def to_csv_text(self) -> str:
        lines = [f"# {k}={self.metadata[k]}" for k in sorted(self.metadata)]
        lines.append(",".join(self.columns))
        for row in self.rows:
            lines.append(",".join(format_value(v) for v in row))
        return "\n".join(lines) + "\n"

    def write_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(self.to_csv_text())


def read_csv(path) -> ResultTable:
    """Parse a table written by write_csv (values come back as floats or strings)."""
    metadata: dict[str, str] = {}
    columns: list[str] | None = None
    rows: list[list] = []
    with open(path, "r", encoding="utf-8") as fh:
        for raw in fh:
            line = raw.rstrip("\n").rstrip("\r")
            if not line:
                continue
            if line.startswith("#"):
                body = line[1:].strip()
                if "=" not in body:
                    raise ParseError(f"malformed metadata line: {line!r}")
                key, val = body.split("=", 1)
                metadata[key.strip()] = val
                continue
            cells = line.split(",")
            if columns is None:
                columns = cells
                continue
            rows.append([_coerce(c) for c in cells])
    if columns is None:
        raise ParseError(f"{path}: no header row")
    return ResultTable(columns=columns, rows=rows, metadata=metadata)


def _coerce(cell: str):
    try:
        return float(cell)
    except ValueError:
        return cell
