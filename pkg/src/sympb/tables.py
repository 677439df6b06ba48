"""Tabular experiment reports with deterministic CSV / JSON serialization.

Floats are written with 17 significant digits so output round-trips exactly;
identical inputs produce byte-identical files (metadata is sorted, no
timestamps).
"""

from __future__ import annotations

import io
import json
import math
from dataclasses import dataclass, field

FLOAT_FMT = "%.17g"


def format_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (int,)):
        return str(v)
    if isinstance(v, float):
        if math.isnan(v):
            return "nan"
        return FLOAT_FMT % v
    return str(v)


@dataclass
class ExperimentReport:
    """Columns, rows and resolved-configuration metadata for one run."""

    columns: tuple
    rows: list
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.columns = tuple(self.columns)
        for row in self.rows:
            if len(row) != len(self.columns):
                raise ValueError(
                    f"row of length {len(row)} does not match {len(self.columns)} columns"
                )

    def to_csv(self, target) -> None:
        """Write CSV with a single ``#``-prefixed JSON metadata line on top."""
        self._write(target, self._csv_text())

    def to_json(self, target) -> None:
        self._write(target, self._json_text())

    def _csv_text(self) -> str:
        buf = io.StringIO()
        buf.write("# " + json.dumps(self.meta, sort_keys=True) + "\n")
        buf.write(",".join(self.columns) + "\n")
        for row in self.rows:
            buf.write(",".join(format_value(v) for v in row) + "\n")
        return buf.getvalue()

    def _json_text(self) -> str:
        def norm(v):
            if isinstance(v, float) and math.isnan(v):
                return None
            return v

        doc = {
            "meta": self.meta,
            "columns": list(self.columns),
            "rows": [[norm(v) for v in row] for row in self.rows],
        }
        return json.dumps(doc, sort_keys=True) + "\n"

    @staticmethod
    def _write(target, text: str) -> None:
        if hasattr(target, "write"):
            target.write(text)
        else:
            with open(target, "w") as fh:
                fh.write(text)
