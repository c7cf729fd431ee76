"""Result tables with a provenance header, serialised as CSV or JSON."""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from typing import Sequence

DIGITS = 17


def fmt(value) -> str:
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, int):
        return str(value)
    return f"{float(value):.{DIGITS}g}"


@dataclass
class ResultTable:
    columns: list[str]
    units: list[str]
    rows: list[list[float]] = field(default_factory=list)
    meta: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        if len(self.units) != len(self.columns):
            raise ValueError("one unit per column")
        for row in self.rows:
            if len(row) != len(self.columns):
                raise ValueError(f"row {row!r} does not match columns {self.columns}")

    def append(self, row: Sequence[float]) -> None:
        if len(row) != len(self.columns):
            raise ValueError(f"row {row!r} does not match columns {self.columns}")
        self.rows.append(list(row))

    def column(self, name: str) -> list[float]:
        i = self.columns.index(name)
        return [r[i] for r in self.rows]

    def to_csv(self) -> str:
        out = io.StringIO()
        for key, value in self.meta.items():
            out.write(f"# {key}: {value}\n")
        out.write(f"# units: {','.join(self.units)}\n")
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(self.columns)
        for row in self.rows:
            writer.writerow([fmt(v) for v in row])
        return out.getvalue()

    def to_json(self) -> str:
        # json emits the shortest repr that round-trips, which is lossless
        return json.dumps(
            {"meta": self.meta, "columns": self.columns, "units": self.units, "rows": self.rows},
            indent=1,
        )

    @classmethod
    def from_csv(cls, text: str) -> ResultTable:
        meta, units, body = {}, [], []
        for line in text.splitlines():
            if line.startswith("# "):
                key, _, value = line[2:].partition(": ")
                if key == "units":
                    units = value.split(",") if value else []
                else:
                    meta[key] = value
            elif line.strip():
                body.append(line)
        reader = csv.reader(body)
        columns = next(reader)
        rows = [[float(v) for v in r] for r in reader]
        return cls(columns, units, rows, meta)

    @classmethod
    def from_json(cls, text: str) -> ResultTable:
        data = json.loads(text)
        return cls(data["columns"], data["units"], data["rows"], data["meta"])
