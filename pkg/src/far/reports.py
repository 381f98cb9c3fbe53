"""Structured FLOP and timing reports with CSV serialization."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field


@dataclass
class FlopReport:
    """Multiply-add count for one operator at one shape, broken down by term.

    Every term carries the model-constant annotation it was computed with so
    reports are auditable without reading the source.
    """

    operator: str
    shape: tuple[int, ...]
    terms: dict[str, float] = field(default_factory=dict)
    notes: dict[str, str] = field(default_factory=dict)

    def add_term(self, name: str, flops: float, note: str) -> None:
        if flops < 0:
            raise ValueError(f"term {name!r} has negative flops {flops}")
        self.terms[name] = float(flops)
        self.notes[name] = note

    @property
    def total(self) -> float:
        return float(sum(self.terms.values()))

    def term(self, name: str) -> float:
        return self.terms[name]

    def subtotal(self, names) -> float:
        return float(sum(self.terms[n] for n in names))

    def rows(self) -> list[dict]:
        shape_str = "x".join(str(d) for d in self.shape)
        out = [
            {"operator": self.operator, "shape": shape_str, "term": name, "flops": repr(flops)}
            for name, flops in self.terms.items()
        ]
        out.append({"operator": self.operator, "shape": shape_str, "term": "total", "flops": repr(self.total)})
        return out

    def merged(self, other: "FlopReport", operator: str) -> "FlopReport":
        """Combine two stage reports into a pipeline report; totals add."""
        out = FlopReport(operator=operator, shape=self.shape)
        for src in (self, other):
            for name, flops in src.terms.items():
                out.add_term(f"{src.operator}.{name}", flops, src.notes[name])
        return out


@dataclass
class TimingRow:
    """Median wall time of one operator at one shape."""

    operator: str
    shape: tuple[int, ...]
    repetitions: int
    median_seconds: float
    threads: int

    def __post_init__(self):
        if self.repetitions < 5:
            raise ValueError("repetitions must be >= 5 for a stable median")

    def row(self) -> dict:
        return {
            "operator": self.operator,
            "shape": "x".join(str(d) for d in self.shape),
            "thw": str(self.shape[1] * self.shape[2] * self.shape[3]) if len(self.shape) == 4 else "",
            "repetitions": str(self.repetitions),
            "median_seconds": repr(self.median_seconds),
            "threads": str(self.threads),
        }


FLOPS_CSV_FIELDS = ["operator", "shape", "term", "flops"]
TIMING_CSV_FIELDS = ["operator", "shape", "thw", "repetitions", "median_seconds", "threads"]


def write_flops_csv(path, reports) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=FLOPS_CSV_FIELDS)
        writer.writeheader()
        for report in reports:
            writer.writerows(report.rows())


def write_timing_csv(path, rows) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=TIMING_CSV_FIELDS)
        writer.writeheader()
        for row in rows:
            writer.writerow(row.row())
