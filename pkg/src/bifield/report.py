"""Structured results for the verification suite and their serialization.

A report is a flat list of checks, each carrying the measured error, the
tolerance it was judged against, and the anchor naming the relation it
exercises. The JSON layout is stable (sorted keys, sorted checks, fixed
indent) so reruns with the same seed produce byte-identical files. CSV
columns hold floats through ``repr`` so a round trip recovers them exactly.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .grid import Grid


@dataclass(frozen=True)
class CheckResult:
    """One verified relation: its id, provenance anchor, and measured error."""

    check_id: str
    description: str
    paper_anchor: str
    max_error: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(self.max_error <= self.tolerance)

    def to_dict(self) -> dict:
        return {
            "check_id": self.check_id,
            "description": self.description,
            "paper_anchor": self.paper_anchor,
            "max_error": float(self.max_error),
            "tolerance": float(self.tolerance),
            "pass": self.passed,
        }


@dataclass(frozen=True)
class VerificationReport:
    engine: str
    grid: Grid
    seed: int
    checks: tuple

    @property
    def total(self) -> int:
        return len(self.checks)

    @property
    def failed(self) -> int:
        return sum(1 for c in self.checks if not c.passed)

    @property
    def all_passed(self) -> bool:
        return self.failed == 0

    def to_dict(self) -> dict:
        ordered = sorted(self.checks, key=lambda c: c.check_id)
        return {
            "engine": self.engine,
            "grid": {
                "n_modes": int(self.grid.n_modes),
                "delta_k": float(self.grid.delta_k),
            },
            "seed": int(self.seed),
            "checks": [c.to_dict() for c in ordered],
            "summary": {"total": self.total, "failed": self.failed},
        }


def render_report_json(report: VerificationReport) -> str:
    return json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n"


def write_report_json(report: VerificationReport, path) -> None:
    Path(path).write_text(render_report_json(report), encoding="utf-8")


_CSV_COLUMNS = ("check_id", "description", "paper_anchor", "max_error", "tolerance", "pass")


def write_checks_csv(report: VerificationReport, path) -> None:
    """Write one row per check, sorted by check id, errors at full precision."""
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(_CSV_COLUMNS)
        for check in sorted(report.checks, key=lambda c: c.check_id):
            writer.writerow(
                [
                    check.check_id,
                    check.description,
                    check.paper_anchor,
                    repr(float(check.max_error)),
                    repr(float(check.tolerance)),
                    check.passed,
                ]
            )


def write_curve_csv(path, columns: Sequence[tuple]) -> None:
    """Write named columns of equal length; floats survive a round trip.

    ``columns`` is a sequence of (name, values) pairs. Complex values should
    be split into re/im columns by the caller.
    """
    names = [name for name, _ in columns]
    arrays = [list(values) for _, values in columns]
    lengths = {len(a) for a in arrays}
    if len(lengths) > 1:
        raise ValueError(f"columns have unequal lengths {sorted(lengths)}")
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(names)
        for row in zip(*arrays):
            writer.writerow([_cell(v) for v in row])


def _cell(value):
    # numpy float scalars subclass float but repr as np.float64(...), so
    # unwrap before taking the repr
    if hasattr(value, "item"):
        value = value.item()
    if isinstance(value, float):
        return repr(value)
    return value


def read_curve_csv(path) -> dict:
    """Read a curve CSV back into {name: list}, parsing numeric cells."""
    with open(path, newline="", encoding="utf-8") as handle:
        reader = csv.reader(handle)
        header = next(reader)
        data = {name: [] for name in header}
        for row in reader:
            for name, cell in zip(header, row):
                data[name].append(_parse_cell(cell))
    return data


def _parse_cell(cell: str):
    try:
        return int(cell)
    except ValueError:
        pass
    try:
        return float(cell)
    except ValueError:
        return cell
