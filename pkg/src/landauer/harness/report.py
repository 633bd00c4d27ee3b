"""Run reports: check collection, CSV tables, JSON summary.

Output contract: one CSV per table ('.' decimal separator, 17 significant
digits, header row) plus a report.json with check results and provenance.
Identical (config, seed, version) runs produce byte-identical files; the
per-table sha256 recorded in the report makes reruns easy to compare.
"""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass, field
from typing import Any

import numpy as np

LN2 = float(np.log(2.0))


def format_value(x: Any) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".17g")
    return str(x)


@dataclass(frozen=True)
class CheckResult:
    """One named pass/fail check with its measured value and tolerance."""

    name: str
    passed: bool
    measured: float
    tolerance: float
    comparator: str = "<="

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "passed": bool(self.passed),
            "measured": float(self.measured),
            "tolerance": float(self.tolerance),
            "comparator": self.comparator,
        }


@dataclass
class RunReport:
    """Aggregated outcome of one scenario run."""

    scenario: str
    version: str
    seed: int
    config_hash: str
    units: str = "nats"
    checks: list[CheckResult] = field(default_factory=list)
    tables: dict[str, dict] = field(default_factory=dict)
    figures: list[str] = field(default_factory=list)
    summary: dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def check_le(self, name: str, measured: float, tolerance: float) -> CheckResult:
        result = CheckResult(name, bool(measured <= tolerance), float(measured), float(tolerance))
        self._add(result)
        return result

    def check_ge(self, name: str, measured: float, tolerance: float) -> CheckResult:
        result = CheckResult(
            name, bool(measured >= tolerance), float(measured), float(tolerance), comparator=">="
        )
        self._add(result)
        return result

    def check_true(self, name: str, condition: bool, measured: float = 1.0) -> CheckResult:
        result = CheckResult(name, bool(condition), float(measured), 1.0, comparator="is")
        self._add(result)
        return result

    def _add(self, result: CheckResult) -> None:
        if any(c.name == result.name for c in self.checks):
            raise ValueError(f"duplicate check name {result.name!r}")
        self.checks.append(result)

    def to_json(self) -> dict:
        return {
            "scenario": self.scenario,
            "version": self.version,
            "seed": self.seed,
            "config_hash": self.config_hash,
            "units": self.units,
            "passed": self.passed,
            "checks": [c.to_json() for c in self.checks],
            "tables": self.tables,
            "figures": sorted(self.figures),
            "summary": self.summary,
        }


class ReportWriter:
    """Writes tables and the final report.json under one output directory.

    bits=True divides the named entropy columns by log 2 before writing and
    stamps the report units accordingly.
    """

    def __init__(self, outdir: str, report: RunReport, bits: bool = False):
        self.outdir = outdir
        self.report = report
        self.bits = bits
        if bits:
            report.units = "bits"
        os.makedirs(outdir, exist_ok=True)

    def write_table(
        self,
        name: str,
        header: list[str],
        rows: list[list],
        entropy_cols: set[str] = frozenset(),
    ) -> str:
        missing = entropy_cols - set(header)
        if missing:
            raise ValueError(f"entropy columns {missing} not in header {header}")
        scale_idx = {header.index(c) for c in entropy_cols} if self.bits else set()
        lines = [",".join(header)]
        for row in rows:
            if len(row) != len(header):
                raise ValueError(f"row width {len(row)} != header width {len(header)}")
            cells = []
            for idx, value in enumerate(row):
                if idx in scale_idx and isinstance(value, (float, np.floating)):
                    value = float(value) / LN2
                cells.append(format_value(value))
            lines.append(",".join(cells))
        blob = ("\n".join(lines) + "\n").encode()
        filename = f"{name}.csv"
        with open(os.path.join(self.outdir, filename), "wb") as fh:
            fh.write(blob)
        self.report.tables[name] = {
            "file": filename,
            "rows": len(rows),
            "sha256": hashlib.sha256(blob).hexdigest(),
        }
        return filename

    def finish(self) -> str:
        path = os.path.join(self.outdir, "report.json")
        blob = json.dumps(self.report.to_json(), indent=2, sort_keys=True) + "\n"
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(blob)
        return path
