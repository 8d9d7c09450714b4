"""Verification records shared by the test-suite runners and the CLI."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field


def _json_number(v):
    # strict JSON has no infinity or NaN
    if isinstance(v, float) and not math.isfinite(v):
        return str(v)
    return v


@dataclass
class Record:
    suite: str
    check: str
    config: dict
    residual: float
    tolerance: float
    step: float | None = None
    extra: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return math.isfinite(self.residual) and self.residual <= self.tolerance

    def to_dict(self) -> dict:
        out = {
            "suite": self.suite,
            "check": self.check,
            "config": self.config,
            "step": self.step,
            "residual": _json_number(self.residual),
            "tolerance": self.tolerance,
            "pass": self.passed,
        }
        if self.extra:
            out["extra"] = {k: _json_number(v) for k, v in self.extra.items()}
        return out


def dump_json(records: list[Record]) -> str:
    return json.dumps([r.to_dict() for r in records], indent=2, sort_keys=True, allow_nan=False)


def csv_rows(records: list[Record]) -> list[list]:
    rows = [["suite", "check", "config", "step", "residual", "tolerance", "pass"]]
    for r in records:
        rows.append(
            [r.suite, r.check, json.dumps(r.config, sort_keys=True), r.step, f"{r.residual:.3e}", r.tolerance, r.passed]
        )
    return rows
