"""Verification reports shared by the series and theorem checks."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

VERIFIED = "verified"
COUNTEREXAMPLE = "counterexample"
INCONCLUSIVE = "inconclusive-window"

EXIT_CODES = {VERIFIED: 0, COUNTEREXAMPLE: 1, INCONCLUSIVE: 2}


def fmt_value(v) -> str:
    """Canonical text for trace values (integers, ±inf, bools, strings)."""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float) and math.isinf(v):
        return "+inf" if v > 0 else "-inf"
    if isinstance(v, float) and v.is_integer():
        return str(int(v))
    if isinstance(v, dict):
        return "{" + ", ".join(f"{fmt_value(k)}:{fmt_value(x)}" for k, x in sorted(v.items())) + "}"
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(fmt_value(x) for x in v) + "]"
    return str(v)


@dataclass
class TheoremReport:
    statement: str
    inputs: str
    status: str
    trace: dict = field(default_factory=dict)
    note: str = ""
    replay: str = ""

    @property
    def ok(self) -> bool:
        return self.status == VERIFIED

    def machine_lines(self) -> list:
        lines = [f"statement = {self.statement}", f"inputs = {self.inputs}", f"status = {self.status}"]
        for k, v in self.trace.items():
            lines.append(f"trace.{k} = {fmt_value(v)}")
        if self.note:
            lines.append(f"note = {self.note}")
        return lines

    def __str__(self):
        return "\n".join(self.machine_lines())


def combine_status(statuses) -> str:
    statuses = list(statuses)
    if COUNTEREXAMPLE in statuses:
        return COUNTEREXAMPLE
    if INCONCLUSIVE in statuses:
        return INCONCLUSIVE
    return VERIFIED
