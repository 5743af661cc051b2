"""Verification report: a flat list of named numeric checks."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Any

PASS, FAIL, WARN = "PASS", "FAIL", "WARN"


@dataclass
class Check:
    name: str
    value: Any
    reference: Any
    tolerance: float | None
    status: str
    note: str = ""


def _fmt(x) -> str:
    if isinstance(x, bool) or x is None:
        return str(x)
    if isinstance(x, complex):
        if x.imag == 0:
            return f"{x.real:.10g}"
        return f"{x.real:.10g}{x.imag:+.10g}j"
    if isinstance(x, float):
        return f"{x:.10g}"
    return str(x)


@dataclass
class VerificationReport:
    """Collected checks with PASS / FAIL / WARN status.

    WARN marks a documented disagreement with a stated reference value that
    does not indicate an internal inconsistency.
    """

    title: str = ""
    checks: list[Check] = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    def add(self, name, value, reference, tolerance=None, *, ok: bool | None = None,
            warn_only: bool = False, note: str = "") -> Check:
        """Record a check. With ``ok=None`` it compares ``|value - reference| <= tolerance``."""
        if ok is None:
            if tolerance is None:
                ok = value == reference
            else:
                diff = abs(complex(value) - complex(reference))
                ok = bool(math.isfinite(diff) and diff <= tolerance)
        status = PASS if ok else (WARN if warn_only else FAIL)
        chk = Check(name, value, reference, tolerance, status, note)
        self.checks.append(chk)
        return chk

    def extend(self, other: "VerificationReport", prefix: str = ""):
        for c in other.checks:
            self.checks.append(Check(prefix + c.name, c.value, c.reference, c.tolerance, c.status, c.note))

    @property
    def passed(self) -> bool:
        return all(c.status != FAIL for c in self.checks)

    def count(self, status: str) -> int:
        return sum(c.status == status for c in self.checks)

    def table(self) -> str:
        rows = [("status", "check", "value", "reference", "tol", "note")]
        for c in self.checks:
            tol = "" if c.tolerance is None else f"{c.tolerance:.1e}"
            rows.append((c.status, c.name, _fmt(c.value), _fmt(c.reference), tol, c.note))
        widths = [max(len(r[i]) for r in rows) for i in range(5)]
        lines = []
        for r in rows:
            lines.append("  ".join(r[i].ljust(widths[i]) for i in range(5)) + ("  " + r[5] if r[5] else ""))
        summary = f"{self.count(PASS)} passed, {self.count(FAIL)} failed, {self.count(WARN)} warnings"
        head = [self.title] if self.title else []
        return "\n".join(head + lines + [summary])

    def as_dicts(self) -> list[dict]:
        return [asdict(c) for c in self.checks]
