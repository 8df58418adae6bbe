"""Uniform check reports with a stable JSON shape.

Every verification suite in the engine produces :class:`Report`
objects: named check, instance label, truncation bound, number of
vectors exercised, and a failure list carrying printable witnesses.
Exit codes and the CLI's JSON output are derived from these.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import List, Optional

SCHEMA_VERSION = 1


@dataclass
class Failure:
    input: str
    lhs: str
    rhs: str

    def to_dict(self):
        return {"input": self.input, "lhs": self.lhs, "rhs": self.rhs}


@dataclass
class Report:
    check: str
    instance: str
    bound: Optional[int] = None
    vectors_checked: int = 0
    failures: List[Failure] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"

    def record(self, input_repr: str, lhs, rhs) -> bool:
        """Count a vector; if lhs != rhs store a failure.  True when equal."""
        self.vectors_checked += 1
        if lhs != rhs:
            self.failures.append(Failure(input_repr, str(lhs), str(rhs)))
            return False
        return True

    def count(self, n: int = 1):
        self.vectors_checked += n

    def fail(self, input_repr: str, lhs, rhs):
        self.failures.append(Failure(input_repr, str(lhs), str(rhs)))

    def merge(self, other: "Report"):
        self.vectors_checked += other.vectors_checked
        self.failures.extend(other.failures)
        self.notes.extend(f"{other.check}: {n}" for n in other.notes)

    def to_dict(self):
        return {
            "version": SCHEMA_VERSION,
            "check": self.check,
            "instance": self.instance,
            "bound": self.bound,
            "vectors_checked": self.vectors_checked,
            "failures": [f.to_dict() for f in self.failures],
            "notes": list(self.notes),
            "verdict": self.verdict,
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, **kw)

    def summary_line(self) -> str:
        tail = "" if self.passed else f" ({len(self.failures)} failures)"
        bound = f" bound={self.bound}" if self.bound is not None else ""
        return (
            f"[{'PASS' if self.passed else 'FAIL'}] {self.check} on {self.instance}"
            f"{bound} vectors={self.vectors_checked}{tail}"
        )
