"""Machine-readable certificates of verified inequalities."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Any

__all__ = ["Certificate", "Check"]


@dataclass
class Check:
    """A single named inequality with its measured value and tolerance."""

    name: str
    value: float
    bound: float | None = None
    tolerance: float = 0.0
    passed: bool = True
    note: str = ""

    def to_dict(self) -> dict[str, Any]:
        d: dict[str, Any] = {
            "name": self.name,
            "value": self.value,
            "tolerance": self.tolerance,
            "passed": bool(self.passed),
        }
        if self.bound is not None:
            d["bound"] = self.bound
        if self.note:
            d["note"] = self.note
        return d


@dataclass
class Certificate:
    """Record of a verified computation: values, checks, method, verdict.

    The verdict is PASS iff every recorded check holds with its stated
    tolerance.  Serialization is deterministic apart from the timestamp
    field, which is isolated so byte-level comparisons can drop it.
    """

    name: str
    method: str = ""
    values: dict[str, Any] = field(default_factory=dict)
    checks: list[Check] = field(default_factory=list)
    metadata: dict[str, Any] = field(default_factory=dict)

    def add_check(self, check: Check) -> None:
        self.checks.append(check)

    @property
    def verdict(self) -> str:
        return "PASS" if all(c.passed for c in self.checks) else "FAIL"

    def to_dict(self, timestamp: bool = True) -> dict[str, Any]:
        d: dict[str, Any] = {
            "name": self.name,
            "method": self.method,
            "values": self.values,
            "checks": [c.to_dict() for c in self.checks],
            "metadata": self.metadata,
            "verdict": self.verdict,
        }
        if timestamp:
            d["timestamp"] = datetime.now(timezone.utc).isoformat()
        return d

    def to_json(self, timestamp: bool = True) -> str:
        return json.dumps(self.to_dict(timestamp=timestamp), indent=2, sort_keys=True)
