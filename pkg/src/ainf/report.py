"""Check results and schema-versioned verification reports."""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from typing import Any, Callable

SCHEMA_VERSION = "1.0"

PASS, FAIL, DIAGNOSTIC = "pass", "fail", "diagnostic"


@dataclass
class CheckResult:
    id: str
    status: str
    witness: Any = None
    details: dict[str, Any] = field(default_factory=dict)
    wall_time: float | None = None

    @property
    def ok(self) -> bool:
        return self.status != FAIL

    def __bool__(self) -> bool:
        return self.ok

    def to_json(self, with_times: bool = False) -> dict[str, Any]:
        out: dict[str, Any] = {"id": self.id, "status": self.status}
        if self.witness is not None:
            out["witness"] = jsonable(self.witness)
        if self.details:
            out["details"] = jsonable(self.details)
        if with_times and self.wall_time is not None:
            out["wall_time"] = round(self.wall_time, 6)
        return out


def check(id: str, ok: bool, witness: Any = None, **details: Any) -> CheckResult:
    return CheckResult(id, PASS if ok else FAIL, None if ok else witness, details)


def diagnostic(id: str, **details: Any) -> CheckResult:
    return CheckResult(id, DIAGNOSTIC, None, details)


def timed(id: str, fn: Callable[[], CheckResult]) -> CheckResult:
    t0 = time.perf_counter()
    res = fn()
    res.wall_time = time.perf_counter() - t0
    if not res.id:
        res.id = id
    return res


@dataclass
class VerificationReport:
    suite: str
    checks: list[CheckResult] = field(default_factory=list)
    meta: dict[str, Any] = field(default_factory=dict)

    def add(self, res: CheckResult) -> CheckResult:
        self.checks.append(res)
        return res

    def extend(self, results) -> None:
        self.checks.extend(results)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def to_json(self, with_times: bool = False) -> dict[str, Any]:
        return {
            "schema_version": SCHEMA_VERSION,
            "suite": self.suite,
            "meta": jsonable(self.meta),
            "status": PASS if self.ok else FAIL,
            "checks": [c.to_json(with_times) for c in self.checks],
        }

    def dumps(self, with_times: bool = False) -> str:
        return json.dumps(self.to_json(with_times), indent=2, sort_keys=True) + "\n"


def jsonable(obj: Any) -> Any:
    """Convert tuples, sets, frozensets and numpy scalars into plain JSON values."""
    if isinstance(obj, dict):
        return {str(k) if not isinstance(k, str) else k: jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, (set, frozenset)):
        return sorted((jsonable(v) for v in obj), key=repr)
    if hasattr(obj, "item") and callable(obj.item):
        return obj.item()
    if isinstance(obj, float):
        return float(repr(obj)) if obj == obj else None
    if isinstance(obj, (str, int, bool)) or obj is None:
        return obj
    if hasattr(obj, "to_json"):
        return jsonable(obj.to_json())
    return repr(obj)
