"""Check / report containers shared by every verification command."""
from __future__ import annotations

import json
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Any

ENGINE_VERSION = "0.1.0"
STATUSES = ("pass", "fail", "warn")


@dataclass
class Check:
    name: str
    status: str
    detail: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"bad status {self.status!r}")

    @property
    def ok(self) -> bool:
        return self.status == "pass"

    def to_dict(self) -> dict:
        return {"name": self.name, "status": self.status, "detail": _jsonable(self.detail)}


@dataclass
class Report:
    command: str
    checks: list = field(default_factory=list)
    wall_time: float = 0.0
    version: str = ENGINE_VERSION
    data: dict = field(default_factory=dict)

    def add(self, name: str, ok: bool, **detail) -> Check:
        c = Check(name, "pass" if ok else "fail", detail)
        self.checks.append(c)
        return c

    def warn(self, name: str, **detail) -> Check:
        c = Check(name, "warn", detail)
        self.checks.append(c)
        return c

    def extend(self, other: "Report", prefix: str = "") -> None:
        for c in other.checks:
            self.checks.append(Check(prefix + c.name, c.status, c.detail))

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    @property
    def failures(self) -> list:
        return [c for c in self.checks if c.status == "fail"]

    def counts(self) -> dict:
        out = {s: 0 for s in STATUSES}
        for c in self.checks:
            out[c.status] += 1
        return out

    def to_dict(self, include_time: bool = True) -> dict:
        doc = {
            "command": self.command,
            "version": self.version,
            "ok": self.ok,
            "counts": self.counts(),
            "checks": [c.to_dict() for c in self.checks],
        }
        if self.data:
            doc["data"] = _jsonable(self.data)
        if include_time:
            doc["wall_time"] = round(self.wall_time, 6)
        return doc

    def to_json(self, include_time: bool = True) -> str:
        return json.dumps(self.to_dict(include_time), indent=2, sort_keys=True)

    def to_text(self) -> str:
        lines = [f"{self.command}: {'PASS' if self.ok else 'FAIL'} {self.counts()}"]
        for c in self.checks:
            if c.status != "pass":
                lines.append(f"  [{c.status}] {c.name}: {json.dumps(_jsonable(c.detail))}")
        return "\n".join(lines)


@contextmanager
def timed(report: Report):
    start = time.perf_counter()
    try:
        yield report
    finally:
        report.wall_time += time.perf_counter() - start


def _jsonable(obj: Any):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (bool, int, str)) or obj is None:
        return obj
    if isinstance(obj, float):
        return obj if obj == obj and abs(obj) != float("inf") else str(obj)
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    return str(obj)
