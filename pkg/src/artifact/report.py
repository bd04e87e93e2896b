"""Check records shared by the verification suites and the command line."""

from __future__ import annotations

import json
import time
from contextlib import contextmanager
from dataclasses import dataclass, field

__all__ = ["CheckReport", "normalize_payload", "compare", "timed"]


def normalize_payload(x):
    """Turn tuples, sets and numpy scalars into plain JSON values."""
    return json.loads(json.dumps(x, default=_default))


def _default(o):
    if isinstance(o, (set, frozenset)):
        return sorted(normalize_payload(list(o)))
    if hasattr(o, "item"):
        return o.item()
    if hasattr(o, "tolist"):
        return o.tolist()
    raise TypeError(f"cannot serialise {type(o).__name__}")


@dataclass
class CheckReport:
    check_id: str
    params: dict
    status: str  # pass | fail | inapplicable
    expected: object = None
    computed: object = None
    wall_time: float = 0.0
    diff: dict | None = field(default=None)

    def as_dict(self, with_time: bool = True) -> dict:
        d = {
            "id": self.check_id,
            "params": normalize_payload(self.params),
            "status": self.status,
            "expected": normalize_payload(self.expected),
            "computed": normalize_payload(self.computed),
        }
        if self.diff is not None:
            d["diff"] = normalize_payload(self.diff)
        if with_time:
            d["wall_time"] = round(self.wall_time, 4)
        return d

    @property
    def ok(self) -> bool:
        return self.status in ("pass", "inapplicable")


def compare(check_id: str, params: dict, expected, computed, wall_time: float = 0.0) -> CheckReport:
    """A report whose status is the equality of the normalised payloads."""
    e, c = normalize_payload(expected), normalize_payload(computed)
    status = "pass" if e == c else "fail"
    diff = None if status == "pass" else {"expected": e, "computed": c}
    return CheckReport(check_id, params, status, e, c, wall_time, diff)


@contextmanager
def timed():
    box = {"t": 0.0}
    t0 = time.perf_counter()
    try:
        yield box
    finally:
        box["t"] = time.perf_counter() - t0
