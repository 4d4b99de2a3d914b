"""Per-identity outcome records and their JSON form.

Reports carry every knob that influenced the run (caps, parameters, seeds,
tolerances) so any result can be reproduced from its own output.  Runtime is
measured but excluded from the serialized form unless asked for, keeping
identical invocations bit-identical.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field

PASS = "pass"
FAIL = "fail"
RESOLVED = "resolved-with-note"


@dataclass
class VerificationReport:
    identity: str
    params: dict = field(default_factory=dict)
    caps: dict = field(default_factory=dict)
    status: str = FAIL
    residual: object = None
    runtime_ms: float = 0.0
    notes: list = field(default_factory=list)

    def passed(self) -> bool:
        return self.status in (PASS, RESOLVED)

    def to_dict(self, include_runtime: bool = False) -> dict:
        out = {
            "identity": self.identity,
            "params": self.params,
            "caps": self.caps,
            "status": self.status,
            "residual": self.residual,
            "notes": list(self.notes),
        }
        if include_runtime:
            out["runtime_ms"] = round(self.runtime_ms, 3)
        return out

    def to_json(self, include_runtime: bool = False) -> str:
        return json.dumps(self.to_dict(include_runtime), sort_keys=True, indent=2)


class timer:
    """Context manager feeding runtime_ms of a report."""

    def __init__(self, report: VerificationReport):
        self.report = report

    def __enter__(self):
        self._t0 = time.perf_counter()
        return self.report

    def __exit__(self, *exc):
        self.report.runtime_ms = (time.perf_counter() - self._t0) * 1000.0
        return False


def residual_records(series) -> list:
    from .series import series_records
    return series_records(series)
