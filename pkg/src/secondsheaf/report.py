"""Structured check records shared by the verification routines and the CLI."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

PASS = "pass"
FAIL = "fail"
SKIPPED = "skipped"


@dataclass
class CheckRecord:
    check: str
    status: str
    hypotheses: dict = field(default_factory=dict)
    reason: str | None = None
    witness: Any = None
    context: dict | None = None

    @property
    def passed(self):
        return self.status == PASS

    @property
    def failed(self):
        return self.status == FAIL

    @property
    def skipped(self):
        return self.status == SKIPPED

    def to_dict(self):
        out = {"check": self.check, "status": self.status, "hypotheses": dict(self.hypotheses)}
        if self.reason is not None:
            out["reason"] = self.reason
        if self.witness is not None:
            out["witness"] = self.witness
        if self.context is not None:
            out["context"] = dict(self.context)
        return out


def gated(check, hypotheses, run):
    """Run ``run()`` only when every hypothesis holds.

    ``run`` returns ``(ok, witness)``.  A failing hypothesis yields a skipped
    record whose reason code names it; an exception from ``run`` propagates.
    """
    failing = [name for name, value in hypotheses.items() if not value]
    if failing:
        return CheckRecord(check, SKIPPED, hypotheses,
                           reason="hypothesis-failed:" + ",".join(failing))
    ok, witness = run()
    return CheckRecord(check, PASS if ok else FAIL, hypotheses, witness=witness)


def summarize(records):
    counts = {PASS: 0, FAIL: 0, SKIPPED: 0}
    for r in records:
        counts[r.status] += 1
    return counts
