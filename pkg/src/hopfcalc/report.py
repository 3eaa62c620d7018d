"""Structured pass/fail records for identity checks."""
from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class CheckEntry:
    identity: str
    law: str  # the identity in mathematical shorthand, or "plumbing"
    instance: str
    degrees: list
    status: str  # "pass" | "fail" | "skipped"
    counterexample: dict | None = None

    def to_json(self) -> dict:
        out = {
            "id": self.identity,
            "law": self.law,
            "instance": self.instance,
            "degrees": list(self.degrees),
            "status": self.status,
        }
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample
        return out


@dataclass
class VerificationReport:
    entries: list[CheckEntry] = field(default_factory=list)

    def add_pass(self, identity, law, instance="", degrees=()):
        self.entries.append(CheckEntry(identity, law, instance, list(degrees), "pass"))

    def add_fail(self, identity, law, instance="", degrees=(), counterexample=None):
        self.entries.append(
            CheckEntry(identity, law, instance, list(degrees), "fail", counterexample)
        )

    def add_skip(self, identity, law, instance="", degrees=()):
        self.entries.append(CheckEntry(identity, law, instance, list(degrees), "skipped"))

    def record(self, ok: bool, identity, law, instance="", degrees=(), counterexample=None):
        if ok:
            self.add_pass(identity, law, instance, degrees)
        else:
            self.add_fail(identity, law, instance, degrees, counterexample)
        return ok

    def extend(self, other: "VerificationReport"):
        self.entries.extend(other.entries)

    @property
    def passed(self) -> bool:
        return all(e.status != "fail" for e in self.entries)

    def failures(self) -> list[CheckEntry]:
        return [e for e in self.entries if e.status == "fail"]

    def summary(self) -> dict:
        counts = {"pass": 0, "fail": 0, "skipped": 0}
        for e in self.entries:
            counts[e.status] += 1
        return {
            "total": len(self.entries),
            "passed": counts["pass"],
            "failed": counts["fail"],
            "skipped": counts["skipped"],
        }

    def to_json(self) -> dict:
        return {"entries": [e.to_json() for e in self.entries], "summary": self.summary()}


def coords_counterexample(field, vec: dict, labels=None, **extra) -> dict:
    """Serialise a witness vector with readable coordinate labels."""
    coords = {}
    for j in sorted(vec):
        key = labels[j] if labels is not None else str(j)
        coords[key] = field.to_str(vec[j])
    out = {"coords": coords}
    out.update(extra)
    return out
