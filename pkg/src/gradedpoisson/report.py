"""Tri-state verdicts and hypothesis reports shared by the checkers."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

__all__ = ["Verdict", "Check", "HypothesisReport", "InternalInconsistency", "combine"]


class Verdict(str, enum.Enum):
    HOLDS = "HOLDS"
    FAILS = "FAILS"
    UNDECIDED = "UNDECIDED"

    def __str__(self):
        return self.value


class InternalInconsistency(AssertionError):
    """Two independent routes to the same fact disagreed."""


def combine(verdicts) -> Verdict:
    verdicts = list(verdicts)
    if Verdict.FAILS in verdicts:
        return Verdict.FAILS
    if Verdict.UNDECIDED in verdicts:
        return Verdict.UNDECIDED
    return Verdict.HOLDS


@dataclass
class Check:
    """One hypothesis verdict.  ``evidence`` values are strings or string lists."""

    name: str
    verdict: Verdict
    evidence: dict = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return self.verdict is Verdict.HOLDS

    def to_dict(self) -> dict:
        return {"name": self.name, "verdict": self.verdict.value, "evidence": dict(self.evidence)}

    def render(self) -> str:
        lines = [f"[{self.verdict.value}] {self.name}"]
        for key in sorted(self.evidence):
            val = self.evidence[key]
            if isinstance(val, (list, tuple)):
                if not val:
                    lines.append(f"    {key}: (none)")
                else:
                    lines.append(f"    {key}:")
                    lines.extend(f"      {v}" for v in val)
            else:
                lines.append(f"    {key}: {val}")
        return "\n".join(lines)


@dataclass
class HypothesisReport:
    title: str
    checks: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    def add(self, check: Check) -> Check:
        self.checks.append(check)
        return check

    def extend(self, checks):
        for c in checks:
            self.add(c)

    @property
    def verdict(self) -> Verdict:
        return combine(c.verdict for c in self.checks)

    def __getitem__(self, name) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def names(self) -> list[str]:
        return [c.name for c in self.checks]

    def failures(self) -> list[Check]:
        return [c for c in self.checks if c.verdict is Verdict.FAILS]

    def to_dict(self) -> dict:
        return {
            "title": self.title,
            "verdict": self.verdict.value,
            "hypotheses": [c.to_dict() for c in self.checks],
            "notes": list(self.notes),
        }

    def render(self) -> str:
        out = [f"== {self.title} =="]
        out.extend(c.render() for c in self.checks)
        out.extend(f"note: {n}" for n in self.notes)
        out.append(f"verdict: {self.verdict.value}")
        return "\n".join(out)
