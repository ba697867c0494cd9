"""Check outcomes and deterministic JSON-shaped report assembly."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction


@dataclass
class CheckOutcome:
    """Result of a single verified identity or containment."""

    name: str
    status: str  # "pass" | "fail" | "unchecked"
    witness: str | None = None

    @property
    def passed(self) -> bool:
        return self.status != "fail"

    def as_dict(self) -> dict:
        out = {"name": self.name, "status": self.status}
        if self.witness is not None:
            out["witness"] = self.witness
        return out


@dataclass
class ReportSection:
    """Aggregates outcomes plus free-form certificate records."""

    outcomes: list[CheckOutcome] = field(default_factory=list)
    certificates: list[dict] = field(default_factory=list)

    def add(self, outcome: CheckOutcome) -> CheckOutcome:
        self.outcomes.append(outcome)
        return outcome

    def record(self, name: str, passed: bool, witness: str | None = None) -> CheckOutcome:
        return self.add(
            CheckOutcome(name, "pass" if passed else "fail", None if passed else witness)
        )

    def extend(self, other: "ReportSection") -> None:
        self.outcomes.extend(other.outcomes)
        self.certificates.extend(other.certificates)

    @property
    def all_passed(self) -> bool:
        return all(o.passed for o in self.outcomes)

    def failures(self) -> list[CheckOutcome]:
        return [o for o in self.outcomes if not o.passed]


def fraction_str(value) -> str:
    """Exact "p/q" rendering used throughout reports and the CLI."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return "%d/%d" % (value.numerator, value.denominator)


def parse_fraction(text: str) -> Fraction:
    return Fraction(text)


def dump_report(payload: dict) -> str:
    """Canonical serialization: sorted keys, fixed separators, newline end."""
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"
