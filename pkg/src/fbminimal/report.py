"""Verification records and reports."""
from __future__ import annotations

from dataclasses import dataclass, field

from .io import json_text, table_text


@dataclass(frozen=True)
class Check:
    name: str
    measured: float
    tolerance: float
    provenance: str
    # "le": pass when measured <= tolerance; "gt": negative controls, pass when measured > tolerance
    compare: str = "le"

    @property
    def passed(self) -> bool:
        if self.compare == "gt":
            return self.measured > self.tolerance
        return self.measured <= self.tolerance

    def as_dict(self) -> dict:
        return {"name": self.name, "measured": self.measured, "tolerance": self.tolerance,
                "compare": self.compare, "pass": self.passed, "provenance": self.provenance}


@dataclass
class VerificationReport:
    command: str
    records: list[Check] = field(default_factory=list)
    constants: dict[str, float] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.records)

    def extend(self, other: "VerificationReport") -> None:
        self.records.extend(other.records)
        self.constants.update(other.constants)

    def failures(self) -> list[Check]:
        return [r for r in self.records if not r.passed]

    def as_dict(self) -> dict:
        return {
            "command": self.command,
            "constants": dict(self.constants),
            "records": [r.as_dict() for r in self.records],
            "summary": {"pass": self.passed, "n_checks": len(self.records),
                        "n_failed": len(self.failures())},
        }

    def to_json(self) -> str:
        return json_text(self.as_dict())

    def to_csv(self) -> str:
        rows = [(r.name, r.measured, r.tolerance, r.compare, r.passed, r.provenance) for r in self.records]
        return table_text(["name", "measured", "tolerance", "compare", "pass", "provenance"], rows)

    def summary_lines(self) -> list[str]:
        out = []
        for r in self.records:
            op = ">" if r.compare == "gt" else "<="
            out.append(f"[{'PASS' if r.passed else 'FAIL'}] {r.name}: {r.measured:.3e} {op} {r.tolerance:.1e}")
        return out
