"""Verdicts and check records shared by every verification routine."""

from __future__ import annotations

from dataclasses import dataclass, field

PROVED = "proved (exhaustive)"


def sampled(n: int, seed) -> str:
    return f"checked (sampled, N={n}, seed={seed})"


def bounded(max_len: int) -> str:
    return f"bound-qualified negative (L={max_len})"


def bounded_positive(max_len: int) -> str:
    return f"holds up to bound (L={max_len})"


@dataclass
class Check:
    name: str
    passed: bool
    verdict: str = PROVED
    witness: str | None = None
    details: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        out = {"name": self.name, "passed": self.passed, "verdict": self.verdict}
        if self.witness is not None:
            out["witness"] = self.witness
        if self.details:
            out["details"] = self.details
        return out

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        text = f"[{status}] {self.name}: {self.verdict}"
        if self.witness is not None:
            text += f"; witness: {self.witness}"
        return text


@dataclass
class Report:
    title: str
    checks: list[Check] = field(default_factory=list)
    info: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, check: Check) -> Check:
        self.checks.append(check)
        return check

    def extend(self, other: "Report"):
        self.checks.extend(other.checks)
        self.info.update(other.info)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def as_dict(self) -> dict:
        return {
            "title": self.title,
            "passed": self.passed,
            "info": self.info,
            "checks": [c.as_dict() for c in self.checks],
        }

    def text(self) -> str:
        lines = [self.title]
        for k, v in self.info.items():
            lines.append(f"  {k}: {v}")
        lines.extend("  " + c.line() for c in self.checks)
        return "\n".join(lines)
