"""Verification report records."""

from dataclasses import dataclass, field
from typing import Any

# Failure records kept per report; the count of all failures is tracked separately
MAX_RECORDED_FAILURES = 50


@dataclass(frozen=True)
class FailureRecord:
    """One failed check with a full dump of its operands."""

    check: str
    message: str
    operands: dict[str, Any] = field(default_factory=dict)


@dataclass
class VerificationReport:
    """Outcome of one named check over a parameter range.

    Attributes:
        name: check name, e.g. "identities" or "bijection"
        q: fibration parameter, when the check is per-q
        checked: number of individual assertions evaluated
        failure_count: number of failed assertions
        failures: the first MAX_RECORDED_FAILURES failure records
    """

    name: str
    q: int | None = None
    checked: int = 0
    failure_count: int = 0
    failures: list[FailureRecord] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.failure_count == 0

    def expect(self, ok: bool, check: str, message: str, **operands) -> bool:
        """Record one assertion; returns ok."""
        self.checked += 1
        if not ok:
            self.failure_count += 1
            if len(self.failures) < MAX_RECORDED_FAILURES:
                self.failures.append(FailureRecord(check, message, dict(operands)))
        return ok

    def to_row(self) -> dict[str, Any]:
        return {
            "check": self.name,
            "q": self.q,
            "checked": self.checked,
            "failures": self.failure_count,
            "status": "pass" if self.passed else "FAIL",
        }
