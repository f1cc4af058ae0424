from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Iterable, Literal

Status = Literal["PASS", "FAIL", "ABSTAIN"]


@dataclass(frozen=True)
class CheckVerdict:
    suite: str
    check: str
    status: Status
    details: str = ""
    data: dict[str, Any] = field(default_factory=dict)

    def as_record(self) -> dict[str, Any]:
        return {"check": self.check, "status": self.status, "details": self.details, "data": self.data}


@dataclass(frozen=True)
class SuiteResult:
    name: str
    verdicts: tuple[CheckVerdict, ...]
    # set when a budget error stopped the suite early
    budget_error: str | None = None
    # ideal dump sections, title -> rendered polynomials
    dump: dict[str, list[str]] = field(default_factory=dict)

    @property
    def failed(self) -> bool:
        return any(v.status == "FAIL" for v in self.verdicts)


def tally(verdicts: Iterable[CheckVerdict]) -> dict[str, int]:
    out = {"PASS": 0, "FAIL": 0, "ABSTAIN": 0}
    for v in verdicts:
        out[v.status] += 1
    return out
