"""Pass/fail records shared by the verification suites."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from .ordinals import Ordinal, fmt

PASS, FAIL, SKIPPED, UNDECIDED = "pass", "fail", "skipped", "undecided"
STATUSES = (PASS, FAIL, SKIPPED, UNDECIDED)


def plain(value: Any) -> Any:
    """Convert ordinals and containers into JSON-friendly values."""
    if isinstance(value, Ordinal):
        return fmt(value)
    if isinstance(value, dict):
        return {str(plain(k)): plain(v) for k, v in value.items()}
    if isinstance(value, (frozenset, set)):
        return sorted((plain(v) for v in value), key=str)
    if isinstance(value, (list, tuple)):
        return [plain(v) for v in value]
    if hasattr(value, "to_plain"):
        return value.to_plain()
    return value


@dataclass
class AxiomResult:
    status: str
    checked: int = 0
    counterexample: dict | None = None
    note: str = ""

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"unknown status {self.status!r}")
        if self.status == FAIL and self.counterexample is None:
            raise ValueError("a failing axiom needs a counterexample")

    def to_plain(self) -> dict:
        out = {"status": self.status, "checked": self.checked}
        if self.counterexample is not None:
            out["counterexample"] = plain(self.counterexample)
        if self.note:
            out["note"] = self.note
        return out


@dataclass
class AxiomReport:
    axioms: dict[str, AxiomResult] = field(default_factory=dict)
    stats: dict[str, Any] = field(default_factory=dict)
    seed: int | None = None

    def __getitem__(self, name: str) -> AxiomResult:
        return self.axioms[name]

    def status(self, name: str) -> str:
        return self.axioms[name].status

    @property
    def ok(self) -> bool:
        return all(r.status != FAIL for r in self.axioms.values())

    @property
    def all_pass(self) -> bool:
        return all(r.status == PASS for r in self.axioms.values())

    def failures(self) -> dict[str, AxiomResult]:
        return {k: v for k, v in self.axioms.items() if v.status == FAIL}

    def merge(self, other: "AxiomReport") -> "AxiomReport":
        """Combine two shards; a fail anywhere wins, then undecided, then pass."""
        rank = {FAIL: 3, UNDECIDED: 2, PASS: 1, SKIPPED: 0}
        out = dict(self.axioms)
        for name, r in other.axioms.items():
            mine = out.get(name)
            if mine is None:
                out[name] = r
                continue
            winner = mine if rank[mine.status] >= rank[r.status] else r
            out[name] = AxiomResult(winner.status, mine.checked + r.checked, winner.counterexample, winner.note)
        stats = dict(self.stats)
        for k, v in other.stats.items():
            stats[k] = stats.get(k, 0) + v if isinstance(v, int) else v
        return AxiomReport(out, stats, self.seed if self.seed is not None else other.seed)

    def to_plain(self) -> dict:
        return {
            "axioms": {k: self.axioms[k].to_plain() for k in sorted(self.axioms)},
            "stats": plain(self.stats),
            "seed": self.seed,
        }


class Tally:
    """Accumulates one axiom's checks, keeping the first counterexample."""

    def __init__(self):
        self.checked = 0
        self.counterexample = None
        self.undecided = None

    def check(self, ok: bool, **witness) -> bool:
        self.checked += 1
        if not ok and self.counterexample is None:
            self.counterexample = witness
        return ok

    def result(self, note: str = "") -> AxiomResult:
        if self.counterexample is not None:
            return AxiomResult(FAIL, self.checked, self.counterexample, note)
        if self.undecided is not None:
            return AxiomResult(UNDECIDED, self.checked, None, self.undecided)
        return AxiomResult(PASS, self.checked, None, note)
