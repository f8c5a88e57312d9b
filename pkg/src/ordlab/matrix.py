"""Matrices F_xi(alpha) with natural-number xi, their axioms, and derived functions.

A provider answers ``member(gamma, xi, alpha)``, i.e. whether gamma lies in
F_xi(alpha).  Axiom checks use the explicit witnesses a provider supplies; an
axiom whose witness is missing is reported as skipped.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from .errors import NotFoundWithinBound, Unsupported
from .ordinals import Ordinal, OrdLike, as_ordinal
from .report import PASS, SKIPPED, AxiomReport, AxiomResult, Tally
from .walks import WalkContext, default_context, rho, rho1, sublevel

DEFAULT_SEARCH_BOUND = 10**4


class MatrixProvider:
    """Interface for a family F_xi(alpha), xi natural, alpha in the index set."""

    name = "matrix"
    strong = False

    def in_index(self, alpha: Ordinal) -> bool:
        return True

    def member(self, gamma: Ordinal, xi: int, alpha: Ordinal) -> bool:
        raise NotImplementedError

    def enumerate(self, xi: int, alpha: Ordinal) -> frozenset[Ordinal] | None:
        return None

    def witness_g3(self, xi: int, alpha: Ordinal, beta: Ordinal) -> int | None:
        return None

    def witness_g4(self, eta: int, alpha: Ordinal, beta: Ordinal) -> int | None:
        return None

    def function_value(self, alpha: Ordinal, beta: Ordinal) -> int | None:
        """r(alpha, beta) when the matrix comes from a function, else None."""
        return None


class FunctionMatrix(MatrixProvider):
    """F_xi(beta) = {alpha < beta : r(alpha, beta) <= xi}."""

    def __init__(
        self,
        r: Callable[[Ordinal, Ordinal], int],
        subadditive: bool = False,
        name: str = "function",
        index_set: Callable[[Ordinal], bool] | None = None,
        enumerator: Callable[[int, Ordinal], Iterable[Ordinal]] | None = None,
    ):
        self.r = r
        self.strong = subadditive
        self.name = name
        self._index = index_set
        self._enumerator = enumerator

    def in_index(self, alpha):
        return self._index is None or self._index(alpha)

    def member(self, gamma, xi, alpha):
        if not gamma < alpha or not self.in_index(alpha):
            return False
        return self.r(gamma, alpha) <= xi

    def enumerate(self, xi, alpha):
        if self._enumerator is None:
            return None
        return frozenset(self._enumerator(xi, alpha))

    def witness_g3(self, xi, alpha, beta):
        return max(xi, self.r(alpha, beta))

    def witness_g4(self, eta, alpha, beta):
        if not self.strong:
            return None
        return max(eta, self.r(alpha, beta))

    def function_value(self, alpha, beta):
        return self.r(alpha, beta)


def from_function(r, subadditive: bool = False, name: str = "function", index_set=None, enumerator=None) -> FunctionMatrix:
    return FunctionMatrix(r, subadditive, name, index_set, enumerator)


def rho_provider(ctx: WalkContext | None = None) -> FunctionMatrix:
    ctx = ctx or default_context()

    def enum(xi, alpha):
        return sublevel("rho", alpha, xi, ctx) - {alpha}

    return from_function(lambda a, b: rho(a, b, ctx), subadditive=True, name="rho", enumerator=enum)


def rho1_provider(ctx: WalkContext | None = None) -> FunctionMatrix:
    ctx = ctx or default_context()

    def enum(xi, alpha):
        return sublevel("rho1", alpha, xi, ctx) - {alpha}

    return from_function(lambda a, b: rho1(a, b, ctx), subadditive=False, name="rho1", enumerator=enum)


class FlippedProvider(MatrixProvider):
    """Wraps a provider and inverts exactly one membership bit (for mutation tests)."""

    def __init__(self, base: MatrixProvider, gamma: OrdLike, xi: int, alpha: OrdLike):
        self.base = base
        self.flip = (as_ordinal(gamma), xi, as_ordinal(alpha))
        self.name = f"{base.name}-flipped"
        self.strong = base.strong

    def in_index(self, alpha):
        return self.base.in_index(alpha)

    def member(self, gamma, xi, alpha):
        v = self.base.member(gamma, xi, alpha)
        return not v if (gamma, xi, alpha) == self.flip else v

    def enumerate(self, xi, alpha):
        items = self.base.enumerate(xi, alpha)
        if items is None or (xi, alpha) != self.flip[1:]:
            return items
        return items ^ {self.flip[0]}

    def witness_g3(self, xi, alpha, beta):
        return self.base.witness_g3(xi, alpha, beta)

    def witness_g4(self, eta, alpha, beta):
        return self.base.witness_g4(eta, alpha, beta)


def rho_F(p: MatrixProvider, alpha: OrdLike, beta: OrdLike, search_bound: int | None = None) -> int:
    """Least xi with alpha in F_xi(beta).

    Function-derived providers answer directly; any other provider is searched
    over 0..search_bound.
    """
    alpha, beta = as_ordinal(alpha), as_ordinal(beta)
    if not alpha < beta:
        raise ValueError(f"rho_F needs alpha < beta, got {alpha}, {beta}")
    if not p.in_index(beta):
        raise ValueError(f"{beta} is not in the index set of {p.name}")
    direct = p.function_value(alpha, beta)
    if direct is not None:
        if search_bound is not None and direct > search_bound:
            raise NotFoundWithinBound(alpha, beta, search_bound)
        return direct
    bound = DEFAULT_SEARCH_BOUND if search_bound is None else search_bound
    for xi in range(bound + 1):
        if p.member(alpha, xi, beta):
            return xi
    raise NotFoundWithinBound(alpha, beta, bound)


def _pairs(items: Sequence, strict: bool, limit: int | None, rng: random.Random) -> list[tuple]:
    pairs = [(a, b) for a, b in itertools.combinations_with_replacement(items, 2) if not (strict and a == b)]
    if limit is not None and len(pairs) > limit:
        pairs = rng.sample(pairs, limit)
        pairs.sort()
    return pairs


def verify_axioms(
    p: MatrixProvider,
    universe: Iterable[OrdLike],
    xi_range: Iterable[int],
    seed: int = 0,
    search_bound: int | None = None,
    max_pairs: int | None = None,
) -> AxiomReport:
    """Check (G1)-(G4) on a finite universe using the provider's witnesses.

    Elements gamma of F-sets are drawn from the universe itself; with
    ``max_pairs`` the (alpha, beta) pairs are subsampled with ``seed``.
    """
    rng = random.Random(seed)
    uni = sorted({as_ordinal(u) for u in universe})
    xis = sorted(set(xi_range))
    index = [a for a in uni if p.in_index(a)]
    report = AxiomReport(seed=seed)

    g1 = Tally()
    for alpha in index:
        for gamma in uni:
            if gamma >= alpha:
                break
            try:
                rho_F(p, gamma, alpha, search_bound)
                g1.check(True)
            except NotFoundWithinBound:
                g1.check(False, gamma=gamma, alpha=alpha, bound=search_bound or DEFAULT_SEARCH_BOUND)
    report.axioms["G1"] = g1.result()

    g2 = Tally()
    for alpha in index:
        for gamma in uni:
            if gamma >= alpha:
                break
            seen = None
            for xi in xis:
                m = p.member(gamma, xi, alpha)
                if seen is not None and not m:
                    g2.check(False, gamma=gamma, xi=seen, eta=xi, alpha=alpha)
                    break
                g2.check(True)
                if m and seen is None:
                    seen = xi
    report.axioms["G2"] = g2.result()

    pairs = _pairs(index, strict=False, limit=max_pairs, rng=rng)
    report.axioms["G3"] = _witness_axiom(p, uni, xis, pairs, "g3")
    if not p.strong:
        report.axioms["G4"] = AxiomResult(SKIPPED, note="provider does not claim (G4)")
    else:
        report.axioms["G4"] = _witness_axiom(p, uni, xis, pairs, "g4")
    report.stats.update(universe=len(uni), index=len(index), pairs=len(pairs), xi_values=len(xis))
    return report


def _witness_axiom(p, uni, xis, pairs, which) -> AxiomResult:
    tally = Tally()
    for alpha, beta in pairs:
        for xi in xis:
            if which == "g3":
                # F_xi(alpha) ⊆ F_eta(beta)
                eta = p.witness_g3(xi, alpha, beta)
                if eta is None:
                    return AxiomResult(SKIPPED, tally.checked, note="provider has no (G3) witness")
                for gamma in uni:
                    if gamma >= alpha:
                        break
                    if p.member(gamma, xi, alpha):
                        tally.check(p.member(gamma, eta, beta), gamma=gamma, xi=xi, alpha=alpha, beta=beta, eta=eta)
            else:
                # F_xi(beta) ∩ alpha ⊆ F_w(alpha)
                w = p.witness_g4(xi, alpha, beta)
                if w is None:
                    return AxiomResult(SKIPPED, tally.checked, note="provider has no (G4) witness")
                for gamma in uni:
                    if gamma >= alpha:
                        break
                    if p.member(gamma, xi, beta):
                        tally.check(p.member(gamma, w, alpha), gamma=gamma, eta=xi, alpha=alpha, beta=beta, xi=w)
    return tally.result()


def directed_witness(p: MatrixProvider, first: tuple[int, Ordinal], second: tuple[int, Ordinal]) -> tuple[int, Ordinal]:
    """(zeta, gamma) with F_xi(alpha) ∪ F_eta(beta) ⊆ F_zeta(gamma), via (G3) then (G2)."""
    (xi, alpha), (eta, beta) = first, second
    gamma = max(alpha, beta)
    a = p.witness_g3(xi, alpha, gamma)
    b = p.witness_g3(eta, beta, gamma)
    if a is None or b is None:
        raise Unsupported(f"{p.name} has no (G3) witness")
    return max(a, b), gamma


def verify_directed(p: MatrixProvider, universe: Iterable[OrdLike], xi_range: Iterable[int], seed: int = 0, samples: int = 200) -> AxiomResult:
    rng = random.Random(seed)
    uni = sorted({as_ordinal(u) for u in universe})
    index = [a for a in uni if p.in_index(a)]
    xis = sorted(set(xi_range))
    if not index or not xis:
        return AxiomResult(PASS, 0, note="vacuous")
    tally = Tally()
    for _ in range(samples):
        first = (rng.choice(xis), rng.choice(index))
        second = (rng.choice(xis), rng.choice(index))
        try:
            zeta, gamma = directed_witness(p, first, second)
        except Unsupported as exc:
            return AxiomResult(SKIPPED, tally.checked, note=str(exc))
        for xi, alpha in (first, second):
            for g in uni:
                if g >= alpha:
                    break
                if p.member(g, xi, alpha):
                    tally.check(p.member(g, zeta, gamma), element=g, source=(xi, alpha), target=(zeta, gamma))
    return tally.result()


@dataclass(frozen=True)
class UnboundedWitness:
    a: frozenset
    b: frozenset


class _Exhausted:
    def __repr__(self):
        return "Exhausted"


EXHAUSTED = _Exhausted()


def unbounded_search(f: Callable[[Ordinal, Ordinal], int], family: Sequence[Iterable[OrdLike]], xi: int):
    """First pair a != b (in family order) with f > xi on every cross pair.

    Cross pairs are evaluated as f(min, max), since f is only defined on
    ordered pairs.
    """
    sets = [frozenset(as_ordinal(x) for x in s) for s in family]
    seen: dict[Ordinal, int] = {}
    for i, s in enumerate(sets):
        for x in s:
            if x in seen:
                raise ValueError(f"family members {seen[x]} and {i} share {x}")
            seen[x] = i
    for i, j in itertools.combinations(range(len(sets)), 2):
        a, b = sets[i], sets[j]
        if all(f(min(x, y), max(x, y)) > xi for x in a for y in b):
            return UnboundedWitness(a, b)
    return EXHAUSTED


def condition_H_count(fn_id: str, beta: OrdLike, xi: int, ctx: WalkContext | None = None) -> int:
    """|{alpha < beta : f(alpha, beta) <= xi}| for f in {rho, rho1}."""
    if fn_id == "rho2":
        raise Unsupported("rho2 sublevel sets are infinite")
    return len(sublevel(fn_id, beta, xi, ctx)) - 1

