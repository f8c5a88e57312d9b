"""Finite sets of ordinals under symmetric difference, with matrix neighborhoods."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

from .errors import NotFoundWithinBound, OrdlabError, Unsupported
from .matrix import MatrixProvider, rho_F
from .ordinals import Ordinal, OrdLike, as_ordinal, fmt, parse
from .report import PASS, SKIPPED, UNDECIDED, AxiomReport, AxiomResult, Tally


class InclusionViolation(OrdlabError, AssertionError):
    def __init__(self, message: str, witness: dict):
        super().__init__(message)
        self.witness = witness


@dataclass(frozen=True, order=True)
class GroupElement:
    elems: tuple[Ordinal, ...] = ()

    @classmethod
    def of(cls, items: Iterable[OrdLike] = ()) -> "GroupElement":
        return cls(tuple(sorted({as_ordinal(x) for x in items})))

    def __xor__(self, other: "GroupElement") -> "GroupElement":
        return GroupElement(tuple(sorted(set(self.elems).symmetric_difference(other.elems))))

    def __iter__(self):
        return iter(self.elems)

    def __len__(self):
        return len(self.elems)

    def __bool__(self):
        return bool(self.elems)

    def __str__(self):
        return "{" + ",".join(fmt(x) for x in self.elems) + "}"

    def to_plain(self):
        return str(self)


IDENTITY = GroupElement()


def sym_diff(a: GroupElement, b: GroupElement) -> GroupElement:
    return a ^ b


def parse_element(text: str) -> GroupElement:
    text = text.strip()
    if not (text.startswith("{") and text.endswith("}")):
        raise ValueError(f"element must be written in braces: {text!r}")
    body = text[1:-1].strip()
    if not body:
        return IDENTITY
    return GroupElement.of(parse(part) for part in body.split(","))


@dataclass(frozen=True)
class Basic:
    """U_xi(alpha) = {a : a ∩ F_xi(alpha) = ∅}."""

    xi: int
    alpha: Ordinal
    provider: MatrixProvider

    def __post_init__(self):
        object.__setattr__(self, "alpha", as_ordinal(self.alpha))
        if not self.provider.in_index(self.alpha):
            raise ValueError(f"{self.alpha} is not an index of {self.provider.name}")

    def excludes(self, gamma: Ordinal) -> bool:
        return self.provider.member(gamma, self.xi, self.alpha)

    def __str__(self):
        return f"U_{self.xi}({fmt(self.alpha)})"


@dataclass(frozen=True)
class Subbase:
    """The intersection of U_xi(beta) over (xi, beta) in K."""

    K: frozenset
    provider: MatrixProvider

    def __post_init__(self):
        K = frozenset((int(x), as_ordinal(b)) for x, b in self.K)
        if not K:
            raise ValueError("a subbase neighborhood needs a nonempty K")
        object.__setattr__(self, "K", K)

    def excludes(self, gamma: Ordinal) -> bool:
        return any(self.provider.member(gamma, xi, beta) for xi, beta in self.K)

    def __str__(self):
        return "∩{" + ", ".join(f"U_{x}({fmt(b)})" for x, b in sorted(self.K, key=lambda p: (p[1], p[0]))) + "}"


Neighborhood = Union[Basic, Subbase]


def in_neighborhood(a: GroupElement, U: Neighborhood) -> bool:
    return not any(U.excludes(g) for g in a)


def _meet(U: Neighborhood, V: Neighborhood) -> Neighborhood | None:
    """A base member inside U ∩ V, or None when no witness is available."""
    if isinstance(U, Subbase) and isinstance(V, Subbase):
        return Subbase(U.K | V.K, U.provider)
    if isinstance(U, Basic) and isinstance(V, Basic):
        if V.alpha < U.alpha:
            U, V = V, U
        xi0 = U.provider.witness_g3(U.xi, U.alpha, V.alpha)
        if xi0 is None:
            return None
        return Basic(max(V.xi, xi0), V.alpha, V.provider)
    return None


def _probes(elements: Sequence[GroupElement], extra: Iterable[OrdLike]) -> list[GroupElement]:
    singles = {x for a in elements for x in a} | {as_ordinal(x) for x in extra}
    out = set(elements) | {GroupElement((x,)) for x in singles}
    return sorted(out)


def verify_group_axioms(
    base: Sequence[Neighborhood],
    elements: Sequence[GroupElement],
    seed: int = 0,
    pair_samples: int = 2000,
    probe_universe: Iterable[OrdLike] = (),
    search_bound: int | None = None,
) -> AxiomReport:
    """Check the six neighborhood-base conditions on sampled elements.

    Conditions (1)-(4) use V = U; (5) uses the explicit meet witness; (6)
    separates each nonempty element from the identity with some U_xi(alpha).
    Probes for (5) are the elements plus singletons of their members and of
    ``probe_universe``.
    """
    rng = random.Random(seed)
    elements = list(elements)
    report = AxiomReport(seed=seed)
    pairs = list(itertools.product(range(len(elements)), repeat=2))
    if len(pairs) > pair_samples:
        pairs = sorted(rng.sample(pairs, pair_samples))
    member = {(i, j): in_neighborhood(elements[i], U) for j, U in enumerate(base) for i in range(len(elements))}

    c1, c2, c3, c4 = Tally(), Tally(), Tally(), Tally()
    for j, U in enumerate(base):
        c2.check(in_neighborhood(IDENTITY, U), element=IDENTITY, nbhd=str(U))
        for i, a in enumerate(elements):
            if member[i, j]:
                c2.check(a ^ a == IDENTITY and in_neighborhood(a, U), element=a, nbhd=str(U))
        for i, k in pairs:
            a, b = elements[i], elements[k]
            if member[i, j] and member[k, j]:
                c1.check(in_neighborhood(a ^ b, U), a=a, b=b, nbhd=str(U))
                # V x ⊆ U for x = b in U, with V = U
                c3.check(in_neighborhood(a ^ b, U), v=a, x=b, nbhd=str(U))
            if member[k, j]:
                # x V x^-1 ⊆ U with V = U
                conj = a ^ elements[k] ^ a
                c4.check(a ^ b == b ^ a and conj == elements[k] and in_neighborhood(conj, U), x=a, v=elements[k], nbhd=str(U))
    report.axioms["1"] = c1.result()
    report.axioms["2"] = c2.result()
    report.axioms["3"] = c3.result()
    report.axioms["4"] = c4.result()

    probes = _probes(elements, probe_universe)
    c5 = Tally()
    skipped5 = False
    for U, V in itertools.combinations_with_replacement(base, 2):
        W = _meet(U, V)
        if W is None:
            skipped5 = True
            continue
        for a in probes:
            if in_neighborhood(a, W):
                c5.check(in_neighborhood(a, U) and in_neighborhood(a, V), element=a, U=str(U), V=str(V), W=str(W))
    if skipped5 and c5.checked == 0 and c5.counterexample is None:
        report.axioms["5"] = AxiomResult(SKIPPED, note="no meet witness for the given base")
    else:
        report.axioms["5"] = c5.result("some pairs lacked a witness" if skipped5 else "")

    report.axioms["6"] = _separation(base, elements, search_bound)
    report.axioms["character-fragment"] = _character_fragment(base, probes)
    report.stats.update(base=len(base), elements=len(elements), pairs=len(pairs), probes=len(probes))
    return report


def _separation(base, elements, search_bound) -> AxiomResult:
    if not base:
        return AxiomResult(SKIPPED, note="empty base")
    nonempty = [a for a in elements if a]
    if not nonempty:
        return AxiomResult(SKIPPED, note="no nonempty elements")
    p = base[0].provider
    alphas = sorted({U.alpha for U in base if isinstance(U, Basic)} | {b for U in base if isinstance(U, Subbase) for _x, b in U.K})
    tally = Tally()
    for a in nonempty:
        top = max(a)
        candidates = [top + 1] if p.in_index(top + 1) else []
        candidates += [al for al in alphas if al > top]
        found = False
        for alpha in candidates:
            try:
                xi = rho_F(p, a.elems[0], alpha, search_bound)
            except NotFoundWithinBound:
                continue
            if not in_neighborhood(a, Basic(xi, alpha, p)):
                found = True
                break
        tally.check(found, element=a, tried=candidates)
    return tally.result()


def _character_fragment(base, probes) -> AxiomResult:
    """No base member sits inside U_0(beta) for a fresh index beta above the base."""
    basics = [U for U in base if isinstance(U, Basic)]
    if not basics:
        return AxiomResult(SKIPPED, note="needs basic neighborhoods")
    p = basics[0].provider
    top = max(U.alpha for U in basics)
    beta = top + 1
    if not p.in_index(beta):
        return AxiomResult(SKIPPED, note=f"{beta} is not an index")
    fresh = Basic(0, beta, p)
    checked = 0
    for U in basics:
        candidates = [top] + [g for a in probes for g in a if U.alpha <= g < beta]
        if not any(in_neighborhood(GroupElement((g,)), U) and not in_neighborhood(GroupElement((g,)), fresh) for g in candidates):
            return AxiomResult(UNDECIDED, checked, note=f"no sampled witness that {U} escapes {fresh}")
        checked += 1
    return AxiomResult(PASS, checked)


@dataclass(frozen=True)
class TailIndex:
    index: int


@dataclass(frozen=True)
class Counterexample:
    indices: tuple[int, ...]


def converges(seq: Sequence[GroupElement], U: Neighborhood) -> TailIndex | Counterexample:
    """Least t with seq[t:] inside U; if the last term is outside, every violating index."""
    bad = [i for i, a in enumerate(seq) if not in_neighborhood(a, U)]
    if not bad:
        return TailIndex(0)
    if bad[-1] == len(seq) - 1:
        return Counterexample(tuple(bad))
    return TailIndex(bad[-1] + 1)


def restriction_cover(delta: OrdLike, xi: int, alpha: OrdLike, p: MatrixProvider, probes: Iterable[OrdLike] | None = None) -> int:
    """eta with F_xi(alpha) ∩ delta ⊆ F_eta(delta).

    The inclusion is checked before returning, on the exact enumeration of
    F_xi(alpha) when ``probes`` is None and on the given probes otherwise.
    """
    delta, alpha = as_ordinal(delta), as_ordinal(alpha)
    if alpha <= delta:
        eta = p.witness_g3(xi, alpha, delta)
    else:
        if not p.strong:
            raise Unsupported(f"{p.name} is not strong, so delta < alpha has no witness")
        eta = p.witness_g4(xi, delta, alpha)
    if eta is None:
        raise Unsupported(f"{p.name} supplies no witness for this case")
    if probes is None:
        items = p.enumerate(xi, alpha)
        if items is None:
            raise Unsupported(f"{p.name} cannot enumerate F_{xi}({alpha}); pass probes")
    else:
        items = [g for g in (as_ordinal(x) for x in probes) if p.member(g, xi, alpha)]
    for g in sorted(items):
        if g < delta and not p.member(g, eta, delta):
            raise InclusionViolation(f"{g} in F_{xi}({alpha}) ∩ {delta} but not in F_{eta}({delta})", {"gamma": g, "eta": eta})
    return eta


def forbidden_union(K: Iterable[tuple[int, OrdLike]], p: MatrixProvider, probes: Iterable[OrdLike]) -> frozenset[Ordinal]:
    """Probes lying in some F_xi(beta), (xi, beta) in K."""
    K = [(x, as_ordinal(b)) for x, b in K]
    return frozenset(g for g in (as_ordinal(x) for x in probes) if any(p.member(g, x, b) for x, b in K))


def check_subbase_directed(K1, K2, p: MatrixProvider, probes: Iterable[OrdLike]) -> bool:
    probes = list(probes)
    joint = forbidden_union(list(K1) + list(K2), p, probes)
    return forbidden_union(K1, p, probes) | forbidden_union(K2, p, probes) <= joint
