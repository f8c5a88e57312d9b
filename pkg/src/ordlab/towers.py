"""Towers and pre-gaps of subsets of omega over finite ordinal index lists."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from .errors import Undecided
from .limits import LIMITS
from .matrix import MatrixProvider
from .omegasets import EVENS, INFINITE, Complement, Diagonal, Diff, Finite, Half, finiteness, inter, literal, parse_set, union
from .ordinals import Ordinal, OrdLike, as_ordinal, fmt, in_c_seq, parse
from .report import AxiomReport, Tally


def _finite_set(e) -> frozenset[int]:
    r = finiteness(e)
    if isinstance(r, Finite):
        return r.elems
    if r is INFINITE:
        return None
    raise Undecided(r.reason)


@dataclass
class Tower:
    indices: list[Ordinal]
    sets: dict[Ordinal, object]
    certificates: dict[tuple[Ordinal, Ordinal], int] = field(default_factory=dict)

    def __post_init__(self):
        self.indices = [as_ordinal(a) for a in self.indices]
        self.sets = {as_ordinal(k): v for k, v in self.sets.items()}
        if self.indices != sorted(set(self.indices)):
            raise ValueError("tower indices must strictly increase")
        missing = [a for a in self.indices if a not in self.sets]
        if missing:
            raise ValueError(f"no set given for indices {[fmt(a) for a in missing]}")

    def difference(self, alpha: Ordinal, beta: Ordinal):
        return Diff(self.sets[alpha], self.sets[beta])


@dataclass
class PreGap:
    indices: list[Ordinal]
    pairs: dict[Ordinal, tuple[object, object]]
    certificates: dict[tuple[str, Ordinal, Ordinal], int] = field(default_factory=dict)

    def __post_init__(self):
        self.indices = [as_ordinal(a) for a in self.indices]
        self.pairs = {as_ordinal(k): v for k, v in self.pairs.items()}
        if self.indices != sorted(set(self.indices)):
            raise ValueError("pre-gap indices must strictly increase")

    def a(self, alpha):
        return self.pairs[as_ordinal(alpha)][0]

    def b(self, alpha):
        return self.pairs[as_ordinal(alpha)][1]


def _index(family, alpha) -> Ordinal:
    alpha = as_ordinal(alpha)
    if alpha not in family.indices:
        raise ValueError(f"{fmt(alpha)} is not an index")
    return alpha


def rho_TO(t: Tower, alpha: OrdLike, beta: OrdLike) -> int:
    """Least xi with a_alpha ∖ xi ⊆ a_beta, i.e. 1 + max(a_alpha ∖ a_beta), or 0."""
    alpha, beta = _index(t, alpha), _index(t, beta)
    if alpha > beta:
        raise ValueError(f"rho_TO needs alpha <= beta, got {fmt(alpha)} > {fmt(beta)}")
    diff = _finite_set(t.difference(alpha, beta))
    if diff is None:
        raise ValueError(f"a_{fmt(alpha)} ∖ a_{fmt(beta)} is infinite")
    return max(diff) + 1 if diff else 0


def build_tower(indices: Sequence[OrdLike], base=EVENS, seed: int = 0, max_cut_gap: int = 8) -> Tower:
    """Tower over ascending indices.

    Successor step: add every other element (per residue class) of the current
    complement.  Limit step: diagonal union over the earlier indices that lie
    in the limit's C-sequence plus the previous index, with seeded strictly
    increasing cuts, then add every other element of what is still missing.
    Certificates a_alpha ∖ a_beta ⊆ [0, m) are computed exactly for all pairs.
    """
    idx = [as_ordinal(a) for a in indices]
    if len(idx) > LIMITS.tower_length:
        raise ValueError(f"tower of length {len(idx)} exceeds the guard")
    if any(b <= a for a, b in zip(idx, idx[1:])):
        raise ValueError("tower indices must strictly increase")
    rng = random.Random(seed)
    sets: dict[Ordinal, object] = {}
    for i, alpha in enumerate(idx):
        if i == 0:
            sets[alpha] = base
            continue
        # earlier sets enter as written-out normal forms, keeping expressions linear in size
        prev = literal(sets[idx[i - 1]])
        if alpha.is_limit:
            kids = [g for g in idx[:i] if in_c_seq(alpha, g)]
            if idx[i - 1] not in kids:
                kids.append(idx[i - 1])
            cuts, c = [], 0
            for _ in kids:
                c += rng.randint(1, max_cut_gap)
                cuts.append(c)
            diag = Diagonal(tuple(literal(sets[g]) for g in kids), tuple(cuts))
            sets[alpha] = union(diag, Half(Complement(diag)))
        else:
            sets[alpha] = union(prev, Half(Complement(prev)))
    t = Tower(idx, sets)
    for alpha, beta in itertools.combinations(idx, 2):
        t.certificates[alpha, beta] = rho_TO(t, alpha, beta)
    return t


def validate_tower(t: Tower) -> AxiomReport:
    """For alpha < beta: a_alpha ∖ a_beta finite (and within its certificate), a_beta ∖ a_alpha infinite."""
    report = AxiomReport()
    almost, strict, certs = Tally(), Tally(), Tally()
    for alpha, beta in itertools.combinations(t.indices, 2):
        try:
            diff = _finite_set(t.difference(alpha, beta))
            almost.check(diff is not None, alpha=alpha, beta=beta, reason="a_alpha ∖ a_beta is infinite")
            rev = _finite_set(t.difference(beta, alpha))
            strict.check(rev is None, alpha=alpha, beta=beta, reason="a_beta ∖ a_alpha is finite", difference=rev)
        except Undecided as exc:
            almost.undecided = str(exc)
            continue
        m = t.certificates.get((alpha, beta))
        if m is not None and diff is not None:
            tight = (max(diff) + 1 if diff else 0) == m
            certs.check(all(x < m for x in diff) and tight, alpha=alpha, beta=beta, certificate=m, difference=diff)
    report.axioms["almost-increasing"] = almost.result()
    report.axioms["strictly-increasing"] = strict.result()
    report.axioms["certificates"] = certs.result()
    report.stats.update(indices=len(t.indices), certificates=len(t.certificates))
    return report


def validate_pregap(g: PreGap) -> AxiomReport:
    """Both sides almost increasing, a_alpha ∩ b_alpha = ∅, and a_alpha ∩ b_beta ⊆ a_alpha ∖ a_beta finite."""
    report = AxiomReport()
    inc, disjoint, cross, contain = Tally(), Tally(), Tally(), Tally()
    try:
        for alpha in g.indices:
            meet = _finite_set(inter(g.a(alpha), g.b(alpha)))
            disjoint.check(meet == frozenset(), alpha=alpha, intersection=meet if meet is not None else "infinite")
        for alpha, beta in itertools.combinations(g.indices, 2):
            for side, get in (("a", g.a), ("b", g.b)):
                diff = _finite_set(Diff(get(alpha), get(beta)))
                inc.check(diff is not None, side=side, alpha=alpha, beta=beta, reason="not almost contained")
                m = g.certificates.get((side, alpha, beta))
                if m is not None and diff is not None:
                    inc.check(all(x < m for x in diff), side=side, alpha=alpha, beta=beta, certificate=m, difference=diff)
            meet = _finite_set(inter(g.a(alpha), g.b(beta)))
            cross.check(meet is not None, alpha=alpha, beta=beta, reason="a_alpha ∩ b_beta is infinite")
            outside = _finite_set(Diff(inter(g.a(alpha), g.b(beta)), Diff(g.a(alpha), g.a(beta))))
            contain.check(outside == frozenset(), alpha=alpha, beta=beta, outside=outside)
    except Undecided as exc:
        for tally in (inc, disjoint, cross, contain):
            tally.undecided = str(exc)
    report.axioms["increasing"] = inc.result()
    report.axioms["disjoint"] = disjoint.result()
    report.axioms["cross-finite"] = cross.result()
    report.axioms["cross-containment"] = contain.result()
    return report


def gap_F_member(g: PreGap, alpha: OrdLike, xi: int, beta: OrdLike) -> bool:
    """alpha ∈ F^G_xi(beta): every element of a_alpha ∩ b_beta is below xi."""
    alpha, beta = _index(g, alpha), _index(g, beta)
    if not alpha < beta:
        raise ValueError(f"need alpha < beta, got {fmt(alpha)}, {fmt(beta)}")
    meet = _finite_set(inter(g.a(alpha), g.b(beta)))
    if meet is None:
        raise ValueError(f"a_{fmt(alpha)} ∩ b_{fmt(beta)} is infinite")
    return all(x < xi for x in meet)


@dataclass(frozen=True)
class Splits:
    levels: dict


@dataclass(frozen=True)
class Fails:
    index: Ordinal
    side: str


def splitter_check(c, g: PreGap) -> Splits | Fails:
    """Whether c almost contains every a_alpha and almost avoids every b_alpha.

    The a-side is swept over all indices before the b-side.  On success,
    ``levels[alpha]`` is the least xi with a_alpha ∖ xi ⊆ c and b_alpha ∩ c ⊆ xi.
    """
    levels = {}
    for alpha in g.indices:
        out = _finite_set(Diff(g.a(alpha), c))
        if out is None:
            return Fails(alpha, "a")
        levels[alpha] = max(out) + 1 if out else 0
    for alpha in g.indices:
        inside = _finite_set(inter(g.b(alpha), c))
        if inside is None:
            return Fails(alpha, "b")
        levels[alpha] = max(levels[alpha], max(inside) + 1 if inside else 0)
    return Splits(levels)


def hausdorff_check(family: Tower | PreGap, n: int, beta: OrdLike) -> frozenset[Ordinal]:
    """{alpha < beta : a_alpha ∖ a_beta ⊆ n} for towers, {alpha < beta : a_alpha ∩ b_beta ⊆ n} for pre-gaps."""
    beta = _index(family, beta)
    out = set()
    for alpha in family.indices:
        if alpha >= beta:
            break
        if isinstance(family, Tower):
            if rho_TO(family, alpha, beta) <= n:
                out.add(alpha)
        elif gap_F_member(family, alpha, n, beta):
            out.add(alpha)
    return frozenset(out)


class TowerMatrix(MatrixProvider):
    """F^TO_n(beta) = {alpha < beta : a_alpha ∖ a_beta ⊆ n} over the tower's indices."""

    def __init__(self, t: Tower, name: str = "tower"):
        self.t = t
        self.name = name
        self._index = set(t.indices)
        self._cache: dict[tuple[Ordinal, Ordinal], int] = {}

    def in_index(self, alpha):
        return alpha in self._index

    def function_value(self, alpha, beta):
        if alpha not in self._index or beta not in self._index:
            return None
        key = (alpha, beta)
        if key not in self._cache:
            self._cache[key] = rho_TO(self.t, alpha, beta)
        return self._cache[key]

    def member(self, gamma, xi, alpha):
        if not gamma < alpha or gamma not in self._index or alpha not in self._index:
            return False
        return self.function_value(gamma, alpha) <= xi

    def enumerate(self, xi, alpha):
        return hausdorff_check(self.t, xi, alpha)

    def witness_g3(self, xi, alpha, beta):
        return max(xi, self.function_value(alpha, beta))


class GapMatrix(MatrixProvider):
    """F^G_xi(beta) = {alpha < beta : a_alpha ∩ b_beta ⊆ xi}; no matrix witnesses are claimed."""

    def __init__(self, g: PreGap, name: str = "gap"):
        self.g = g
        self.name = name
        self._index = set(g.indices)

    def in_index(self, alpha):
        return alpha in self._index

    def member(self, gamma, xi, alpha):
        if not gamma < alpha or gamma not in self._index or alpha not in self._index:
            return False
        return gap_F_member(self.g, gamma, xi, alpha)

    def function_value(self, alpha, beta):
        if alpha not in self._index or beta not in self._index:
            return None
        meet = _finite_set(inter(self.g.a(alpha), self.g.b(beta)))
        return max(meet) + 1 if meet else 0

    def enumerate(self, xi, alpha):
        return hausdorff_check(self.g, xi, alpha)


# -- fixtures and manifests ----------------------------------------------------


def mod4_pregap() -> PreGap:
    from .omegasets import residues

    return PreGap(
        [0, 1],
        {0: (residues(4, 0), residues(4, 2)), 1: (residues(4, 0, 1), residues(4, 2, 3))},
    )


def pregap_with_meet_two() -> PreGap:
    """a_0 ∩ b_1 = {2}."""
    from .omegasets import fin, residues

    return PreGap(
        [0, 1],
        {0: (union(residues(4, 0), fin(2)), residues(4, 3)), 1: (residues(4, 0, 1), residues(4, 2, 3))},
    )


def parse_manifest(text: str, base_dir: Path | None = None) -> Tower | PreGap:
    """Set definitions ``NAME = <expr>`` plus ``index <ord> A [B]`` and ``cert ...`` lines.

    ``include <file>`` pulls set definitions from another file.  Index lines
    with one set make a tower, with two sets a pre-gap.  Tower certificates:
    ``cert <ord> <ord> <m>``; pre-gap certificates: ``cert a|b <ord> <ord> <m>``.
    """
    env: dict[str, object] = {}
    rows, certs = [], []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head = line.split()[0]
        if head == "include":
            path = Path(line.split(None, 1)[1])
            if base_dir is not None and not path.is_absolute():
                path = base_dir / path
            from .omegasets import parse_set_file

            env.update(parse_set_file(path.read_text()))
        elif head == "index":
            parts = line.split()
            if len(parts) not in (3, 4):
                raise ValueError(f"line {lineno}: expected 'index <ord> A [B]'")
            rows.append((parse(parts[1]), [_lookup(env, n, lineno) for n in parts[2:]]))
        elif head == "cert":
            certs.append((lineno, line.split()[1:]))
        else:
            name, eq, body = line.partition("=")
            if not eq or not name.strip().isidentifier():
                raise ValueError(f"line {lineno}: cannot parse {line!r}")
            env[name.strip()] = parse_set(body, env)
    if not rows:
        raise ValueError("manifest has no index lines")
    widths = {len(sets) for _a, sets in rows}
    if len(widths) != 1:
        raise ValueError("index lines mix towers and pre-gaps")
    if widths == {1}:
        t = Tower([a for a, _ in rows], {a: s[0] for a, s in rows})
        for lineno, parts in certs:
            if len(parts) != 3:
                raise ValueError(f"line {lineno}: expected 'cert <ord> <ord> <m>'")
            t.certificates[parse(parts[0]), parse(parts[1])] = int(parts[2])
        return t
    g = PreGap([a for a, _ in rows], {a: (s[0], s[1]) for a, s in rows})
    for lineno, parts in certs:
        if len(parts) != 4 or parts[0] not in ("a", "b"):
            raise ValueError(f"line {lineno}: expected 'cert a|b <ord> <ord> <m>'")
        g.certificates[parts[0], parse(parts[1]), parse(parts[2])] = int(parts[3])
    return g


def _lookup(env, name, lineno):
    if name not in env:
        raise ValueError(f"line {lineno}: unknown set {name!r}")
    return env[name]


def load_manifest(path: str | Path) -> Tower | PreGap:
    path = Path(path)
    return parse_manifest(path.read_text(), path.parent)


def dump_manifest(family: Tower | PreGap) -> str:
    lines = []
    if isinstance(family, Tower):
        for i, a in enumerate(family.indices):
            lines.append(f"S{i} = {family.sets[a]}")
        for i, a in enumerate(family.indices):
            lines.append(f"index {fmt(a)} S{i}")
        for (a, b), m in sorted(family.certificates.items()):
            lines.append(f"cert {fmt(a)} {fmt(b)} {m}")
    else:
        for i, a in enumerate(family.indices):
            lines.append(f"A{i} = {family.a(a)}")
            lines.append(f"B{i} = {family.b(a)}")
        for i, a in enumerate(family.indices):
            lines.append(f"index {fmt(a)} A{i} B{i}")
        for (side, a, b), m in sorted(family.certificates.items(), key=lambda kv: (kv[0][0], kv[0][1], kv[0][2])):
            lines.append(f"cert {side} {fmt(a)} {fmt(b)} {m}")
    return "\n".join(lines) + "\n"
