"""Finite tree fragments indexed by ordinals, and finite l-infinity sequence nodes.

A fragment stores nodes ``omega*level + offset`` with their stored parents.
Chains are never inferred: a query that needs a node or chain the fragment
lacks raises IncompleteData.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable, Sequence

import networkx as nx
import numpy as np

from .errors import IncompleteData
from .matrix import MatrixProvider
from .ordinals import Ordinal, OrdLike, add, as_ordinal, fmt, mul_omega_left, nat, parse
from .report import PASS, AxiomReport, AxiomResult, Tally
from .walks import WalkContext, rho2


def is_level_index(alpha: Ordinal) -> bool:
    return mul_omega_left(alpha) == alpha


@dataclass
class ExplicitTree:
    """Nodes with level/offset labels and stored parent links.

    ``parents`` keeps every parent line read, so malformed data (two parents)
    survives ingestion and is reported by the checks instead of being dropped.
    """

    level_of: dict[Ordinal, Ordinal] = field(default_factory=dict)
    offset_of: dict[Ordinal, int] = field(default_factory=dict)
    parents: dict[Ordinal, list[Ordinal]] = field(default_factory=dict)

    def add_node(self, node: OrdLike, level: OrdLike, offset: int, parent: OrdLike | None = None):
        node, level = as_ordinal(node), as_ordinal(level)
        if node in self.level_of and (self.level_of[node], self.offset_of[node]) != (level, offset):
            raise ValueError(f"node {node} relabelled")
        self.level_of[node] = level
        self.offset_of[node] = offset
        ps = self.parents.setdefault(node, [])
        if parent is not None:
            parent = as_ordinal(parent)
            if parent not in ps:
                ps.append(parent)
        self.__dict__.pop("_ancestors", None)

    @property
    def nodes(self) -> list[Ordinal]:
        return sorted(self.level_of)

    def levels(self) -> list[Ordinal]:
        return sorted(set(self.level_of.values()))

    def node_at(self, level: Ordinal, offset: int) -> Ordinal:
        node = add(mul_omega_left(level), nat(offset))
        if self.level_of.get(node) != level:
            raise IncompleteData(f"node {fmt(node)} (level {fmt(level)}, offset {offset}) is not stored")
        return node

    def offsets(self, level: Ordinal) -> list[int]:
        return sorted(self.offset_of[n] for n, lv in self.level_of.items() if lv == level)

    @cached_property
    def _ancestors(self) -> dict[Ordinal, frozenset[Ordinal]]:
        out: dict[Ordinal, frozenset[Ordinal]] = {}
        for node in sorted(self.level_of, key=lambda n: self.level_of[n]):
            acc = set()
            for p in self.parents.get(node, []):
                if p not in self.level_of:
                    raise IncompleteData(f"parent {fmt(p)} of {fmt(node)} is not stored")
                if self.level_of[p] >= self.level_of[node]:
                    continue  # reported by validate()
                acc.add(p)
                acc |= out.get(p, frozenset())
            out[node] = frozenset(acc)
        return out

    def ancestors(self, node: OrdLike) -> frozenset[Ordinal]:
        node = as_ordinal(node)
        if node not in self.level_of:
            raise IncompleteData(f"node {fmt(node)} is not stored")
        return self._ancestors[node]

    def precedes(self, a: Ordinal, b: Ordinal) -> bool:
        """a ≺ b (strict)."""
        return a in self.ancestors(b)

    def validate(self) -> list[str]:
        """Problems with the fragment; empty when it is a well-formed tree."""
        problems = []
        for node in self.nodes:
            level, off = self.level_of[node], self.offset_of[node]
            if add(mul_omega_left(level), nat(off)) != node:
                problems.append(f"{fmt(node)} is not omega*{fmt(level)}+{off}")
            ps = self.parents.get(node, [])
            if len(ps) > 1:
                problems.append(f"{fmt(node)} has {len(ps)} parents: {', '.join(fmt(p) for p in ps)}")
            for p in ps:
                if p not in self.level_of:
                    problems.append(f"parent {fmt(p)} of {fmt(node)} is not stored")
                elif self.level_of[p] >= level:
                    problems.append(f"parent {fmt(p)} of {fmt(node)} does not lie on a lower level")
        if not problems:
            for node in self.nodes:
                anc = self.ancestors(node)
                if node in anc:
                    problems.append(f"{fmt(node)} precedes itself")
                lv = [self.level_of[a] for a in anc]
                if len(lv) != len(set(lv)):
                    problems.append(f"chain below {fmt(node)} repeats a level")
        return problems

    def children(self) -> dict[Ordinal, list[Ordinal]]:
        out: dict[Ordinal, list[Ordinal]] = {n: [] for n in self.level_of}
        for n, ps in self.parents.items():
            for p in ps:
                if p in out:
                    out[p].append(n)
        return out


def parse_tree(text: str) -> ExplicitTree:
    """Lines ``node <ord> level <ord> offset <nat> parent <ord|root>``; '#' starts a comment."""
    t = ExplicitTree()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 8 or parts[0::2] != ["node", "level", "offset", "parent"]:
            raise ValueError(f"line {lineno}: expected 'node <ord> level <ord> offset <nat> parent <ord|root>'")
        node, level, off, parent = parts[1::2]
        t.add_node(parse(node), parse(level), int(off), None if parent == "root" else parse(parent))
    return t


def load_tree(path: str | Path) -> ExplicitTree:
    return parse_tree(Path(path).read_text())


def dump_tree(t: ExplicitTree) -> str:
    lines = []
    for node in t.nodes:
        ps = t.parents.get(node) or [None]
        for p in ps:
            lines.append(f"node {fmt(node)} level {fmt(t.level_of[node])} offset {t.offset_of[node]} parent {'root' if p is None else fmt(p)}")
    return "\n".join(lines) + "\n"


def bundled_fragment() -> ExplicitTree:
    """Levels 0, w^w and w^w*2 with offsets 0..2; chains cross over between levels."""
    t = ExplicitTree()
    top, mid = parse("w^w*2"), parse("w^w")
    for i in range(3):
        t.add_node(i, 0, i)
    # each level is a permutation of the one below, so chains cross
    for i, p in enumerate([1, 2, 0]):
        t.add_node(add(mid, nat(i)), mid, i, p)
    for i, p in enumerate([2, 0, 1]):
        t.add_node(add(top, nat(i)), top, i, add(mid, nat(p)))
    return t


def two_parent_mutant() -> ExplicitTree:
    t = bundled_fragment()
    top, mid = parse("w^w*2"), parse("w^w")
    t.add_node(top, top, 0, add(mid, nat(1)))
    return t


def _check_level(t: ExplicitTree, alpha: Ordinal):
    if not is_level_index(alpha):
        raise ValueError(f"{fmt(alpha)} is not a level index (omega*alpha != alpha)")


def tree_F_member(t: ExplicitTree, gamma: OrdLike, xi: int, alpha: OrdLike) -> bool:
    """gamma ∈ F_xi(alpha): gamma < alpha and gamma ≺ alpha+eta for some eta <= xi."""
    gamma, alpha = as_ordinal(gamma), as_ordinal(alpha)
    _check_level(t, alpha)
    if gamma >= alpha:
        return False
    return any(gamma in t.ancestors(t.node_at(alpha, eta)) for eta in range(xi + 1))


def tree_F_set(t: ExplicitTree, xi: int, alpha: Ordinal) -> frozenset[Ordinal]:
    _check_level(t, alpha)
    out = set()
    for eta in range(xi + 1):
        out |= t.ancestors(t.node_at(alpha, eta))
    return frozenset(g for g in out if g < alpha)


class TreeMatrix(MatrixProvider):
    """F^T over a fragment; index set = stored levels that are level indices."""

    strong = True

    def __init__(self, t: ExplicitTree, name: str = "tree"):
        self.t = t
        self.name = name

    def in_index(self, alpha):
        return alpha in self.t.level_of.values() and is_level_index(alpha)

    def member(self, gamma, xi, alpha):
        return self.in_index(alpha) and tree_F_member(self.t, gamma, xi, alpha)

    def enumerate(self, xi, alpha):
        return tree_F_set(self.t, xi, alpha)

    def witness_g3(self, xi, alpha, beta):
        return g3_witness(self.t, xi, alpha, beta)

    def witness_g4(self, eta, alpha, beta):
        return g4_witness(self.t, eta, alpha, beta)


def g3_witness(t: ExplicitTree, xi: int, alpha: Ordinal, beta: Ordinal) -> int:
    """max over eps <= xi of the least eta_eps with alpha+eps ≼ beta+eta_eps."""
    if alpha == beta:
        return xi
    best = 0
    for eps in range(xi + 1):
        node = t.node_at(alpha, eps)
        hits = [eta for eta in t.offsets(beta) if node in t.ancestors(t.node_at(beta, eta))]
        if not hits:
            raise IncompleteData(f"{fmt(node)} has no stored successor on level {fmt(beta)}")
        best = max(best, min(hits))
    return best


def level_predecessors(t: ExplicitTree, alpha: Ordinal, node: Ordinal) -> list[int]:
    """Offsets xi with alpha+xi ≺ node; a tree gives exactly one."""
    return sorted(t.offset_of[a] for a in t.ancestors(node) if t.level_of[a] == alpha)


def g4_witness(t: ExplicitTree, eta: int, alpha: Ordinal, beta: Ordinal) -> int:
    """max over eps <= eta of the unique xi_eps with alpha+xi_eps ≺ beta+eps."""
    if alpha == beta:
        return eta
    best = 0
    for eps in range(eta + 1):
        preds = level_predecessors(t, alpha, t.node_at(beta, eps))
        if len(preds) != 1:
            raise _NotUnique(t.node_at(beta, eps), alpha, preds)
        best = max(best, preds[0])
    return best


class _NotUnique(Exception):
    def __init__(self, node, level, offsets):
        super().__init__(f"{fmt(node)} has {len(offsets)} predecessors on level {fmt(level)}")
        self.payload = {"node": node, "level": level, "offsets": offsets}


def verify_tree_matrix(t: ExplicitTree, levels: Sequence[OrdLike], xi_max: int) -> AxiomReport:
    """(G1)-(G4) on a fragment, with the chain-derived witnesses."""
    levels = sorted({as_ordinal(a) for a in levels})
    for a in levels:
        _check_level(t, a)
    report = AxiomReport()
    problems = t.validate()
    order = Tally()
    order.check(not problems, problems=problems)
    report.axioms["tree-order"] = order.result()
    nodes = t.nodes

    g1, g2 = Tally(), Tally()
    for alpha in levels:
        offs = t.offsets(alpha)
        for gamma in nodes:
            if gamma >= alpha:
                break
            found = next((e for e in offs if gamma in t.ancestors(t.node_at(alpha, e))), None)
            g1.check(found is not None, gamma=gamma, alpha=alpha, offsets=offs)
        xs = [x for x in range(xi_max + 1) if x <= max(offs, default=-1)]
        for x, y in itertools.combinations_with_replacement(xs, 2):
            g2.check(tree_F_set(t, x, alpha) <= tree_F_set(t, y, alpha), xi=x, eta=y, alpha=alpha)
    report.axioms["G1"] = g1.result()
    report.axioms["G2"] = g2.result()

    g3, g4 = Tally(), Tally()
    for alpha, beta in itertools.combinations_with_replacement(levels, 2):
        for xi in range(xi_max + 1):
            if xi > max(t.offsets(alpha)):
                break
            try:
                eta = g3_witness(t, xi, alpha, beta)
                missing = tree_F_set(t, xi, alpha) - tree_F_set(t, eta, beta)
                g3.check(not missing, xi=xi, alpha=alpha, beta=beta, eta=eta, missing=missing)
            except IncompleteData as exc:
                g3.check(False, xi=xi, alpha=alpha, beta=beta, error=str(exc))
        for eta in range(xi_max + 1):
            if eta > max(t.offsets(beta)):
                break
            try:
                w = g4_witness(t, eta, alpha, beta)
            except _NotUnique as exc:
                g4.check(False, reason="predecessor not unique", eta=eta, alpha=alpha, beta=beta, **exc.payload)
                continue
            except IncompleteData as exc:
                g4.check(False, eta=eta, alpha=alpha, beta=beta, error=str(exc))
                continue
            lower = frozenset(g for g in tree_F_set(t, eta, beta) if g < alpha)
            try:
                missing = lower - tree_F_set(t, w, alpha)
            except IncompleteData as exc:
                g4.check(False, eta=eta, alpha=alpha, beta=beta, xi=w, error=str(exc))
                continue
            g4.check(not missing, eta=eta, alpha=alpha, beta=beta, xi=w, missing=missing)
    report.axioms["G3"] = g3.result()
    report.axioms["G4"] = g4.result()
    report.stats.update(nodes=len(nodes), levels=len(levels))
    return report


def _poset(t: ExplicitTree) -> nx.DiGraph:
    g = nx.DiGraph()
    g.add_nodes_from(t.nodes)
    for n in t.nodes:
        for a in t.ancestors(n):
            g.add_edge(a, n)
    return g


def branch_check(t: ExplicitTree) -> dict:
    """Maximal chains (root-to-leaf paths through stored parent links)."""
    kids = t.children()
    roots = [n for n in t.nodes if not t.parents.get(n)]
    chains = []

    def walk(path):
        nxt = sorted(kids[path[-1]])
        if not nxt:
            chains.append(tuple(path))
        for c in nxt:
            walk(path + [c])

    for r in roots:
        walk([r])
    return {"chains": chains, "count": len(chains), "longest": max((len(c) for c in chains), default=0)}


def antichain_check(t: ExplicitTree) -> dict:
    """Width of (nodes, ≺) by Dilworth: nodes minus a maximum chain-cover matching."""
    nodes = t.nodes
    if not nodes:
        return {"width": 0, "level_sizes": {}}
    g = _poset(t)
    b = nx.Graph()
    left = [("L", n) for n in nodes]
    b.add_nodes_from(left)
    b.add_nodes_from(("R", n) for n in nodes)
    b.add_edges_from((("L", u), ("R", v)) for u, v in g.edges)
    matching = nx.bipartite.hopcroft_karp_matching(b, top_nodes=left)
    matched = sum(1 for k in matching if k[0] == "L")
    sizes: dict[Ordinal, int] = {}
    for n in nodes:
        sizes[t.level_of[n]] = sizes.get(t.level_of[n], 0) + 1
    return {"width": len(nodes) - matched, "level_sizes": sizes}


# -- l-infinity nodes ----------------------------------------------------------


@dataclass(frozen=True)
class FinSeqNode:
    values: tuple[int, ...]
    source: tuple[Ordinal, int] | None = field(default=None, compare=False)

    @property
    def dom(self) -> int:
        return len(self.values)

    def restrict(self, delta: int) -> "FinSeqNode":
        return FinSeqNode(self.values[:delta])

    def extends(self, other: "FinSeqNode") -> bool:
        return self.values[: other.dom] == other.values

    def __str__(self):
        return "(" + ",".join(map(str, self.values)) + ")"

    def to_plain(self):
        return list(self.values)


def node(*values: int) -> FinSeqNode:
    return FinSeqNode(tuple(values))


def gen_rho2_node(beta: OrdLike, alpha: int, ctx: WalkContext | None = None) -> FinSeqNode:
    """<rho2(gamma, beta) : gamma < alpha> for a finite alpha <= beta."""
    beta = as_ordinal(beta)
    if alpha < 0 or nat(alpha) > beta:
        raise ValueError(f"need a finite alpha <= beta, got alpha={alpha}, beta={fmt(beta)}")
    return FinSeqNode(tuple(rho2(nat(g), beta, ctx) for g in range(alpha)), (beta, alpha))


def parse_node(text: str) -> FinSeqNode:
    """``(1,2,3)`` or ``rho2 beta=<ord> alpha=<nat>``."""
    text = text.strip()
    if text.startswith("rho2"):
        fields = dict(part.split("=", 1) for part in text.split()[1:])
        return gen_rho2_node(parse(fields["beta"]), int(fields["alpha"]))
    if not (text.startswith("(") and text.endswith(")")):
        raise ValueError(f"node must be a parenthesized tuple: {text!r}")
    body = text[1:-1].strip()
    return FinSeqNode(tuple(int(v) for v in body.split(",")) if body else ())


def norm_diff(s: FinSeqNode, t: FinSeqNode) -> int:
    """max |s(i) - t(i)| over the common domain; 0 if that domain is empty."""
    return max((abs(a - b) for a, b in zip(s.values, t.values)), default=0)


def linf_F_member(s: FinSeqNode, t: FinSeqNode, n: int) -> bool:
    """s ∈ F_n(t): s lies strictly below t's height and within n of t."""
    return s.dom < t.dom and norm_diff(s, t) <= n


def linf_witness_k(s: FinSeqNode, t: FinSeqNode, m: int, n: int) -> int:
    return norm_diff(t, s) + max(m, n)


def linf_meet(s: FinSeqNode, m: int, t: FinSeqNode, n: int) -> tuple[FinSeqNode, int]:
    """(node, k) with F_m(s) ∪ F_n(t) ⊆ F_k(node); the node is the taller of the two."""
    k = linf_witness_k(s, t, m, n)
    return (t, k) if s.dom <= t.dom else (s, k)


def coherence_check(s: FinSeqNode, t: FinSeqNode) -> frozenset[int]:
    return frozenset(i for i, (a, b) in enumerate(zip(s.values, t.values)) if a != b)


def restriction_witness(s: FinSeqNode, delta: int, universe: Iterable[FinSeqNode]) -> FinSeqNode:
    """t on level delta with F_m(s) restricted below delta inside F_m(t).

    Below s's height this is s itself cut at delta; otherwise a stored
    extension of s of length delta.
    """
    if delta < s.dom:
        return s.restrict(delta)
    for u in universe:
        if u.dom == delta and u.extends(s):
            return u
    raise IncompleteData(f"no stored extension of {s} at level {delta}")


@dataclass(frozen=True)
class SampledNorm:
    """A lower bound for a norm over an infinite domain, from finitely many probes."""

    lower_bound: int
    probes: tuple[Ordinal, ...]
    exact: bool = False


def sampled_norm_lower_bound(beta1: OrdLike, beta2: OrdLike, probes: Iterable[OrdLike], ctx: WalkContext | None = None) -> SampledNorm:
    """max |rho2(g, beta1) - rho2(g, beta2)| over the probes g <= min(beta1, beta2)."""
    b1, b2 = as_ordinal(beta1), as_ordinal(beta2)
    low = min(b1, b2)
    ps = tuple(sorted({as_ordinal(p) for p in probes if as_ordinal(p) <= low}))
    value = max((abs(rho2(g, b1, ctx) - rho2(g, b2, ctx)) for g in ps), default=0)
    return SampledNorm(value, ps)


def check_witness_inclusion(universe: Sequence[FinSeqNode], m_range: Iterable[int], n_range: Iterable[int]) -> AxiomResult:
    """F_m(s) ⊆ F_k(t), k = ||t-s|| + max(m, n), for all s, t with dom(s) <= dom(t)."""
    nodes = list(universe)
    size = len(nodes)
    if not size:
        return AxiomResult(PASS, 0, note="vacuous")
    dom = np.array([u.dom for u in nodes])
    norms = np.zeros((size, size), dtype=np.int64)
    for i, j in itertools.combinations(range(size), 2):
        norms[i, j] = norms[j, i] = norm_diff(nodes[i], nodes[j])
    ms, ns = sorted(set(m_range)), sorted(set(n_range))
    tally = Tally()
    for i in range(size):
        below_s = dom < dom[i]
        for j in range(size):
            if dom[i] > dom[j]:
                continue
            for m in ms:
                inside = below_s & (norms[i] <= m)
                for n in ns:
                    k = norms[i, j] + max(m, n)
                    bad = np.nonzero(inside & ~((dom < dom[j]) & (norms[j] <= k)))[0]
                    if not tally.check(bad.size == 0, s=nodes[i], t=nodes[j], m=m, n=n, k=int(k), u=nodes[int(bad[0])] if bad.size else None):
                        return tally.result()
    return tally.result()


def linf_universe(betas: Iterable[OrdLike], max_alpha: int, size: int, ctx: WalkContext | None = None) -> list[FinSeqNode]:
    """Distinct generated nodes rho2(., beta) cut at alpha <= max_alpha, first ``size`` of them."""
    seen: dict[tuple[int, ...], FinSeqNode] = {}
    for beta in betas:
        beta = as_ordinal(beta)
        for a in range(max_alpha + 1):
            if nat(a) > beta:
                break
            u = gen_rho2_node(beta, a, ctx)
            seen.setdefault(u.values, u)
            if len(seen) >= size:
                return list(seen.values())
    return list(seen.values())
