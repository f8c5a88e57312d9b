"""Decidable subsets of omega.

Expressions are built from eventually periodic sets, boolean operators,
guarded diagonal unions and ``half``.  Decisions go through a normal form:
a finite set below a threshold plus a disjoint union of residue classes
``{x >= threshold : x ≡ r (mod d)}``.  Every operator maps normal forms to
normal forms, so finiteness is decided exactly; only a blown class budget
yields Undecided.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Union

from .errors import Undecided
from .limits import LIMITS

# -- expressions ---------------------------------------------------------------


@dataclass(frozen=True)
class EP:
    """prefix bits, then the period word repeated forever."""

    prefix: tuple[int, ...]
    period: tuple[int, ...]

    def __post_init__(self):
        if not self.period:
            raise ValueError("period word must be nonempty")
        if any(b not in (0, 1) for b in self.prefix + self.period):
            raise ValueError("bits must be 0 or 1")

    def __str__(self):
        return f"(ep prefix={''.join(map(str, self.prefix))} period={''.join(map(str, self.period))})"


@dataclass(frozen=True)
class Fin:
    elems: frozenset[int]

    def __str__(self):
        return "(fin" + "".join(f" {x}" for x in sorted(self.elems)) + ")"


@dataclass(frozen=True)
class Union_:
    parts: tuple

    def __str__(self):
        return "(union " + " ".join(map(str, self.parts)) + ")"


@dataclass(frozen=True)
class Intersect:
    parts: tuple

    def __str__(self):
        return "(inter " + " ".join(map(str, self.parts)) + ")"


@dataclass(frozen=True)
class Diff:
    left: object
    right: object

    def __str__(self):
        return f"(diff {self.left} {self.right})"


@dataclass(frozen=True)
class Complement:
    inner: object

    def __str__(self):
        return f"(comp {self.inner})"


@dataclass(frozen=True)
class Diagonal:
    """⋃_i (children[i] ∖ [0, cuts[i]))."""

    children: tuple
    cuts: tuple[int, ...]

    def __post_init__(self):
        if len(self.children) != len(self.cuts):
            raise ValueError("diagonal needs one cut per child")
        if any(b <= a for a, b in zip(self.cuts, self.cuts[1:])):
            raise ValueError("diagonal cuts must strictly increase")

    def __str__(self):
        return "(diag (" + " ".join(map(str, self.children)) + ") cuts=(" + " ".join(map(str, self.cuts)) + "))"


@dataclass(frozen=True)
class Half:
    """Every other element of each residue class of the normal form (first one kept)."""

    inner: object

    def __str__(self):
        return f"(half {self.inner})"


@dataclass(frozen=True)
class Mod:
    """A normal form written out: low ∪ {x >= threshold : x ≡ r (mod d)}."""

    threshold: int
    low: frozenset[int]
    classes: tuple[tuple[int, int], ...]

    def __str__(self):
        low = " ".join(map(str, sorted(self.low)))
        cls = " ".join(f"{r}/{d}" for r, d in self.classes)
        return f"(mod threshold=({self.threshold}) low=({low}) classes=({cls}))"


OmegaSetExpr = Union[EP, Fin, Mod, Union_, Intersect, Diff, Complement, Diagonal, Half]


def ep(prefix: str, period: str) -> EP:
    return EP(tuple(int(c) for c in prefix), tuple(int(c) for c in period))


def fin(*xs: int) -> Fin:
    return Fin(frozenset(xs))


def residues(modulus: int, *rs: int) -> EP:
    """{x : x mod modulus in rs}."""
    return EP((), tuple(1 if i in rs else 0 for i in range(modulus)))


EVENS = residues(2, 0)
ODDS = residues(2, 1)
OMEGA_SET = EP((), (1,))
EMPTY = Fin(frozenset())


def union(*parts) -> Union_:
    return Union_(tuple(parts))


def inter(*parts) -> Intersect:
    return Intersect(tuple(parts))


# -- normal form -----------------------------------------------------------------


def _crt(r1: int, d1: int, r2: int, d2: int) -> tuple[int, int] | None:
    g = math.gcd(d1, d2)
    if (r2 - r1) % g:
        return None
    lcm = d1 // g * d2
    # solve r1 + d1*k ≡ r2 (mod d2)
    k = ((r2 - r1) // g * pow(d1 // g, -1, d2 // g)) % (d2 // g) if d2 // g > 1 else 0
    return (r1 + d1 * k) % lcm, lcm


def _prime_factors(n: int) -> list[int]:
    out, p = [], 2
    while p * p <= n:
        while n % p == 0:
            out.append(p)
            n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def _class_minus(a: tuple[int, int], b: tuple[int, int]) -> list[tuple[int, int]]:
    """Residue class a minus class b, as disjoint classes."""
    meet = _crt(*a, *b)
    if meet is None:
        return [a]
    r, d = a
    t, big = meet
    out = []
    # refine a one prime at a time toward the modulus of the intersection
    for p in _prime_factors(big // d):
        for j in range(p):
            piece = ((r + j * d) % (d * p), d * p)
            if (t - piece[0]) % piece[1] != 0:
                out.append(piece)
        r, d = t % (d * p), d * p
    return out


def _merge(classes: list[tuple[int, int]]) -> list[tuple[int, int]]:
    """Merge complete sibling families (r + j*d/p for all j < p) into one class."""
    cs = set(classes)
    changed = True
    while changed:
        changed = False
        for r, d in sorted(cs, key=lambda c: -c[1]):
            if (r, d) not in cs or d == 1:
                continue
            for p in sorted(set(_prime_factors(d))):
                q = d // p
                family = {((r % q) + j * q, d) for j in range(p)}
                if family <= cs:
                    cs -= family
                    cs.add((r % q, q))
                    changed = True
                    break
    return sorted(cs, key=lambda c: (c[1], c[0]))


def _check_budget(classes):
    if len(classes) > LIMITS.residue_classes:
        raise Undecided(f"normal form exceeds {LIMITS.residue_classes} residue classes")


@dataclass(frozen=True)
class ModSet:
    """low ∪ {x >= threshold : x ≡ r (mod d) for some (r, d) in classes}."""

    threshold: int
    low: frozenset[int]
    classes: tuple[tuple[int, int], ...]

    def __contains__(self, x: int) -> bool:
        if x < self.threshold:
            return x in self.low
        return any(x % d == r for r, d in self.classes)

    def lift(self, threshold: int) -> "ModSet":
        if threshold <= self.threshold:
            return self
        low = self.low | {x for x in range(self.threshold, threshold) if x in self}
        return ModSet(threshold, frozenset(low), self.classes)

    @property
    def finite(self) -> bool:
        return not self.classes

    def first_at_least(self, n: int) -> int | None:
        """Least member >= n, or None if there is none."""
        below = [x for x in self.low if x >= n]
        if below:
            return min(below)
        start = max(n, self.threshold)
        best = None
        for r, d in self.classes:
            x = start + (r - start) % d
            best = x if best is None else min(best, x)
        return best

    def max_member(self) -> int | None:
        if self.classes:
            raise ValueError("infinite set has no maximum")
        return max(self.low, default=None)


def _mod_union(a: ModSet, b: ModSet) -> ModSet:
    n = max(a.threshold, b.threshold)
    a, b = a.lift(n), b.lift(n)
    out = list(a.classes)
    for c in b.classes:
        pieces = [c]
        for e in a.classes:
            pieces = [q for p in pieces for q in _class_minus(p, e)]
        out.extend(pieces)
    out = _merge(out)
    _check_budget(out)
    return ModSet(n, a.low | b.low, tuple(out))


def _mod_inter(a: ModSet, b: ModSet) -> ModSet:
    n = max(a.threshold, b.threshold)
    a, b = a.lift(n), b.lift(n)
    out = []
    for c in a.classes:
        for e in b.classes:
            m = _crt(*c, *e)
            if m is not None:
                out.append(m)
    out = _merge(out)
    _check_budget(out)
    return ModSet(n, a.low & b.low, tuple(out))


def _mod_comp(a: ModSet) -> ModSet:
    pieces = [(0, 1)]
    for e in a.classes:
        pieces = [q for p in pieces for q in _class_minus(p, e)]
        _check_budget(pieces)
    low = frozenset(range(a.threshold)) - a.low
    return ModSet(a.threshold, low, tuple(_merge(pieces)))


def _mod_cut(a: ModSet, cut: int) -> ModSet:
    a = a.lift(cut)
    return ModSet(a.threshold, frozenset(x for x in a.low if x >= cut), a.classes)


def _mod_half(a: ModSet) -> ModSet:
    low = sorted(a.low)[::2]
    classes = []
    for r, d in a.classes:
        x0 = a.threshold + (r - a.threshold) % d
        classes.append((x0 % (2 * d), 2 * d))
    return ModSet(a.threshold, frozenset(low), tuple(_merge(classes)))


@lru_cache(maxsize=4096)
def normal(e) -> ModSet:
    """Normal form of an expression (exact)."""
    if isinstance(e, EP):
        L, P = len(e.prefix), len(e.period)
        low = frozenset(i for i, b in enumerate(e.prefix) if b)
        classes = [((L + i) % P, P) for i, b in enumerate(e.period) if b]
        return ModSet(L, low, tuple(_merge(classes)))
    if isinstance(e, Fin):
        top = max(e.elems, default=-1) + 1
        return ModSet(top, e.elems, ())
    if isinstance(e, Mod):
        return ModSet(e.threshold, frozenset(x for x in e.low if x < e.threshold), tuple(_merge(list(e.classes))))
    if isinstance(e, Union_):
        out = ModSet(0, frozenset(), ())
        for p in e.parts:
            out = _mod_union(out, normal(p))
        return out
    if isinstance(e, Intersect):
        out = ModSet(0, frozenset(), ((0, 1),))
        for p in e.parts:
            out = _mod_inter(out, normal(p))
        return out
    if isinstance(e, Diff):
        return _mod_inter(normal(e.left), _mod_comp(normal(e.right)))
    if isinstance(e, Complement):
        return _mod_comp(normal(e.inner))
    if isinstance(e, Diagonal):
        out = ModSet(0, frozenset(), ())
        for child, cut in zip(e.children, e.cuts):
            out = _mod_union(out, _mod_cut(normal(child), cut))
        return out
    if isinstance(e, Half):
        return _mod_half(normal(e.inner))
    raise TypeError(f"not an omega-set expression: {e!r}")


# -- queries -------------------------------------------------------------------


def member(e, x: int) -> bool:
    """Direct evaluation; ``half`` goes through the normal form."""
    if x < 0:
        return False
    if isinstance(e, EP):
        L = len(e.prefix)
        return bool(e.prefix[x]) if x < L else bool(e.period[(x - L) % len(e.period)])
    if isinstance(e, Fin):
        return x in e.elems
    if isinstance(e, Mod):
        return x in e.low if x < e.threshold else any(x % d == r for r, d in e.classes)
    if isinstance(e, Union_):
        return any(member(p, x) for p in e.parts)
    if isinstance(e, Intersect):
        return all(member(p, x) for p in e.parts)
    if isinstance(e, Diff):
        return member(e.left, x) and not member(e.right, x)
    if isinstance(e, Complement):
        return not member(e.inner, x)
    if isinstance(e, Diagonal):
        # only children with cut <= x can contribute
        return any(cut <= x and member(c, x) for c, cut in zip(e.children, e.cuts))
    if isinstance(e, Half):
        return x in normal(e)
    raise TypeError(f"not an omega-set expression: {e!r}")


@dataclass(frozen=True)
class Finite:
    elems: frozenset[int]


class _Infinite:
    def __repr__(self):
        return "Infinite"


INFINITE = _Infinite()


@dataclass(frozen=True)
class UndecidedResult:
    reason: str
    scan_bound: int
    members_seen: tuple[int, ...]


def literal(e) -> Mod:
    """The normal form of e as an expression."""
    m = normal(e)
    return Mod(m.threshold, m.low, m.classes)


def finiteness(e, scan_bound: int = 1000):
    """Finite(exact set), INFINITE, or UndecidedResult with a scan report."""
    try:
        m = normal(e)
    except Undecided as exc:
        seen = tuple(x for x in range(scan_bound) if member(e, x))
        return UndecidedResult(str(exc), scan_bound, seen)
    if m.finite:
        return Finite(m.low)
    return INFINITE


def finite_elements(e) -> frozenset[int]:
    """The elements of a set that must be finite; raises Undecided otherwise."""
    r = finiteness(e)
    if isinstance(r, Finite):
        return r.elems
    if r is INFINITE:
        raise ValueError(f"{e} is infinite")
    raise Undecided(r.reason)


def is_infinite(e) -> bool:
    r = finiteness(e)
    if isinstance(r, UndecidedResult):
        raise Undecided(r.reason)
    return r is INFINITE


def sym_diff(a, b):
    return union(Diff(a, b), Diff(b, a))


# -- text format ---------------------------------------------------------------

_TOKEN = re.compile(r"\(|\)|[^\s()]+")


def _tokens(text: str) -> list[str]:
    return _TOKEN.findall(text)


def parse_set(text: str, env: dict[str, object] | None = None):
    """Parse one expression; bare names are looked up in ``env``."""
    env = env or {}
    toks = _tokens(text)
    pos = 0

    def take():
        nonlocal pos
        if pos >= len(toks):
            raise ValueError(f"unexpected end of set expression: {text!r}")
        tok = toks[pos]
        pos += 1
        return tok

    def expr():
        tok = take()
        if tok != "(":
            if tok not in env:
                raise ValueError(f"unknown set name {tok!r}")
            return env[tok]
        head = take()
        if head == "ep":
            fields = {}
            while toks[pos] != ")":
                key, _, val = take().partition("=")
                fields[key] = val
            take()
            return ep(fields.get("prefix", ""), fields["period"])
        if head == "fin":
            xs = []
            while toks[pos] != ")":
                xs.append(int(take()))
            take()
            return Fin(frozenset(xs))
        if head == "mod":
            fields = {}
            while toks[pos] != ")":
                key = take()
                if take() != "(":
                    raise ValueError("mod fields are written key=(...)")
                vals = []
                while toks[pos] != ")":
                    vals.append(take())
                take()
                fields[key] = vals
            take()
            if set(fields) != {"threshold=", "low=", "classes="} or len(fields["threshold="]) != 1:
                raise ValueError("mod needs threshold=(n) low=(...) classes=(r/d ...)")
            classes = []
            for item in fields["classes="]:
                r, _, d = item.partition("/")
                r, d = int(r), int(d)
                if d < 1 or not 0 <= r < d:
                    raise ValueError(f"bad residue class {item!r}")
                classes.append((r, d))
            return Mod(int(fields["threshold="][0]), frozenset(int(x) for x in fields["low="]), tuple(classes))
        if head == "diag":
            if take() != "(":
                raise ValueError("diag expects a parenthesized child list")
            kids = []
            while toks[pos] != ")":
                kids.append(expr())
            take()
            if take() != "cuts=" or take() != "(":
                raise ValueError("diag expects cuts=(...)")
            cuts = []
            while toks[pos] != ")":
                cuts.append(int(take()))
            take()
            take()
            return Diagonal(tuple(kids), tuple(cuts))
        args = []
        while toks[pos] != ")":
            args.append(expr())
        take()
        if head == "union":
            return Union_(tuple(args))
        if head == "inter":
            return Intersect(tuple(args))
        if head == "diff" and len(args) == 2:
            return Diff(*args)
        if head == "comp" and len(args) == 1:
            return Complement(args[0])
        if head == "half" and len(args) == 1:
            return Half(args[0])
        raise ValueError(f"bad set operator {head!r} with {len(args)} arguments")

    out = expr()
    if pos != len(toks):
        raise ValueError(f"trailing text in set expression: {text!r}")
    return out


def parse_set_file(text: str) -> dict[str, object]:
    """Lines ``NAME = <expr>``; later lines may refer to earlier names."""
    env: dict[str, object] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        name, eq, body = line.partition("=")
        if not eq or not name.strip().isidentifier():
            raise ValueError(f"line {lineno}: expected NAME = <expr>")
        env[name.strip()] = parse_set(body, env)
    return env
