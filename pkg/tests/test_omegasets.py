import random

import pytest
from hypothesis import given, strategies as st

from ordlab.errors import Undecided
from ordlab.limits import LIMITS
from ordlab.omegasets import (
    EMPTY, EP, EVENS, INFINITE, ODDS, OMEGA_SET, Complement, Diagonal, Diff, Fin, Finite, Half,
    Intersect, Mod, UndecidedResult, Union_, ep, fin, finite_elements, finiteness, is_infinite,
    literal, member, normal, parse_set, parse_set_file, residues, sym_diff,
)

# prefixes and cuts stay below 40, periods and moduli at most 6 (lcm 60)
N, TAIL = 400, 200


def bitmap(e) -> int:
    """Bit x set iff x is in e, for x < N.  Half is not covered here."""
    full = (1 << N) - 1
    if isinstance(e, Fin):
        return sum(1 << x for x in e.elems if x < N)
    if isinstance(e, EP):
        bits = list(e.prefix) + [e.period[i % len(e.period)] for i in range(N - len(e.prefix))]
        return sum(1 << i for i, b in enumerate(bits[:N]) if b)
    if isinstance(e, Mod):
        return sum(1 << x for x in range(N)
                   if (x in e.low if x < e.threshold else any(x % d == r for r, d in e.classes)))
    if isinstance(e, Union_):
        out = 0
        for p in e.parts:
            out |= bitmap(p)
        return out
    if isinstance(e, Intersect):
        out = full
        for p in e.parts:
            out &= bitmap(p)
        return out
    if isinstance(e, Diff):
        return bitmap(e.left) & ~bitmap(e.right) & full
    if isinstance(e, Complement):
        return ~bitmap(e.inner) & full
    if isinstance(e, Diagonal):
        out = 0
        for c, cut in zip(e.children, e.cuts):
            out |= bitmap(c) & ~((1 << cut) - 1)
        return out
    raise TypeError(e)


def random_expr(rng: random.Random, depth: int = 3):
    if depth == 0 or rng.random() < 0.3:
        kind = rng.randrange(3)
        if kind == 0:
            return Fin(frozenset(rng.sample(range(40), rng.randrange(5))))
        if kind == 1:
            pre = "".join(rng.choice("01") for _ in range(rng.randrange(8)))
            per = "".join(rng.choice("01") for _ in range(rng.randint(1, 6)))
            return ep(pre, per)
        d = rng.randint(1, 6)
        cls = tuple(sorted({(rng.randrange(d), d) for _ in range(rng.randint(0, 2))}))
        return Mod(rng.randrange(30), frozenset(rng.sample(range(30), 3)), cls)
    kind = rng.randrange(5)
    sub = lambda: random_expr(rng, depth - 1)
    if kind == 0:
        return Union_(tuple(sub() for _ in range(rng.randint(1, 3))))
    if kind == 1:
        return Intersect(tuple(sub() for _ in range(rng.randint(1, 3))))
    if kind == 2:
        return Diff(sub(), sub())
    if kind == 3:
        return Complement(sub())
    k = rng.randint(1, 3)
    cuts = sorted(rng.sample(range(40), k))
    return Diagonal(tuple(sub() for _ in range(k)), tuple(cuts))


EXPRS = [random_expr(random.Random(i)) for i in range(1200)]


def test_member_examples():
    assert member(EVENS, 4) and not member(EVENS, 5)
    assert member(ep("0110", "01"), 2) and member(ep("0110", "01"), 5) and not member(ep("0110", "01"), 4)
    assert member(Diagonal((EVENS, ODDS), (0, 10)), 11)
    assert not member(Diagonal((EVENS, ODDS), (0, 10)), 9)
    assert not member(OMEGA_SET, -1)
    assert member(Complement(fin(1, 2)), 3)


def test_finiteness_examples():
    assert finiteness(fin(3, 1)) == Finite(frozenset({1, 3}))
    assert finiteness(EVENS) is INFINITE
    assert finiteness(Intersect((EVENS, ODDS))) == Finite(frozenset())
    assert finiteness(sym_diff(EVENS, ep("1010", "10"))) == Finite(frozenset())
    assert finite_elements(Diff(fin(1, 2, 4), EVENS)) == {1}
    # disjoint classes mod 2 and mod 3 leave the classes 1 and 5 mod 6
    assert is_infinite(Diff(ODDS, residues(3, 0)))
    assert finiteness(Union_((residues(3, 0), residues(3, 1), residues(3, 2)))) is INFINITE
    assert finiteness(EMPTY) == Finite(frozenset())
    with pytest.raises(ValueError):
        finite_elements(ODDS)


def test_half_examples():
    assert normal(Half(EVENS)) == normal(residues(4, 0))
    assert finiteness(Half(fin(1, 3, 5, 7))) == Finite(frozenset({1, 5}))
    # each residue class is thinned on its own
    h = Half(Union_((residues(3, 0), residues(3, 1))))
    assert [x for x in range(14) if member(h, x)] == [0, 1, 6, 7, 12, 13]


def test_budget_gives_undecided(monkeypatch):
    monkeypatch.setattr(LIMITS, "residue_classes", 2)
    normal.cache_clear()
    try:
        e = Complement(Union_((residues(5, 0), residues(7, 0))))
        r = finiteness(e, scan_bound=20)
        assert isinstance(r, UndecidedResult)
        assert r.members_seen == tuple(x for x in range(20) if x % 5 and x % 7)
        with pytest.raises(Undecided):
            is_infinite(e)
    finally:
        normal.cache_clear()


def test_bitmap_oracle_agrees():
    for e in EXPRS:
        bits = bitmap(e)
        nf = normal(e)
        for x in range(N):
            want = bool(bits >> x & 1)
            assert member(e, x) == want, (str(e), x)
            assert (x in nf) == want, (str(e), x)


def test_finiteness_matches_scan():
    for e in EXPRS:
        bits = bitmap(e)
        r = finiteness(e)
        if bits >> TAIL:
            assert r is INFINITE, str(e)
        else:
            assert r == Finite(frozenset(x for x in range(TAIL) if bits >> x & 1)), str(e)


def test_literal_is_equivalent():
    for e in EXPRS[:300]:
        assert bitmap(literal(e)) == bitmap(e)


def test_text_round_trip():
    for e in EXPRS[:300] + [Half(EVENS), EMPTY]:
        assert parse_set(str(e)) == e


def test_set_file():
    env = parse_set_file("E = (ep period=10)  # evens\nH = (half E)\nX = (diff (comp E) (fin 1))\n")
    assert member(env["H"], 4) and not member(env["H"], 2)
    assert not member(env["X"], 1) and member(env["X"], 3)
    with pytest.raises(ValueError):
        parse_set_file("E (ep period=1)")
    with pytest.raises(ValueError):
        parse_set("(union Q)")
    with pytest.raises(ValueError):
        parse_set("(ep period=)")


@given(st.lists(st.integers(0, 60), max_size=8), st.integers(1, 6), st.integers(0, 5))
def test_half_keeps_every_other(xs, d, r):
    r %= d
    e = Union_((Fin(frozenset(xs)), residues(d, r)))
    h = normal(Half(e))
    nf = normal(e)
    assert all(x in nf for x in range(300) if x in h)
    # inside each class above the threshold members alternate
    for rr, dd in nf.classes:
        run = [x for x in range(nf.threshold, nf.threshold + 20 * dd) if x % dd == rr]
        assert [x in h for x in run] == [i % 2 == 0 for i in range(len(run))]
