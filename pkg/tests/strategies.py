"""Hypothesis strategies shared across the test modules."""

from hypothesis import strategies as st

from ordlab.ordinals import Ordinal, nat


def cnf(max_exp: int = 4, max_coef: int = 5, max_terms: int = 3):
    """Ordinals below w^(max_exp+1) with finite exponents."""
    terms = st.dictionaries(st.integers(0, max_exp), st.integers(1, max_coef), max_size=max_terms)
    return terms.map(lambda d: Ordinal(tuple((nat(e), c) for e, c in sorted(d.items(), reverse=True))))


def deep(max_depth: int = 2):
    """Ordinals whose exponents may themselves be infinite."""
    base = cnf(3, 4, 2)
    ords = st.recursive(
        base,
        lambda inner: st.lists(st.tuples(inner, st.integers(1, 4)), min_size=1, max_size=3).map(_build),
        max_leaves=6,
    )
    return ords


def _build(pairs):
    merged = {}
    for e, c in pairs:
        merged[e] = merged.get(e, 0) + c
    return Ordinal(tuple((e, merged[e]) for e in sorted(merged, reverse=True)))


def pair(strategy=None):
    if strategy is None:
        strategy = cnf()
    return st.tuples(strategy, strategy).map(lambda p: tuple(sorted(p)))


def triple(strategy=None):
    if strategy is None:
        strategy = cnf()
    return st.tuples(strategy, strategy, strategy).map(lambda p: tuple(sorted(p)))
