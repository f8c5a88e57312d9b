import random

import pytest
from hypothesis import given, settings, strategies as st

from ordlab.errors import Unsupported
from ordlab.groups import (
    IDENTITY, Basic, Counterexample, GroupElement, Subbase, TailIndex, check_subbase_directed,
    converges, in_neighborhood, parse_element, restriction_cover, sym_diff, verify_group_axioms,
)
from ordlab.matrix import FlippedProvider, rho1_provider, rho_F, rho_provider
from ordlab.ordinals import OMEGA, nat, parse
from ordlab.report import FAIL, PASS, SKIPPED

from strategies import cnf

W = parse
UNIVERSE = [nat(i) for i in range(22)] + [W(s) for s in ("w", "w+1", "w+2", "w*2", "w*2+1", "w*3", "w^2", "w^2+w")]

elements = st.frozensets(cnf(2, 3), max_size=4).map(GroupElement.of)


def E(*xs):
    return GroupElement.of(W(x) if isinstance(x, str) else x for x in xs)


def test_sym_diff_examples():
    assert sym_diff(E(1, 2), E(2, 3)) == E(1, 3)
    a = E(1, "w", "w^2")
    assert sym_diff(a, a) == IDENTITY
    assert sym_diff(a, IDENTITY) == a


@given(elements, elements, elements)
def test_group_laws(a, b, c):
    assert (a ^ b) ^ c == a ^ (b ^ c)
    assert a ^ b == b ^ a
    assert a ^ IDENTITY == a
    assert a ^ a == IDENTITY


def test_parse_element():
    assert parse_element("{w, 1, 1}") == E(1, "w")
    assert parse_element("{}") == IDENTITY
    with pytest.raises(ValueError):
        parse_element("1,2")


def test_in_neighborhood_examples():
    p = rho_provider()
    U = Basic(0, OMEGA, p)
    assert in_neighborhood(E(1), U)
    assert not in_neighborhood(E(0), U)
    assert in_neighborhood(IDENTITY, U)


def test_basic_requires_index():
    p = rho1_provider()
    tree_like = type(p)(p.r, index_set=lambda a: a == OMEGA)
    with pytest.raises(ValueError):
        Basic(0, nat(3), tree_like)


def test_subbase_needs_K():
    with pytest.raises(ValueError):
        Subbase(frozenset(), rho_provider())


def _base(p):
    return [Basic(x, a, p) for a in (OMEGA, W("w*2"), W("w^2"), W("w^2+w")) for x in (0, 1, 3)]


def test_axioms_pass_on_rho():
    rng = random.Random(5)
    elems = {IDENTITY}
    while len(elems) < 100:
        elems.add(GroupElement.of(rng.sample(UNIVERSE, rng.randint(1, 3))))
    rep = verify_group_axioms(_base(rho_provider()), sorted(elems), seed=5, probe_universe=UNIVERSE)
    for k in "123456":
        assert rep.status(k) == PASS, (k, rep.to_plain())


def test_corrupted_provider_breaks_meet():
    p = FlippedProvider(rho_provider(), nat(1), 3, OMEGA)
    rep = verify_group_axioms([Basic(1, OMEGA, p), Basic(3, OMEGA, p)], [E(1), E(2)], probe_universe=UNIVERSE)
    assert rep.status("5") == FAIL
    assert rep["5"].counterexample["element"] == E(1)


def test_empty_elements():
    rep = verify_group_axioms(_base(rho_provider()), [])
    assert all(rep.status(k) == PASS for k in "1234")
    assert rep.status("6") == SKIPPED


@settings(max_examples=100)
@given(elements, st.integers(0, 4), st.integers(0, 5), st.sampled_from([OMEGA, W("w*2"), W("w^2"), W("w^3")]))
def test_neighborhoods_shrink_as_xi_grows(a, x, d, alpha):
    p = rho_provider()
    if in_neighborhood(a, Basic(x + d, alpha, p)):
        assert in_neighborhood(a, Basic(x, alpha, p))


@settings(max_examples=100)
@given(elements, st.integers(0, 4), st.sampled_from([OMEGA, W("w*2+1"), W("w^2"), W("w^3")]))
def test_membership_via_rho_F(a, xi, alpha):
    p = rho_provider()
    expect = all(rho_F(p, g, alpha) > xi for g in a if g < alpha)
    assert in_neighborhood(a, Basic(xi, alpha, p)) == expect


def test_converges_examples():
    p = rho_provider()
    U = Basic(0, OMEGA, p)
    assert converges([E(n) for n in range(21)], U) == TailIndex(1)
    assert converges([IDENTITY] * 5, U) == TailIndex(0)
    assert converges([E(0)] * 4, U) == Counterexample((0, 1, 2, 3))


def test_restriction_cover_examples():
    p = rho_provider()
    assert restriction_cover(OMEGA, 0, W("w*2"), p) == 0
    assert p.enumerate(0, W("w*2")) & {nat(i) for i in range(50)} == {nat(0)}
    assert restriction_cover(W("w^2"), 3, W("w^2"), p) == 3
    with pytest.raises(Unsupported):
        restriction_cover(OMEGA, 0, W("w*2"), rho1_provider())


@settings(max_examples=60)
@given(st.sampled_from(UNIVERSE[10:]), st.sampled_from(UNIVERSE[10:]), st.integers(0, 5))
def test_restriction_cover_self_check(delta, alpha, xi):
    p = rho_provider()
    eta = restriction_cover(delta, xi, alpha, p)
    for g in p.enumerate(xi, alpha):
        if g < delta:
            assert p.member(g, eta, delta)


@settings(max_examples=60)
@given(
    st.frozensets(st.tuples(st.integers(0, 3), st.sampled_from(UNIVERSE[20:])), min_size=1, max_size=3),
    st.frozensets(st.tuples(st.integers(0, 3), st.sampled_from(UNIVERSE[20:])), min_size=1, max_size=3),
)
def test_subbase_directed(K1, K2):
    assert check_subbase_directed(K1, K2, rho_provider(), UNIVERSE)
