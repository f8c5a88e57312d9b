import pytest
from hypothesis import given, strategies as st

from ordlab.errors import NotALimitError, OrdinalOverflowError, OrdinalSyntaxError
from ordlab.limits import LIMITS
from ordlab.ordinals import (
    OMEGA, Ordinal, add, c_count, c_elements_below, c_split, c_split_scan, c_step, cmp, fmt,
    fund_seq, in_c_seq, mul_omega_left, nat, parse, w_pow,
)

from strategies import cnf, deep, triple

W = parse


class TestParse:
    def test_zero(self):
        assert parse("0") == Ordinal(())
        assert parse("0").terms == ()

    def test_polynomial(self):
        a = parse("w^2*3+w+4")
        assert a.terms == ((nat(2), 3), (nat(1), 1), (nat(0), 4))

    def test_tower_exponent(self):
        assert parse("w^w").terms == ((OMEGA, 1),)

    def test_parenthesized_exponent(self):
        assert parse("w^(w+1)*2") == w_pow(add(OMEGA, nat(1)), 2)

    @pytest.mark.parametrize("bad", ["", "w+", "w^", "3w", "w*0", "w+w^2", "1+w", "w^(", "x"])
    def test_rejects(self, bad):
        with pytest.raises(OrdinalSyntaxError):
            parse(bad)

    @given(deep())
    def test_round_trip(self, a):
        assert parse(fmt(a)) == a

    def test_canonical_output(self):
        assert fmt(parse("w^1*1+w^0*3")) == "w+3"
        assert fmt(parse("w^(w)")) == "w^w"


class TestCompare:
    def test_examples(self):
        assert cmp(OMEGA, 5) == 1
        assert cmp(W("w*2+1"), W("w*2+1")) == 0
        assert cmp(W("w^2"), W("w*7")) == 1

    @given(deep(), deep(), deep())
    def test_total_order(self, a, b, c):
        assert cmp(a, b) == -cmp(b, a)
        if cmp(a, b) <= 0 and cmp(b, c) <= 0:
            assert cmp(a, c) <= 0
        assert (cmp(a, b) == 0) == (a == b)


class TestAdd:
    def test_examples(self):
        assert add(3, OMEGA) == OMEGA
        assert add(OMEGA, 3) == W("w+3")
        assert add(W("w^2+w"), W("w*2")) == W("w^2+w*3")

    @given(triple(deep()))
    def test_associative(self, t):
        a, b, c = t
        assert add(add(a, b), c) == add(a, add(b, c))

    @given(deep(), deep(), deep())
    def test_monotone_right(self, a, b, c):
        if b < c:
            assert add(a, b) < add(a, c)


class TestMulOmega:
    def test_examples(self):
        assert mul_omega_left(1) == OMEGA
        assert mul_omega_left(OMEGA) == W("w^2")
        assert mul_omega_left(W("w^w*2+3")) == W("w^w*2+w*3")

    def test_fixed_points(self):
        assert mul_omega_left(W("w^w")) == W("w^w")
        assert mul_omega_left(W("w^w*2")) == W("w^w*2")


class TestFundSeq:
    def test_examples(self):
        assert fund_seq(OMEGA, 3) == nat(3)
        assert fund_seq(W("w^2"), 2) == W("w*2")
        assert fund_seq(W("w^w"), 2) == W("w^2")

    @pytest.mark.parametrize("bad", ["0", "5", "w+1"])
    def test_needs_limit(self, bad):
        with pytest.raises(NotALimitError):
            fund_seq(W(bad), 1)

    @given(deep(), st.integers(0, 20))
    def test_increasing_below(self, lam, n):
        if not lam.is_limit:
            return
        assert fund_seq(lam, n) < fund_seq(lam, n + 1) < lam


class TestCSequence:
    def test_examples(self):
        assert (c_count(OMEGA, 4), c_step(OMEGA, 4)) == (4, nat(4))
        a = W("w^2+3")
        assert (c_count(add(a, 1), a), c_step(add(a, 1), a)) == (0, a)
        assert (c_count(W("w^2"), W("w+1")), c_step(W("w^2"), W("w+1"))) == (2, W("w*2"))

    def test_alpha_above_beta(self):
        with pytest.raises(ValueError):
            c_count(nat(3), nat(5))

    @given(deep(), deep())
    def test_split_matches_scan(self, x, y):
        alpha, beta = sorted((x, y))
        if alpha == beta:
            return
        assert c_split(beta, alpha) == c_split_scan(beta, alpha)

    @given(deep(), deep())
    def test_step_is_least_member_above(self, x, y):
        alpha, beta = sorted((x, y))
        if alpha == beta:
            return
        k, step = c_split(beta, alpha)
        assert in_c_seq(beta, step) or (beta.is_successor and step == beta.pred())
        assert alpha <= step <= beta
        assert len(c_elements_below(beta, alpha)) == k
        if beta.is_limit:
            assert all(fund_seq(beta, i) < alpha for i in range(k))
            assert fund_seq(beta, k) == step

    def test_membership(self):
        assert in_c_seq(OMEGA, nat(7))
        assert in_c_seq(W("w^2"), W("w*5"))
        assert not in_c_seq(W("w^2"), W("w*5+1"))


def test_coefficient_guard():
    with pytest.raises(OrdinalOverflowError):
        nat(LIMITS.nat_guard + 1)
