"""Reference implementations used to cross-check the fast paths.

These follow the defining recursions literally: one walk step at a time,
C-sequence elements found by scanning, no memo tables.
"""

from __future__ import annotations

from .ordinals import Ordinal, OrdLike, add, as_ordinal, c_split_scan, fund_seq, nat


def c_below(beta: Ordinal, alpha: Ordinal) -> tuple[list[Ordinal], Ordinal]:
    """(C_beta ∩ alpha, min(C_beta ∖ alpha)) by scanning."""
    if beta.is_successor:
        p = beta.pred()
        return ([p], None) if p < alpha else ([], p)
    k, step = c_split_scan(beta, alpha)
    return [fund_seq(beta, i) for i in range(k)], step


def naive_rho(alpha: OrdLike, beta: OrdLike) -> int:
    alpha, beta = as_ordinal(alpha), as_ordinal(beta)
    if alpha == beta:
        return 0
    below, step = c_below(beta, alpha)
    vals = [len(below), naive_rho(alpha, step)]
    vals += [naive_rho(xi, alpha) for xi in below]
    return max(vals)


def naive_rho1(alpha: OrdLike, beta: OrdLike) -> int:
    alpha, beta = as_ordinal(alpha), as_ordinal(beta)
    if alpha == beta:
        return 0
    below, step = c_below(beta, alpha)
    return max(len(below), naive_rho1(alpha, step))


def naive_rho2(alpha: OrdLike, beta: OrdLike) -> int:
    alpha, beta = as_ordinal(alpha), as_ordinal(beta)
    if alpha == beta:
        return 0
    _below, step = c_below(beta, alpha)
    return naive_rho2(alpha, step) + 1


def below_omega_times(j: int, window: int) -> list[Ordinal]:
    """w*i + n for i <= j, n < window (the finite part of each block is cut)."""
    out = []
    for i in range(j + 1):
        base = Ordinal(((nat(1), i),)) if i else nat(0)
        out.extend(add(base, nat(n)) for n in range(window))
    return out


def brute_sublevel(alpha: OrdLike, c: int, window: int = 40, fn=naive_rho) -> frozenset[Ordinal]:
    """{xi <= alpha : fn(xi, alpha) <= c} for alpha < w^2, scanning xi = w*i + n with n < window.

    For xi = w*i + n below the last block of alpha the walk passes through
    w*(i+1), whose C-set puts n elements below xi, so rho(xi, alpha) >= n and
    a window above c misses nothing.  The last block is covered outright.
    """
    alpha = as_ordinal(alpha)
    j = alpha.terms[0][1] if alpha.terms and alpha.terms[0][0] == nat(1) else 0
    if alpha.is_finite:
        cands = [nat(n) for n in range(int(alpha) + 1)]
    else:
        m = int(alpha.terms[-1][1]) if alpha.terms[-1][0] == nat(0) else 0
        last = [add(Ordinal(((nat(1), j),)), nat(n)) for n in range(m + 1)]
        cands = sorted({x for x in below_omega_times(j, window) if x <= alpha} | set(last))
    return frozenset(x for x in cands if fn(x, alpha) <= c)
