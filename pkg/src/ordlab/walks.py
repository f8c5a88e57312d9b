"""Walk characteristics rho, rho1, rho2, rho-bar under the canonical C-sequence.

The walk from beta down to alpha steps ``beta -> min(C_beta \\ alpha)`` until
it reaches alpha.  Each characteristic is a fold over the steps of that walk:

* rho1: max of ``|C_{beta_i} ∩ alpha|`` over the steps,
* rho: the same max, also taking ``rho(xi, alpha)`` for every
  ``xi ∈ C_{beta_i} ∩ alpha``,
* rho2: the number of steps.

Successor steps contribute nothing to rho and rho1 (``C_{d+1} ∩ alpha`` is
empty when ``d >= alpha``), so runs of successor steps are skipped in bulk.

Sublevel sets ``{xi <= alpha : rho(xi, alpha) <= c}`` are enumerated exactly.
For a limit alpha, any such xi satisfies ``|C_alpha ∩ xi| <= rho1(xi, alpha)
<= rho(xi, alpha) <= c``, so with ``k = |C_alpha ∩ xi|`` the walk's first step
lands on ``alpha[k]`` with ``k <= c``, and both characteristics only grow along
the walk, so ``xi`` lies in the sublevel set of ``alpha[k]``.  Candidates for a
limit alpha are therefore ``{alpha} ∪ sublevel(alpha[0..c], c)``, filtered; the
k-th of those sets only needs its part above ``alpha[k-1]``, since that is
where ``|C_alpha ∩ xi| = k``.
"""

from __future__ import annotations

import threading
from collections import Counter
from typing import Callable

from .errors import MemoLimitError, OrdinalOverflowError, Unsupported, WalkDepthError
from .limits import LIMITS
from .ordinals import Ordinal, OrdLike, as_ordinal, c_split, fund_seq, nat

FUNCTIONS = ("rho", "rho1", "rho2", "rhobar")


class WalkContext:
    """Memo store for walk characteristics.

    Entries are written once and never change.  A context may be shared by
    threads: CPython dict assignment is atomic and every stored value is
    complete before it is published.  Writers serialize on ``lock`` only when
    growing the sublevel cache, whose values are built before insertion.
    """

    def __init__(self):
        self.memo: dict[str, dict] = {"rho": {}, "rho1": {}, "rho2": {}}
        self.sublevels: dict[tuple, frozenset] = {}
        self.stats: Counter = Counter()
        self.lock = threading.Lock()
        self._depth = 0

    def size(self) -> int:
        return sum(len(m) for m in self.memo.values()) + len(self.sublevels)

    def _store(self, table: str, key, value):
        if self.size() >= LIMITS.memo_entries:
            raise MemoLimitError(f"walk memo exceeded {LIMITS.memo_entries} entries")
        self.memo[table][key] = value


_DEFAULT = WalkContext()


def default_context() -> WalkContext:
    return _DEFAULT


def _check_pair(alpha, beta):
    alpha, beta = as_ordinal(alpha), as_ordinal(beta)
    if alpha > beta:
        raise ValueError(f"walks need alpha <= beta, got {alpha} > {beta}")
    return alpha, beta


def _steps(alpha: Ordinal, beta: Ordinal):
    """Yield (point, kind, count, run) for each stretch of the walk.

    ``kind`` is "limit" for a single step out of a limit point (count =
    |C_point ∩ alpha|, run = 1) or "succ" for a bulk run of ``run`` successor
    steps.  The final point alpha is not yielded.
    """
    cur = beta
    at = alpha.terms
    while cur.terms != at:
        if cur.is_successor:
            base = cur.limit_part
            if base <= alpha:
                yield cur, "succ", 0, cur.finite_part - (alpha.finite_part if alpha.limit_part == base else 0), alpha
                return
            yield cur, "succ", 0, cur.finite_part, base
            cur = base
            continue
        k, nxt = c_split(cur, alpha)
        yield cur, "limit", k, 1, nxt
        cur = nxt


# -- rho ---------------------------------------------------------------------


def rho(alpha: OrdLike, beta: OrdLike, ctx: WalkContext | None = None) -> int:
    """rho(alpha, beta) = max{|C_b ∩ a|, rho(a, min(C_b \\ a)), rho(xi, a) : xi ∈ C_b ∩ a}."""
    ctx = ctx or _DEFAULT
    alpha, beta = _check_pair(alpha, beta)
    try:
        return _rho(alpha, beta, ctx)
    except RecursionError as exc:
        raise WalkDepthError(f"rho({alpha}, {beta}) exceeded the interpreter recursion limit") from exc


def _rho(alpha: Ordinal, beta: Ordinal, ctx: WalkContext) -> int:
    if alpha is beta or alpha.terms == beta.terms:
        return 0
    memo = ctx.memo["rho"]
    key = (alpha, beta)
    hit = memo.get(key)
    if hit is not None:
        ctx.stats["rho_hits"] += 1
        return hit
    ctx._depth += 1
    ctx.stats["max_depth"] = max(ctx.stats["max_depth"], ctx._depth)
    if ctx._depth > LIMITS.walk_depth:
        ctx._depth -= 1
        raise WalkDepthError(f"rho recursion deeper than {LIMITS.walk_depth}")
    try:
        points, contributions = [], []
        for point, kind, k, _run, _nxt in _steps(alpha, beta):
            best = 0
            if kind == "limit":
                best = k
                for i in range(k):
                    v = _rho(fund_seq(point, i), alpha, ctx)
                    if v > best:
                        best = v
            points.append(point)
            contributions.append(best)
    finally:
        ctx._depth -= 1
    # every point of the walk shares the suffix of the same walk
    running = 0
    for point, c in zip(reversed(points), reversed(contributions)):
        running = max(running, c)
        if (alpha, point) not in memo:
            ctx._store("rho", (alpha, point), running)
    return running


def rho1(alpha: OrdLike, beta: OrdLike, ctx: WalkContext | None = None) -> int:
    """rho1(alpha, beta) = max{|C_b ∩ a|, rho1(a, min(C_b \\ a))}."""
    ctx = ctx or _DEFAULT
    alpha, beta = _check_pair(alpha, beta)
    if alpha == beta:
        return 0
    memo = ctx.memo["rho1"]
    hit = memo.get((alpha, beta))
    if hit is not None:
        return hit
    best = 0
    for _point, _kind, k, _run, _nxt in _steps(alpha, beta):
        best = max(best, k)
    ctx._store("rho1", (alpha, beta), best)
    return best


def rho2(alpha: OrdLike, beta: OrdLike, ctx: WalkContext | None = None) -> int:
    """Number of steps in the walk from beta down to alpha."""
    ctx = ctx or _DEFAULT
    alpha, beta = _check_pair(alpha, beta)
    if alpha == beta:
        return 0
    memo = ctx.memo["rho2"]
    hit = memo.get((alpha, beta))
    if hit is not None:
        return hit
    n = sum(run for _p, _k, _c, run, _n in _steps(alpha, beta))
    ctx._store("rho2", (alpha, beta), n)
    return n


def rho_bar(alpha: OrdLike, beta: OrdLike, ctx: WalkContext | None = None) -> int:
    """2^rho(a,b) * (2 |{xi <= a : rho(xi, a) <= rho(a, b)}| + 1)."""
    ctx = ctx or _DEFAULT
    alpha, beta = _check_pair(alpha, beta)
    r = rho(alpha, beta, ctx)
    if r >= LIMITS.nat_guard.bit_length():
        raise OrdinalOverflowError(f"2^{r} exceeds the natural-number guard")
    value = 2**r * (2 * len(sublevel_rho(alpha, r, ctx)) + 1)
    if value > LIMITS.nat_guard:
        raise OrdinalOverflowError(f"rho_bar({alpha}, {beta}) = {value} exceeds the guard")
    return value


def get_function(name: str) -> Callable[[Ordinal, Ordinal, WalkContext | None], int]:
    try:
        return {"rho": rho, "rho1": rho1, "rho2": rho2, "rhobar": rho_bar, "rho_bar": rho_bar}[name]
    except KeyError:
        raise ValueError(f"unknown walk function {name!r}") from None


# -- traces and sublevel sets ------------------------------------------------


def walk_trace(alpha: OrdLike, beta: OrdLike) -> list[Ordinal]:
    """beta = b_0 > b_1 > ... > b_k = alpha, one entry per walk step."""
    alpha, beta = _check_pair(alpha, beta)
    out = []
    for point, kind, _k, run, nxt in _steps(alpha, beta):
        if kind == "limit":
            out.append(point)
        else:
            base = point.limit_part
            top = point.finite_part
            out.extend(base + (top - i) for i in range(run))
    out.append(alpha)
    return out


def sublevel(fn: str, alpha: OrdLike, c: int, ctx: WalkContext | None = None) -> frozenset[Ordinal]:
    """Exactly {xi <= alpha : fn(xi, alpha) <= c} for fn in {rho, rho1}."""
    if fn == "rho2":
        raise Unsupported("rho2 sublevel sets are infinite (rho2(n, w) = 1 for every n)")
    if fn not in ("rho", "rho1"):
        raise ValueError(f"sublevel enumeration is defined for rho and rho1, not {fn!r}")
    ctx = ctx or _DEFAULT
    try:
        return _sublevel(fn, as_ordinal(alpha), c, ctx, 0)
    except RecursionError as exc:
        raise WalkDepthError(f"sublevel({fn}, {alpha}, {c}) exceeded the recursion limit") from exc


def _sublevel(fn: str, alpha: Ordinal, c: int, ctx: WalkContext, depth: int) -> frozenset[Ordinal]:
    key = (fn, alpha, c)
    hit = ctx.sublevels.get(key)
    if hit is not None:
        return hit
    if depth > LIMITS.walk_depth:
        raise WalkDepthError(f"sublevel recursion deeper than {LIMITS.walk_depth}")
    f = rho if fn == "rho" else rho1
    if alpha.is_finite:
        n = int(alpha)
        if n + 1 > LIMITS.sublevel_size:
            raise MemoLimitError(f"sublevel of {n} has more than {LIMITS.sublevel_size} elements")
        # every walk between naturals is a run of successor steps
        result = frozenset(nat(i) for i in range(n + 1))
    elif alpha.is_successor:
        base = alpha.limit_part
        below = _sublevel(fn, base, c, ctx, depth + 1)
        cands = set(below)
        cands.update(base + i for i in range(1, alpha.finite_part + 1))
        result = frozenset(x for x in cands if f(x, alpha, ctx) <= c)
    else:
        cands = [alpha]
        prev = None
        for k in range(c + 1):
            top = fund_seq(alpha, k)
            # |C_alpha ∩ xi| = k exactly when alpha[k-1] < xi <= alpha[k]
            cands.extend(x for x in _sublevel(fn, top, c, ctx, depth + 1) if prev is None or x > prev)
            prev = top
        result = frozenset(x for x in cands if f(x, alpha, ctx) <= c)
    if len(result) > LIMITS.sublevel_size:
        raise MemoLimitError(f"sublevel set larger than {LIMITS.sublevel_size}")
    with ctx.lock:
        ctx.sublevels[key] = result
    return result


def sublevel_rho(alpha: OrdLike, c: int, ctx: WalkContext | None = None) -> frozenset[Ordinal]:
    return sublevel("rho", alpha, c, ctx)


def sublevel_rho1(alpha: OrdLike, c: int, ctx: WalkContext | None = None) -> frozenset[Ordinal]:
    return sublevel("rho1", alpha, c, ctx)
