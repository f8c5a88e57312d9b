"""Ordinals below epsilon_0 in hereditary Cantor normal form.

An :class:`Ordinal` is an immutable tuple of ``(exponent, coefficient)``
terms with strictly decreasing exponents and positive coefficients; the empty
tuple is 0.  Because the representation is unique, equality and hashing are
structural.

The canonical C-sequence used everywhere else in the package lives here:

* ``C_{a+1} = {a}``
* ``(g + w^(b+1))[n] = g + w^b * n``   (so ``w[n] = n``)
* ``(g + w^l)[n]     = g + w^(l[n])``  for limit ``l``
"""

from __future__ import annotations

from typing import Iterator, Union

from .errors import NotALimitError, OrdinalOverflowError, OrdinalSyntaxError, ScanLimitError
from .limits import LIMITS

__all__ = [
    "Ordinal", "OrdLike", "ZERO", "ONE", "OMEGA", "nat", "as_ordinal", "w_pow",
    "parse", "fmt", "cmp", "add", "mul_omega_left", "fund_seq", "c_count", "c_step",
    "c_split", "c_elements_below", "in_c_seq",
]


class Ordinal:
    __slots__ = ("terms", "_hash")

    def __init__(self, terms=()):
        self.terms = tuple(terms)
        self._hash = None

    @classmethod
    def from_terms(cls, terms) -> "Ordinal":
        """Validating constructor: exponents strictly decrease, coefficients >= 1."""
        terms = tuple((as_ordinal(e), int(c)) for e, c in terms)
        for i, (e, c) in enumerate(terms):
            if c < 1:
                raise ValueError(f"coefficient must be positive, got {c}")
            _guard(c)
            if i and not _cmp(terms[i - 1][0], e) > 0:
                raise ValueError("exponents must be strictly decreasing")
        return cls(terms)

    # -- structure ---------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_finite(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not self.terms[0][0].terms)

    @property
    def is_successor(self) -> bool:
        return bool(self.terms) and not self.terms[-1][0].terms

    @property
    def is_limit(self) -> bool:
        return bool(self.terms) and bool(self.terms[-1][0].terms)

    @property
    def finite_part(self) -> int:
        if self.terms and not self.terms[-1][0].terms:
            return self.terms[-1][1]
        return 0

    @property
    def limit_part(self) -> "Ordinal":
        """The largest limit ordinal (or 0) that is <= self."""
        if self.terms and not self.terms[-1][0].terms:
            return Ordinal(self.terms[:-1])
        return self

    @property
    def leading_exponent(self) -> "Ordinal":
        return self.terms[0][0] if self.terms else ZERO

    def pred(self) -> "Ordinal":
        t = self.terms
        if not t or t[-1][0].terms:
            raise ValueError(f"{self} is not a successor")
        c = t[-1][1]
        if len(t) == 1:
            return nat(c - 1)
        return Ordinal(t[:-1] + ((ZERO, c - 1),) if c > 1 else t[:-1])

    def __int__(self) -> int:
        if not self.is_finite:
            raise ValueError(f"{self} is infinite")
        return self.terms[0][1] if self.terms else 0

    # -- protocol ----------------------------------------------------------

    def __hash__(self):
        h = self._hash
        if h is None:
            h = self._hash = hash(self.terms)
        return h

    def __eq__(self, other):
        if self is other:
            return True
        if type(other) is Ordinal:
            return self.terms == other.terms
        if isinstance(other, int) and other >= 0:
            return self.terms == nat(other).terms
        return NotImplemented

    def __ne__(self, other):
        eq = self.__eq__(other)
        return eq if eq is NotImplemented else not eq

    def __lt__(self, other):
        return _cmp(self, as_ordinal(other)) < 0

    def __le__(self, other):
        return _cmp(self, as_ordinal(other)) <= 0

    def __gt__(self, other):
        return _cmp(self, as_ordinal(other)) > 0

    def __ge__(self, other):
        return _cmp(self, as_ordinal(other)) >= 0

    def __add__(self, other):
        return add(self, other)

    def __radd__(self, other):
        return add(other, self)

    def __bool__(self):
        return bool(self.terms)

    def __str__(self):
        return fmt(self)

    def __repr__(self):
        return f"Ordinal({fmt(self)!r})"

    def __reduce__(self):
        return (parse, (fmt(self),))


OrdLike = Union[Ordinal, int, str]

_NAT_CACHE: dict[int, Ordinal] = {}
ZERO = Ordinal(())
_NAT_CACHE[0] = ZERO


def _guard(n: int) -> int:
    if n > LIMITS.nat_guard:
        raise OrdinalOverflowError(f"natural {n} exceeds guard {LIMITS.nat_guard}")
    return n


def nat(n: int) -> Ordinal:
    """The finite ordinal n (interned for small n)."""
    o = _NAT_CACHE.get(n)
    if o is not None:
        return o
    if n < 0:
        raise ValueError("ordinals are non-negative")
    _guard(n)
    o = Ordinal(((ZERO, n),))
    if n < 4096:
        _NAT_CACHE[n] = o
    return o


ONE = nat(1)
OMEGA = Ordinal(((ONE, 1),))


def as_ordinal(x: OrdLike) -> Ordinal:
    if isinstance(x, Ordinal):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not an ordinal")
    if isinstance(x, int):
        return nat(x)
    if isinstance(x, str):
        return parse(x)
    raise TypeError(f"cannot interpret {x!r} as an ordinal")


def w_pow(exponent: OrdLike, coefficient: int = 1) -> Ordinal:
    """w^exponent * coefficient."""
    if coefficient == 0:
        return ZERO
    return Ordinal(((as_ordinal(exponent), _guard(coefficient)),))


# -- comparison and arithmetic --------------------------------------------


def _cmp(a: Ordinal, b: Ordinal) -> int:
    if a is b:
        return 0
    ta, tb = a.terms, b.terms
    for (ea, ca), (eb, cb) in zip(ta, tb):
        if ea is not eb:
            c = _cmp(ea, eb)
            if c:
                return c
        if ca != cb:
            return -1 if ca < cb else 1
    return (len(ta) > len(tb)) - (len(ta) < len(tb))


def cmp(a: OrdLike, b: OrdLike) -> int:
    """-1, 0 or 1 as a <, =, > b."""
    return _cmp(as_ordinal(a), as_ordinal(b))


def add(a: OrdLike, b: OrdLike) -> Ordinal:
    a, b = as_ordinal(a), as_ordinal(b)
    if not b.terms:
        return a
    if not a.terms:
        return b
    e, c = b.terms[0]
    kept = []
    for ea, ca in a.terms:
        s = _cmp(ea, e)
        if s > 0:
            kept.append((ea, ca))
        elif s == 0:
            kept.append((e, _guard(ca + c)))
            return Ordinal(tuple(kept) + b.terms[1:])
        else:
            break
    return Ordinal(tuple(kept) + b.terms)


def mul_omega_left(a: OrdLike) -> Ordinal:
    """w * a: each term w^e*c becomes w^(1+e)*c."""
    a = as_ordinal(a)
    return Ordinal(tuple((add(ONE, e), c) for e, c in a.terms))


# -- fundamental sequences ---------------------------------------------------


def fund_seq(lam: OrdLike, n: int) -> Ordinal:
    """The n-th element of the canonical fundamental sequence of a limit."""
    lam = as_ordinal(lam)
    if not lam.is_limit:
        raise NotALimitError(f"{lam} is not a limit ordinal")
    if n < 0:
        raise ValueError("index must be non-negative")
    return _fs(lam, _guard(n))


def _fs(lam: Ordinal, n: int) -> Ordinal:
    *head, (e, c) = lam.terms
    head = tuple(head)
    if c > 1:
        head = head + ((e, c - 1),)
    if e.is_successor:
        if n == 0:
            return Ordinal(head)
        return Ordinal(head + ((e.pred(), n),))
    return Ordinal(head + ((_fs(e, n), 1),))


def c_split(beta: OrdLike, alpha: OrdLike) -> tuple[int, Ordinal]:
    """(|C_beta ∩ alpha|, min(C_beta \\ alpha)) for alpha < beta.

    For alpha == beta the step is beta itself and the count is only defined
    at successors (C_beta ∩ beta is infinite at limits).
    """
    if type(beta) is not Ordinal:
        beta = as_ordinal(beta)
    if type(alpha) is not Ordinal:
        alpha = as_ordinal(alpha)
    if not beta.terms:
        raise ValueError("C_0 is empty")
    s = _cmp(alpha, beta)
    if s > 0:
        raise ValueError(f"need alpha <= beta, got {alpha} > {beta}")
    if beta.is_successor:
        d = beta.pred()
        return (1, beta) if s == 0 else (0, d)
    if s == 0:
        raise ValueError(f"C_{beta} ∩ {beta} is infinite")
    n = _least_index(beta, alpha)
    if n > LIMITS.scan_steps:
        raise ScanLimitError(f"C_{beta} has more than {LIMITS.scan_steps} elements below {alpha}")
    return n, _fs(beta, _guard(n))


def _least_index(lam: Ordinal, alpha: Ordinal) -> int:
    """Least n with lam[n] >= alpha, for a limit lam > alpha.

    Write lam = h + w^e.  Below h every index works; above it alpha = h + d
    with d < w^e, and the answer depends only on the leading term of d.
    """
    *head, (e, c) = lam.terms
    h = tuple(head) + (((e, c - 1),) if c > 1 else ())
    if len(alpha.terms) <= len(h) or alpha.terms[:len(h)] != h:
        return 0  # alpha <= h = lam[0] or below it
    d = alpha.terms[len(h):]
    f, k = d[0]
    if e.is_successor:
        b = e.pred()
        if _cmp(f, b) < 0:
            return 1
        return k if len(d) == 1 else k + 1
    n = _least_index(e, f) if f.terms else 0
    s = _cmp(_fs(e, n), f)
    if s == 0 and len(d) == 1 and k == 1:
        return n
    return n if s > 0 else n + 1


def c_split_scan(beta: OrdLike, alpha: OrdLike) -> tuple[int, Ordinal]:
    """Reference version of :func:`c_split` that walks C_beta element by element."""
    beta, alpha = as_ordinal(beta), as_ordinal(alpha)
    if beta.is_successor:
        return c_split(beta, alpha)
    n = 0
    for x in c_seq(beta):
        if _cmp(x, alpha) >= 0:
            return n, x
        n += 1
        if n > LIMITS.scan_steps:
            raise ScanLimitError(f"scan of C_{beta} below {alpha} exceeded {LIMITS.scan_steps} steps")
    raise AssertionError("unreachable")


def c_count(beta: OrdLike, alpha: OrdLike) -> int:
    return c_split(beta, alpha)[0]


def c_step(beta: OrdLike, alpha: OrdLike) -> Ordinal:
    return c_split(beta, alpha)[1]


def c_elements_below(beta: OrdLike, alpha: OrdLike) -> list[Ordinal]:
    """C_beta ∩ alpha in increasing order."""
    beta = as_ordinal(beta)
    k, _ = c_split(beta, alpha)
    if beta.is_successor:
        return [beta.pred()] if k else []
    return [fund_seq(beta, i) for i in range(k)]


def in_c_seq(beta: OrdLike, x: OrdLike) -> bool:
    beta, x = as_ordinal(beta), as_ordinal(x)
    if _cmp(x, beta) >= 0 or not beta.terms:
        return False
    return c_split(beta, x)[1] == x


def c_seq(beta: OrdLike) -> Iterator[Ordinal]:
    beta = as_ordinal(beta)
    if beta.is_successor:
        yield beta.pred()
        return
    n = 0
    while True:
        yield fund_seq(beta, n)
        n += 1


# -- text form ---------------------------------------------------------------


def fmt(a: Ordinal) -> str:
    if not a.terms:
        return "0"
    parts = []
    for e, c in a.terms:
        if not e.terms:
            parts.append(str(c))
            continue
        if e == ONE:
            base = "w"
        elif e.is_finite or e == OMEGA:
            base = "w^" + fmt(e)
        else:
            base = "w^(" + fmt(e) + ")"
        parts.append(base if c == 1 else f"{base}*{c}")
    return "+".join(parts)


class _Parser:
    def __init__(self, text: str):
        self.s = text.replace(" ", "").replace("ω", "w")
        self.i = 0

    def error(self, msg):
        raise OrdinalSyntaxError(f"{msg} at position {self.i} in {self.s!r}")

    def peek(self):
        return self.s[self.i] if self.i < len(self.s) else ""

    def eat(self, ch):
        if self.peek() != ch:
            self.error(f"expected {ch!r}")
        self.i += 1

    def nat(self) -> int:
        j = self.i
        while self.peek().isdigit():
            self.i += 1
        if j == self.i:
            self.error("expected a natural number")
        return int(self.s[j:self.i])

    def expr(self) -> Ordinal:
        terms = [self.term()]
        while self.peek() == "+":
            self.i += 1
            terms.append(self.term())
        if len(terms) == 1:
            e, c = terms[0]
            if c == 0:
                if e.terms:
                    self.error("coefficient 0")
                return ZERO
        out = []
        for e, c in terms:
            if c == 0:
                self.error("coefficient 0")
            _guard(c)
            if out and not _cmp(out[-1][0], e) > 0:
                self.error("exponents must be strictly decreasing")
            out.append((e, c))
        return Ordinal(tuple(out))

    def term(self):
        if self.peek() == "w":
            self.i += 1
            e = ONE
            if self.peek() == "^":
                self.i += 1
                if self.peek() == "(":
                    self.i += 1
                    e = self.expr()
                    self.eat(")")
                elif self.peek() == "w":
                    self.i += 1
                    e = OMEGA
                else:
                    e = nat(self.nat())
            c = 1
            if self.peek() == "*":
                self.i += 1
                c = self.nat()
            return e, c
        return ZERO, self.nat()


def parse(text: str) -> Ordinal:
    """Parse the ordinal grammar, e.g. ``"w^2*3+w+4"`` or ``"w^(w+1)"``."""
    p = _Parser(text)
    if not p.s:
        p.error("empty expression")
    out = p.expr()
    if p.i != len(p.s):
        p.error("trailing input")
    return out
