"""Exact arithmetic on a truncated Levi-Civita field.

An :class:`LCNumber` is a finite formal sum ``sum(c_i * eps**q_i)`` with
exact rational coefficients ``c_i`` and exact rational exponents ``q_i``.
``eps`` is a fixed positive infinitesimal and ``H = 1/eps`` is unlimited.
The ordering is lexicographic from the lowest exponent, which makes the
field non-Archimedean: ``0 < eps < r`` for every positive rational ``r``.

Addition, subtraction and multiplication are exact.  Inversion of anything
other than a monomial produces an infinite series, so :func:`inv` (and the
elementary functions) truncate at a caller supplied :class:`TruncationOrder`
and record on the result the exponent up to which it is exact.

    >>> x = LCNumber.const(1) - EPS
    >>> print(x * x)
    1 - 2*eps^1 + 1*eps^2
    >>> st(x), classify(x - 1)
    (Fraction(1, 1), <Magnitude.INFINITESIMAL: 'infinitesimal'>)
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import factorial
from typing import Callable, Iterable, Sequence

from .errors import NotRepresentable, TruncationError, Unlimited, ZeroInput, DomainViolation

__all__ = [
    "LCNumber", "TruncationOrder", "DEFAULT_ORDER", "EPS", "H", "ZERO", "ONE",
    "Magnitude", "add", "sub", "neg", "mul", "inv", "div", "power", "cmp", "st",
    "adequal", "classify", "leading_order", "factor_leading", "sqrt", "sin", "cos",
    "TransferIdentity", "TransferReport", "TRANSFER_SCHEMA",
    "check_transfer_identity", "check_transfer_schema", "random_lcnumber",
    "format_fraction", "rational_root",
]


def _rat(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"expected an exact rational, got {type(value).__name__}")


def format_fraction(q: Fraction) -> str:
    """Exact literal for a rational: ``5``, ``-3/2``."""
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class TruncationOrder:
    """Cutoff exponent for series-valued results."""

    max_exponent: Fraction

    def __post_init__(self):
        k = _rat(self.max_exponent)
        if k <= 0:
            raise ValueError("truncation order must be strictly positive")
        object.__setattr__(self, "max_exponent", k)

    @classmethod
    def of(cls, value) -> "TruncationOrder":
        if value is None:
            return DEFAULT_ORDER
        if isinstance(value, TruncationOrder):
            return value
        return cls(_rat(value))


DEFAULT_ORDER = TruncationOrder(Fraction(8))


class Magnitude(str, Enum):
    ZERO = "zero"
    INFINITESIMAL = "infinitesimal"
    APPRECIABLE = "appreciable"
    UNLIMITED = "unlimited"


class LCNumber:
    """Element of the truncated Levi-Civita field.

    ``terms`` is a tuple of ``(exponent, coefficient)`` pairs, strictly
    ascending in exponent, with no zero coefficients; the empty tuple is 0.
    ``order`` is ``None`` for exact values; otherwise the value is only
    known up to (and including) exponent ``order``.  Equality and hashing
    look at ``terms`` only.
    """

    __slots__ = ("terms", "order")

    def __init__(self, terms: Iterable[tuple] = (), order=None):
        acc: dict[Fraction, Fraction] = {}
        for q, c in terms:
            q, c = _rat(q), _rat(c)
            acc[q] = acc.get(q, 0) + c
        self.terms = tuple(sorted((q, c) for q, c in acc.items() if c != 0))
        self.order = None if order is None else _rat(order)

    @classmethod
    def _canonical(cls, terms: tuple, order=None) -> "LCNumber":
        obj = cls.__new__(cls)
        obj.terms = terms
        obj.order = order
        return obj

    @classmethod
    def const(cls, c) -> "LCNumber":
        return cls.monomial(c, 0)

    @classmethod
    def monomial(cls, c, q) -> "LCNumber":
        c = _rat(c)
        return cls._canonical(((_rat(q), c),) if c else ())

    @classmethod
    def coerce(cls, value) -> "LCNumber":
        if isinstance(value, LCNumber):
            return value
        if isinstance(value, (int, Fraction)):
            return cls.const(value)
        raise TypeError(f"cannot convert {type(value).__name__} to LCNumber")

    # -- structure -----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_exact(self) -> bool:
        return self.order is None

    def is_standard(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and self.terms[0][0] == 0)

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    @property
    def valuation(self) -> Fraction | None:
        """Leading (lowest) exponent, or None for zero."""
        return self.terms[0][0] if self.terms else None

    def coefficient(self, q) -> Fraction:
        q = _rat(q)
        for e, c in self.terms:
            if e == q:
                return c
        return Fraction(0)

    def exponents(self) -> tuple:
        return tuple(q for q, _ in self.terms)

    def truncated(self, max_exponent) -> "LCNumber":
        """Drop every term above ``max_exponent`` and record the cutoff."""
        k = _rat(max_exponent)
        kept = tuple(t for t in self.terms if t[0] <= k)
        order = k if self.order is None else min(k, self.order)
        if len(kept) == len(self.terms) and self.order is not None and self.order <= k:
            return self
        return LCNumber._canonical(kept, order)

    def with_order(self, order) -> "LCNumber":
        return LCNumber._canonical(self.terms, None if order is None else _rat(order))

    # -- arithmetic ----------------------------------------------------

    def __neg__(self):
        return neg(self)

    def __pos__(self):
        return self

    def __abs__(self):
        return neg(self) if self.terms and self.terms[0][1] < 0 else self

    def __add__(self, other):
        try:
            other = LCNumber.coerce(other)
        except TypeError:
            return NotImplemented
        return add(self, other)

    __radd__ = __add__

    def __sub__(self, other):
        try:
            other = LCNumber.coerce(other)
        except TypeError:
            return NotImplemented
        return sub(self, other)

    def __rsub__(self, other):
        try:
            other = LCNumber.coerce(other)
        except TypeError:
            return NotImplemented
        return sub(other, self)

    def __mul__(self, other):
        try:
            other = LCNumber.coerce(other)
        except TypeError:
            return NotImplemented
        return mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        try:
            other = LCNumber.coerce(other)
        except TypeError:
            return NotImplemented
        return div(self, other)

    def __rtruediv__(self, other):
        try:
            other = LCNumber.coerce(other)
        except TypeError:
            return NotImplemented
        return div(other, self)

    def __pow__(self, exponent):
        if isinstance(exponent, LCNumber):
            if not exponent.is_standard():
                return NotImplemented
            exponent = exponent.coefficient(0)
        return power(self, exponent)

    # -- comparison ----------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, LCNumber):
            return self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.terms == LCNumber.const(other).terms
        return NotImplemented

    def __hash__(self):
        if self.is_standard():
            return hash(self.coefficient(0))
        return hash(self.terms)

    def _cmp_other(self, other):
        try:
            return cmp(self, LCNumber.coerce(other))
        except TypeError:
            return None

    def __lt__(self, other):
        c = self._cmp_other(other)
        return NotImplemented if c is None else c < 0

    def __le__(self, other):
        c = self._cmp_other(other)
        return NotImplemented if c is None else c <= 0

    def __gt__(self, other):
        c = self._cmp_other(other)
        return NotImplemented if c is None else c > 0

    def __ge__(self, other):
        c = self._cmp_other(other)
        return NotImplemented if c is None else c >= 0

    def __bool__(self):
        return bool(self.terms)

    # -- elementary functions (used by expression evaluation) ----------

    def sin(self, order=None):
        return sin(self, order)

    def cos(self, order=None):
        return cos(self, order)

    def sqrt(self, order=None):
        return sqrt(self, order)

    # -- text ----------------------------------------------------------

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for i, (q, c) in enumerate(self.terms):
            body = format_fraction(abs(c))
            if q != 0:
                exp = format_fraction(q)
                if q.denominator != 1:
                    exp = f"({exp})"
                body = f"{body}*eps^{exp}"
            if i == 0:
                parts.append(("-" if c < 0 else "") + body)
            else:
                parts.append((" - " if c < 0 else " + ") + body)
        return "".join(parts)

    def __repr__(self):
        if self.order is None:
            return f"LCNumber('{self}')"
        return f"LCNumber('{self}', order={format_fraction(self.order)})"


ZERO = LCNumber()
ONE = LCNumber.const(1)
EPS = LCNumber.monomial(1, 1)
H = LCNumber.monomial(1, -1)


def _effective_valuation(a: LCNumber):
    if a.terms:
        return a.terms[0][0]
    return a.order  # None for exact zero


def _min_order(*orders):
    known = [o for o in orders if o is not None]
    return min(known) if known else None


def add(a: LCNumber, b: LCNumber) -> LCNumber:
    acc = dict(a.terms)
    for q, c in b.terms:
        acc[q] = acc.get(q, 0) + c
    terms = tuple(sorted((q, c) for q, c in acc.items() if c != 0))
    return LCNumber._canonical(terms, _min_order(a.order, b.order))


def neg(a: LCNumber) -> LCNumber:
    return LCNumber._canonical(tuple((q, -c) for q, c in a.terms), a.order)


def sub(a: LCNumber, b: LCNumber) -> LCNumber:
    return add(a, neg(b))


def mul(a: LCNumber, b: LCNumber) -> LCNumber:
    acc: dict[Fraction, Fraction] = {}
    for qa, ca in a.terms:
        for qb, cb in b.terms:
            q = qa + qb
            acc[q] = acc.get(q, 0) + ca * cb
    terms = tuple(sorted((q, c) for q, c in acc.items() if c != 0))
    # an operand known to O(eps^k) contributes O(eps^(k + valuation of the other))
    order = None
    va, vb = _effective_valuation(a), _effective_valuation(b)
    if a.order is not None and vb is not None:
        order = a.order + vb
    if b.order is not None and va is not None:
        order = _min_order(order, b.order + va)
    return LCNumber._canonical(terms, order)


def _scale(a: LCNumber, c: Fraction, q: Fraction) -> LCNumber:
    """Exact product ``a * c * eps**q``."""
    order = None if a.order is None else a.order + q
    return LCNumber._canonical(tuple((e + q, x * c) for e, x in a.terms), order)


def factor_leading(a: LCNumber) -> tuple[Fraction, Fraction, LCNumber]:
    """Write ``a = k * eps**n * (1 + u)`` with ``u`` infinitesimal.

    Returns ``(k, n, u)``.  This is the familiar decomposition of a quantity
    of order ``n`` into a fixed leading coefficient and a vanishing
    relative correction.
    """
    if not a.terms:
        raise ZeroInput("zero has no leading term")
    n, k = a.terms[0]
    u = LCNumber._canonical(
        tuple((q - n, c / k) for q, c in a.terms[1:]),
        None if a.order is None else a.order - n,
    )
    return k, n, u


def leading_order(a: LCNumber) -> tuple[Fraction, Fraction]:
    """Leading coefficient ``k`` and exponent ``n`` of ``a = k*eps^n*(1+u)``."""
    k, n, _ = factor_leading(a)
    return k, n


def _series(u: LCNumber, coefficients: Callable[[int], Fraction], cutoff: Fraction, start: int = 0) -> LCNumber:
    """``sum_{j>=start} coefficients(j) * u**j`` keeping exponents <= cutoff.

    ``u`` must be infinitesimal (positive valuation) or zero.
    """
    result = ZERO
    if start == 0:
        result = LCNumber.const(coefficients(0))
    if u.is_zero():
        return result
    p = u.valuation
    assert p > 0
    last = int(cutoff / p)
    u_pow = ONE
    for j in range(1, last + 1):
        u_pow = LCNumber._canonical(tuple(t for t in mul(u_pow, u).terms if t[0] <= cutoff))
        if j >= start:
            c = coefficients(j)
            if c:
                result = add(result, _scale(u_pow, c, Fraction(0)))
    return result


def inv(a: LCNumber, k=None) -> LCNumber:
    """Multiplicative inverse, truncated at relative order ``k``.

    With ``a = c*eps^q*(1+u)`` this returns ``c^-1 * eps^-q * sum((-u)^j)``
    keeping terms of the geometric series up to exponent ``k``, so that
    ``a * inv(a, k) - 1`` has leading exponent strictly greater than ``k``.
    Monomials invert exactly.
    """
    k = TruncationOrder.of(k).max_exponent
    c, q, u = factor_leading(a)
    if u.is_zero() and a.order is None:
        return LCNumber.monomial(1 / c, -q)
    series = _series(u.with_order(None), lambda j: Fraction((-1) ** j), k)
    relative = k if a.order is None else min(k, a.order - q)
    return _scale(series, 1 / c, -q).with_order(relative - q)


def div(a: LCNumber, b: LCNumber, k=None) -> LCNumber:
    if b.is_zero():
        raise ZeroInput("division by zero")
    if b.is_monomial() and b.order is None:
        q, c = b.terms[0]
        return _scale(a, 1 / c, -q)
    return mul(a, inv(b, k))


def rational_root(c: Fraction, n: int) -> Fraction | None:
    """Exact ``n``-th root of a rational, or None."""
    if c < 0:
        if n % 2 == 0:
            return None
        r = rational_root(-c, n)
        return None if r is None else -r
    def iroot(m: int) -> int | None:
        if m in (0, 1):
            return m
        lo, hi = 0, 1 << ((m.bit_length() + n - 1) // n + 1)
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if mid ** n <= m:
                lo = mid
            else:
                hi = mid - 1
        return lo if lo ** n == m else None
    num, den = iroot(c.numerator), iroot(c.denominator)
    if num is None or den is None:
        return None
    return Fraction(num, den)


def _binomial(r: Fraction, j: int) -> Fraction:
    out = Fraction(1)
    for i in range(j):
        out *= (r - i)
    return out / factorial(j)


def power(a: LCNumber, r, k=None) -> LCNumber:
    """``a ** r`` for integer or rational ``r``.

    Nonnegative integer powers are exact.  Negative and fractional powers of
    a non-monomial go through a truncated series (binomial for fractional
    ``r``); fractional powers need an exact rational root of the leading
    coefficient, otherwise :class:`NotRepresentable` is raised.
    """
    r = _rat(r)
    if r.denominator == 1 and r >= 0:
        n = r.numerator
        result, base = ONE, a
        while n:
            if n & 1:
                result = mul(result, base)
            n >>= 1
            if n:
                base = mul(base, base)
        return result
    if a.is_zero():
        if r > 0:
            return a
        raise ZeroInput("zero raised to a negative power")
    if r.denominator == 1:
        return inv(power(a, -r), k)
    kk = TruncationOrder.of(k).max_exponent
    c, q, u = factor_leading(a)
    root = rational_root(c, r.denominator)
    if root is None:
        raise NotRepresentable(f"{format_fraction(c)}^({format_fraction(r)}) is not rational")
    lead_c = root ** r.numerator
    if u.is_zero() and a.order is None:
        return LCNumber.monomial(lead_c, q * r)
    series = _series(u.with_order(None), lambda j: _binomial(r, j), kk)
    relative = kk if a.order is None else min(kk, a.order - q)
    return _scale(series, lead_c, q * r).with_order(relative + q * r)


def cmp(a: LCNumber, b: LCNumber) -> int:
    """-1, 0 or 1: the sign of the lowest-exponent coefficient of ``a - b``."""
    d = sub(a, b)
    if not d.terms:
        return 0
    return 1 if d.terms[0][1] > 0 else -1


def classify(a: LCNumber) -> Magnitude:
    if not a.terms:
        return Magnitude.ZERO
    v = a.terms[0][0]
    if v > 0:
        return Magnitude.INFINITESIMAL
    if v == 0:
        return Magnitude.APPRECIABLE
    return Magnitude.UNLIMITED


def st(a: LCNumber) -> Fraction:
    """Standard part of a limited number."""
    if a.terms and a.terms[0][0] < 0:
        raise Unlimited(f"{a} is unlimited and has no standard part")
    if a.order is not None and a.order < 0:
        raise TruncationError(f"value known only up to eps^{format_fraction(a.order)}")
    return a.coefficient(0)


def adequal(a: LCNumber, b: LCNumber) -> bool:
    """True iff ``a - b`` is zero or infinitesimal."""
    d = sub(LCNumber.coerce(a), LCNumber.coerce(b))
    return not d.terms or d.terms[0][0] > 0


# -- elementary functions ------------------------------------------------

def _rational_sin_cos(name: str, s: Fraction) -> Fraction | None:
    if s == 0:
        return Fraction(0) if name == "sin" else Fraction(1)
    return None


def _taylor_at_zero(name: str, a: LCNumber, k) -> LCNumber:
    k = TruncationOrder.of(k).max_exponent
    if a.terms and a.terms[0][0] <= 0:
        if a.terms[0][0] < 0:
            raise NotRepresentable(f"{name} of an unlimited argument has no Levi-Civita expansion")
        raise NotRepresentable(
            f"{name}({format_fraction(a.terms[0][1])}) is not rational; only infinitesimal arguments expand exactly"
        )
    if name == "sin":
        coeff = lambda j: Fraction(0) if j % 2 == 0 else Fraction((-1) ** (j // 2), factorial(j))
    else:
        coeff = lambda j: Fraction(0) if j % 2 else Fraction((-1) ** (j // 2), factorial(j))
    out = _series(a.with_order(None), coeff, k)
    if a.is_zero():
        return out.with_order(a.order)
    return out.with_order(_min_order(k, a.order))


def sin(a: LCNumber, k=None) -> LCNumber:
    """Taylor expansion of sin about the standard part (which must be 0)."""
    return _taylor_at_zero("sin", a, k)


def cos(a: LCNumber, k=None) -> LCNumber:
    return _taylor_at_zero("cos", a, k)


def sqrt(a: LCNumber, k=None) -> LCNumber:
    if a.is_zero():
        return a
    if a.terms[0][1] < 0:
        raise DomainViolation(f"sqrt of negative value {a}")
    return power(a, Fraction(1, 2), k)


# -- transfer schema -----------------------------------------------------

@dataclass(frozen=True)
class TransferIdentity:
    name: str
    text: str
    check: Callable[[LCNumber, LCNumber, LCNumber], bool]


def _implies(p: bool, q: bool) -> bool:
    return (not p) or q


TRANSFER_SCHEMA: dict[str, TransferIdentity] = {
    ident.name: ident
    for ident in [
        TransferIdentity("add-commutative", "x + y = y + x", lambda x, y, z: x + y == y + x),
        TransferIdentity("mul-commutative", "x * y = y * x", lambda x, y, z: x * y == y * x),
        TransferIdentity("add-associative", "(x + y) + z = x + (y + z)",
                         lambda x, y, z: (x + y) + z == x + (y + z)),
        TransferIdentity("mul-associative", "(x * y) * z = x * (y * z)",
                         lambda x, y, z: (x * y) * z == x * (y * z)),
        TransferIdentity("distributive", "x * (y + z) = x * y + x * z",
                         lambda x, y, z: x * (y + z) == x * y + x * z),
        TransferIdentity("order-translation", "x < y => x + z < y + z",
                         lambda x, y, z: _implies(x < y, x + z < y + z)),
        TransferIdentity("order-scaling", "x < y and z > 0 => x * z < y * z",
                         lambda x, y, z: _implies(x < y and z > 0, x * z < y * z)),
        TransferIdentity("abs-multiplicative", "|x * y| = |x| * |y|",
                         lambda x, y, z: abs(x * y) == abs(x) * abs(y)),
    ]
}


@dataclass(frozen=True)
class TransferReport:
    identities: tuple[str, ...]
    samples: int
    violations: tuple[tuple[str, tuple[LCNumber, ...]], ...]

    @property
    def holds(self) -> bool:
        return not self.violations


def check_transfer_identity(identity, samples: Sequence[Sequence[LCNumber]]) -> TransferReport:
    """Evaluate one schema identity exactly at every sample triple."""
    ident = TRANSFER_SCHEMA[identity] if isinstance(identity, str) else identity
    bad = []
    for sample in samples:
        x, y, z = (LCNumber.coerce(v) for v in sample)
        if not ident.check(x, y, z):
            bad.append((ident.name, (x, y, z)))
    return TransferReport((ident.name,), len(samples), tuple(bad))


def check_transfer_schema(samples: Sequence[Sequence[LCNumber]]) -> TransferReport:
    bad = []
    for ident in TRANSFER_SCHEMA.values():
        bad.extend(check_transfer_identity(ident, samples).violations)
    return TransferReport(tuple(TRANSFER_SCHEMA), len(samples), tuple(bad))


_SAMPLE_EXPONENTS = tuple(Fraction(n, d) for d in (1, 2, 3) for n in range(-3 * d, 3 * d + 1)
                          if Fraction(n, d).denominator == d)


def random_lcnumber(rng: random.Random, max_terms: int = 3, limited: bool = False) -> LCNumber:
    """Random LCNumber with small rational exponents and coefficients.

    Mixes unlimited, appreciable and infinitesimal components; exponent 0
    is drawn with extra weight so standard parts are usually nonzero.
    """
    exps = [q for q in _SAMPLE_EXPONENTS if q >= 0] if limited else list(_SAMPLE_EXPONENTS)
    terms = []
    for _ in range(rng.randint(0, max_terms)):
        q = Fraction(0) if rng.random() < 0.3 else rng.choice(exps)
        terms.append((q, Fraction(rng.randint(-9, 9), rng.randint(1, 5))))
    return LCNumber(terms)
