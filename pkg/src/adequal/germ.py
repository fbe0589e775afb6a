"""Sequence germs modulo an explicit ultrafilter stance.

A :class:`Germ` is a sequence ``<u_n>`` read modulo an ultrafilter on the
index set.  Genuine nonprincipal ultrafilters cannot be written down, so
we fix one on a decidable fragment instead: the Boolean algebra of
*periodic* index sets (finite unions of residue classes ``a mod m``), taken
modulo finite sets.  An :class:`UltrafilterStance` records membership
decisions on that algebra and rejects any that no ultrafilter could make.

Rules come in two flavours:

* exact rules, given per residue class ``n mod P`` as a quotient of
  polynomials in ``n`` whose coefficients lie in ``Q[pi]`` (``pi`` is kept
  as a symbolic tag, so ``1/(2*pi*n)`` is still exact), and
* sampled rules, an opaque callable evaluated numerically.  Questions about
  sampled rules get semi-decisions; :data:`UNDETERMINED` is returned when
  sampling is inconclusive and refuses to be used as a boolean.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd, ceil
from typing import Callable, Iterable, Sequence

from mpmath import iv, mp, mpf

from .errors import (DomainViolation, InvalidStance, NotRepresentable, StanceUndecided,
                     Unlimited, ZeroInput)
from .lcfield import LCNumber, TruncationOrder, format_fraction, inv, rational_root

__all__ = [
    "UNDETERMINED", "Undetermined", "IndexSet", "UltrafilterStance", "DEFAULT_STANCE",
    "PiPoly", "NPoly", "RationalRule", "Germ", "germ_is_null", "germ_is_infinitesimal",
    "germ_sign", "germ_adequal", "germ_apply", "germ_st", "germ_to_lc", "lc_to_germ",
    "SAMPLE_POINTS",
]


class Undetermined:
    """Verdict of a semi-decision that sampling could not settle."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __bool__(self):
        raise TypeError("an undetermined verdict has no truth value")

    def __repr__(self):
        return "UNDETERMINED"

    def __str__(self):
        return "undetermined"


UNDETERMINED = Undetermined()


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


# -- index sets and stances ---------------------------------------------

class IndexSet:
    """Periodic subset of N, modulo finite sets.

    Stored as a period ``m`` and the residues mod ``m`` it contains.  A
    cofinite set is the full pattern mod 1; a finite set is the empty one.
    """

    __slots__ = ("modulus", "residues")

    def __init__(self, modulus: int, residues: Iterable[int]):
        if modulus < 1:
            raise ValueError("modulus must be positive")
        self.modulus = modulus
        self.residues = frozenset(r % modulus for r in residues)

    @classmethod
    def residue_class(cls, a: int, m: int) -> "IndexSet":
        return cls(m, [a])

    @classmethod
    def cofinite(cls) -> "IndexSet":
        return cls(1, [0])

    @classmethod
    def finite(cls) -> "IndexSet":
        return cls(1, [])

    def lifted(self, m: int) -> frozenset:
        """Residues mod ``m`` (a multiple of the modulus) in this set."""
        assert m % self.modulus == 0
        return frozenset(r for r in range(m) if r % self.modulus in self.residues)

    def _combine(self, other, op) -> "IndexSet":
        m = _lcm(self.modulus, other.modulus)
        return IndexSet(m, op(self.lifted(m), other.lifted(m)))

    def complement(self) -> "IndexSet":
        return IndexSet(self.modulus, set(range(self.modulus)) - self.residues)

    def __and__(self, other):
        return self._combine(other, frozenset.__and__)

    def __or__(self, other):
        return self._combine(other, frozenset.__or__)

    def __invert__(self):
        return self.complement()

    def __eq__(self, other):
        if not isinstance(other, IndexSet):
            return NotImplemented
        m = _lcm(self.modulus, other.modulus)
        return self.lifted(m) == other.lifted(m)

    def __hash__(self):
        return hash(_reduce_pattern(self.modulus, self.residues))

    def __repr__(self):
        if not self.residues:
            return "IndexSet(finite)"
        if len(self.residues) == self.modulus:
            return "IndexSet(cofinite)"
        return f"IndexSet({sorted(self.residues)} mod {self.modulus})"


def _reduce_pattern(m: int, residues: frozenset) -> tuple[int, frozenset]:
    """Smallest period describing the same periodic set."""
    for d in range(1, m + 1):
        if m % d == 0 and all(((r + d) % m in residues) == (r in residues) for r in range(m)):
            return d, frozenset(r % d for r in residues)
    return m, residues


class UltrafilterStance:
    """Ultrafilter decisions on periodic index sets.

    Every ultrafilter on this algebra picks, coherently for all moduli, one
    residue class per modulus.  A stance built from finitely many decisions
    therefore corresponds to the nonempty set of residues mod ``L`` (the lcm
    of the moduli involved) compatible with them; decisions with no
    compatible residue break the filter laws and raise :class:`InvalidStance`.
    A set is decided when all compatible residues agree on it.
    """

    MAX_MODULUS = 1 << 16

    def __init__(self, decisions: Iterable[tuple[IndexSet, bool]] = ()):
        decisions = tuple(decisions)
        period = reduce(_lcm, (s.modulus for s, _ in decisions), 1)
        if period > self.MAX_MODULUS:
            raise InvalidStance(f"decisions span modulus {period}, above {self.MAX_MODULUS}")
        points = frozenset(
            r for r in range(period)
            if all((r % s.modulus in s.residues) == member for s, member in decisions)
        )
        if not points:
            raise InvalidStance("no ultrafilter makes these decisions: " + "; ".join(
                f"{s!r} {'member' if m else 'non-member'}" for s, m in decisions))
        self.decisions = decisions
        self.period, self.points = _reduce_pattern(period, points)

    @classmethod
    def parse(cls, text: str) -> "UltrafilterStance":
        """Parse ``"0 mod 2; not 1 mod 3"`` style decision lists."""
        decisions = []
        for part in text.replace(",", ";").split(";"):
            part = part.strip()
            if not part:
                continue
            member = True
            if part.startswith("not "):
                member, part = False, part[4:].strip()
            if part == "cofinite":
                decisions.append((IndexSet.cofinite(), member))
                continue
            try:
                a, m = part.split("mod")
                decisions.append((IndexSet.residue_class(int(a), int(m)), member))
            except ValueError:
                raise InvalidStance(f"cannot read stance decision {part!r}") from None
        return cls(decisions)

    def decides(self, s: IndexSet):
        """True/False when decided, None otherwise."""
        m = _lcm(self.period, s.modulus)
        verdicts = {(r % s.modulus) in s.residues
                    for r in range(m) if r % self.period in self.points}
        return verdicts.pop() if len(verdicts) == 1 else None

    def is_member(self, s: IndexSet) -> bool:
        verdict = self.decides(s)
        if verdict is None:
            raise StanceUndecided(f"stance does not decide {s!r}")
        return verdict

    def member_residue(self, modulus: int) -> int:
        """The residue class mod ``modulus`` that belongs to the ultrafilter."""
        for r in range(modulus):
            if self.decides(IndexSet.residue_class(r, modulus)):
                return r
        raise StanceUndecided(f"stance does not decide residues mod {modulus}")

    def __eq__(self, other):
        if not isinstance(other, UltrafilterStance):
            return NotImplemented
        return (self.period, self.points) == (other.period, other.points)

    def __hash__(self):
        return hash((self.period, self.points))

    def __repr__(self):
        return f"UltrafilterStance(points={sorted(self.points)} mod {self.period})"


DEFAULT_STANCE = UltrafilterStance([(IndexSet.residue_class(0, 2), True)])


# -- Q[pi] coefficients ---------------------------------------------------

class PiPoly:
    """Polynomial in the symbol pi with rational coefficients.

    pi is transcendental, so such a value is zero exactly when every
    coefficient is, and its sign is settled by interval evaluation at
    increasing precision.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def coerce(cls, value) -> "PiPoly":
        if isinstance(value, PiPoly):
            return value
        if isinstance(value, (int, Fraction)):
            return cls([value])
        raise TypeError(f"cannot convert {type(value).__name__} to PiPoly")

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_rational(self) -> bool:
        return len(self.coeffs) <= 1

    def rational(self) -> Fraction:
        if not self.is_rational():
            raise NotRepresentable(f"{self} is not rational")
        return self.coeffs[0] if self.coeffs else Fraction(0)

    def pi_multiple(self) -> Fraction | None:
        """``c`` if this equals ``c*pi``, else None."""
        if not self.coeffs:
            return Fraction(0)
        if len(self.coeffs) == 2 and self.coeffs[0] == 0:
            return self.coeffs[1]
        return None

    def __add__(self, other):
        try:
            other = PiPoly.coerce(other)
        except TypeError:
            return NotImplemented
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return PiPoly(x + y for x, y in zip(a, b))

    __radd__ = __add__

    def __neg__(self):
        return PiPoly(-c for c in self.coeffs)

    def __sub__(self, other):
        try:
            return self + (-PiPoly.coerce(other))
        except TypeError:
            return NotImplemented

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        try:
            other = PiPoly.coerce(other)
        except TypeError:
            return NotImplemented
        if not self.coeffs or not other.coeffs:
            return PiPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, x in enumerate(self.coeffs):
            for j, y in enumerate(other.coeffs):
                out[i + j] += x * y
        return PiPoly(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, PiPoly) and other.is_rational() and not other.is_zero():
            other = other.rational()
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("PiPoly division by zero")
            return PiPoly(c / other for c in self.coeffs)
        return NotImplemented

    def __eq__(self, other):
        try:
            other = PiPoly.coerce(other)
        except TypeError:
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def to_mpf(self):
        return sum((mpf(c.numerator) / c.denominator * mp.pi ** i
                    for i, c in enumerate(self.coeffs)), mpf(0))

    def sign(self) -> int:
        if self.is_rational():
            c = self.rational()
            return (c > 0) - (c < 0)
        prec = 64
        while True:
            iv.prec = prec
            total = iv.mpf(0)
            for i, c in enumerate(self.coeffs):
                total += iv.mpf(c.numerator) / c.denominator * iv.pi ** i
            if total.a > 0:
                return 1
            if total.b < 0:
                return -1
            prec *= 2

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mag = format_fraction(abs(c))
            if i == 0:
                body = mag
            else:
                pi = "pi" if i == 1 else f"pi^{i}"
                body = pi if abs(c) == 1 else f"{mag}*{pi}"
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    __repr__ = __str__


# -- polynomials in n ----------------------------------------------------

class NPoly:
    """Polynomial in the index n with Q[pi] coefficients (index = degree)."""

    __slots__ = ("coeffs", "_mpf")

    def __init__(self, coeffs: Iterable = ()):
        cs = [PiPoly.coerce(c) for c in coeffs]
        while cs and cs[-1].is_zero():
            cs.pop()
        self.coeffs = tuple(cs)
        self._mpf = None

    @classmethod
    def const(cls, c) -> "NPoly":
        return cls([c])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def leading(self) -> PiPoly:
        return self.coeffs[-1]

    def __add__(self, other):
        n = max(len(self.coeffs), len(other.coeffs))
        z = PiPoly()
        a = self.coeffs + (z,) * (n - len(self.coeffs))
        b = other.coeffs + (z,) * (n - len(other.coeffs))
        return NPoly(x + y for x, y in zip(a, b))

    def __neg__(self):
        return NPoly(-c for c in self.coeffs)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not self.coeffs or not other.coeffs:
            return NPoly()
        out = [PiPoly()] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, x in enumerate(self.coeffs):
            for j, y in enumerate(other.coeffs):
                out[i + j] = out[i + j] + x * y
        return NPoly(out)

    def __eq__(self, other):
        return isinstance(other, NPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def at(self, n: int) -> PiPoly:
        """Exact value at an integer index."""
        acc = PiPoly()
        for c in reversed(self.coeffs):
            acc = acc * n + c
        return acc

    def eval_mpf(self, n):
        # sampling evaluates the same rule many times at one precision
        cached = self._mpf
        if cached is None or cached[0] != mp.prec:
            cached = self._mpf = (mp.prec, tuple(reversed([c.to_mpf() for c in self.coeffs])))
        acc = mpf(0)
        for c in cached[1]:
            acc = acc * n + c
        return acc

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c.is_zero():
                continue
            var = "" if i == 0 else ("n" if i == 1 else f"n^{i}")
            k = c.rational() if c.is_rational() else c.pi_multiple()
            if k is not None:
                sign, mag = ("-" if k < 0 else "+"), str(-c if k < 0 else c)
            else:
                sign, mag = "+", f"({c})"
            body = mag if not var else (var if mag == "1" else f"{mag}*{var}")
            parts.append((sign, body))
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out


N_POLY = NPoly([0, 1])
ONE_POLY = NPoly([1])


class RationalRule:
    """Term rule ``num(n) / den(n)``; den must be nonzero from ``n0`` on."""

    __slots__ = ("num", "den", "n0")

    def __init__(self, num: NPoly, den: NPoly = ONE_POLY):
        if den.is_zero():
            raise ZeroInput("rule denominator is identically zero")
        self.num, self.den = num, den
        self.n0 = self._first_safe_index()

    def _first_safe_index(self) -> int:
        if self.den.degree == 0:
            return 1
        lead = abs(self.den.leading().to_mpf())
        bound = 1 + max(abs(c.to_mpf()) for c in self.den.coeffs[:-1]) / lead
        n0 = 1
        for n in range(1, int(ceil(bound)) + 2):
            if self.den.at(n).is_zero():
                n0 = n + 1
        return n0

    @classmethod
    def const(cls, c) -> "RationalRule":
        return cls(NPoly.const(c))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_null(self) -> bool:
        return self.num.is_zero() or self.num.degree < self.den.degree

    def eventual_sign(self) -> int:
        if self.num.is_zero():
            return 0
        return self.num.leading().sign() * self.den.leading().sign()

    def limit(self):
        """Limit as n grows: a PiPoly ratio (num, den) or raises Unlimited."""
        if self.num.is_zero() or self.num.degree < self.den.degree:
            return PiPoly(), PiPoly([1])
        if self.num.degree > self.den.degree:
            raise Unlimited(f"rule {self} is unbounded")
        return self.num.leading(), self.den.leading()

    def constant_value(self) -> PiPoly | None:
        """The value when the rule does not depend on n and has a Q[pi] value."""
        if self.num.is_zero():
            return PiPoly()
        if self.num.degree == 0 and self.den.degree == 0 and self.den.leading().is_rational():
            return self.num.leading() * (1 / self.den.leading().rational())
        return None

    def __add__(self, other):
        if self.den == other.den:
            return RationalRule(self.num + other.num, self.den)
        return RationalRule(self.num * other.den + other.num * self.den, self.den * other.den)

    def __neg__(self):
        return RationalRule(-self.num, self.den)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        return RationalRule(self.num * other.num, self.den * other.den)

    def reciprocal(self) -> "RationalRule":
        if self.num.is_zero():
            raise DomainViolation("reciprocal of a rule that vanishes identically")
        return RationalRule(self.den, self.num)

    def __eq__(self, other):
        return isinstance(other, RationalRule) and (self.num * other.den) == (other.num * self.den)

    def __hash__(self):
        return hash(str(self))

    def term(self, n: int):
        den = self.den.eval_mpf(n)
        if den == 0:
            raise DomainViolation(f"rule {self} undefined at n={n}")
        return self.num.eval_mpf(n) / den

    def __str__(self):
        if self.den == ONE_POLY:
            return f"({self.num})"
        return f"({self.num})/({self.den})"


# -- germs ----------------------------------------------------------------

SAMPLE_POINTS = (10 ** 3, 10 ** 4, 10 ** 5, 10 ** 6)
SAMPLE_WINDOW = 24
SAMPLE_DPS = 40
ZERO_TOL = mpf("1e-25")
SMALL = mpf("1e-2")
MAX_PERIOD = 720

_SIN_PI = {  # sin(pi*s) for the rational s (mod 2) where it is rational
    Fraction(0): Fraction(0), Fraction(1, 6): Fraction(1, 2), Fraction(1, 2): Fraction(1),
    Fraction(5, 6): Fraction(1, 2), Fraction(1): Fraction(0), Fraction(7, 6): Fraction(-1, 2),
    Fraction(3, 2): Fraction(-1), Fraction(11, 6): Fraction(-1, 2),
}


def _sin_pi(s: Fraction) -> Fraction | None:
    s = s - 2 * (s.numerator // (2 * s.denominator))
    return _SIN_PI.get(s)


class Germ:
    """Sequence ``<u_n>`` under an :class:`UltrafilterStance`.

    Exact germs hold one :class:`RationalRule` per residue class mod the
    period ``len(branches)``; sampled germs hold a callable ``n -> mpf``.
    Arithmetic with ints, Fractions and other germs is termwise.
    """

    __slots__ = ("branches", "sampler", "label", "stance")

    def __init__(self, branches: Sequence[RationalRule] | None = None, *, sampler=None,
                 label: str = "", stance: UltrafilterStance = DEFAULT_STANCE):
        if (branches is None) == (sampler is None):
            raise ValueError("a germ needs exactly one of branches or sampler")
        self.branches = None if branches is None else tuple(branches)
        self.sampler = sampler
        self.label = label
        self.stance = stance

    # constructors
    @classmethod
    def const(cls, c, stance=DEFAULT_STANCE) -> "Germ":
        return cls([RationalRule.const(c)], stance=stance)

    @classmethod
    def index(cls, stance=DEFAULT_STANCE) -> "Germ":
        """The germ ``<n>`` of the identity sequence (an unlimited element)."""
        return cls([RationalRule(N_POLY)], stance=stance)

    @classmethod
    def pi(cls, stance=DEFAULT_STANCE) -> "Germ":
        return cls([RationalRule(NPoly([PiPoly([0, 1])]))], stance=stance)

    @classmethod
    def alternating(cls, stance=DEFAULT_STANCE) -> "Germ":
        """``<(-1)^n>``."""
        return cls([RationalRule.const(1), RationalRule.const(-1)], stance=stance)

    @classmethod
    def from_sampler(cls, fn: Callable[[int], object], label="sampled", stance=DEFAULT_STANCE) -> "Germ":
        return cls(sampler=fn, label=label, stance=stance)

    # structure
    @property
    def is_exact(self) -> bool:
        return self.branches is not None

    @property
    def period(self) -> int:
        return len(self.branches) if self.branches is not None else 0

    @property
    def n0(self) -> int:
        if self.branches is None:
            return 1
        return max(b.n0 for b in self.branches)

    def branch(self, n: int) -> RationalRule:
        return self.branches[n % len(self.branches)]

    def term(self, n: int):
        """Numerical value of the n-th term (mpmath, current precision)."""
        if self.branches is not None:
            return self.branch(n).term(n)
        try:
            return mpf(self.sampler(n))
        except ZeroDivisionError as exc:
            raise DomainViolation(f"sampled rule undefined at n={n}") from exc

    def _lifted(self, period: int) -> tuple[RationalRule, ...]:
        return tuple(self.branches[r % len(self.branches)] for r in range(period))

    def _coerce(self, other) -> "Germ":
        if isinstance(other, Germ):
            if other.stance != self.stance:
                raise ValueError("germs under different stances cannot be combined")
            return other
        if isinstance(other, (int, Fraction)):
            return Germ.const(other, self.stance)
        if isinstance(other, PiPoly):
            return Germ([RationalRule(NPoly([other]))], stance=self.stance)
        raise TypeError(f"cannot combine Germ with {type(other).__name__}")

    def _binary(self, other, exact_op, num_op, symbol) -> "Germ":
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        if self.is_exact and other.is_exact:
            period = _lcm(self.period, other.period)
            a, b = self._lifted(period), other._lifted(period)
            return Germ([exact_op(x, y) for x, y in zip(a, b)], stance=self.stance)
        left, right = self, other
        return Germ.from_sampler(lambda n: num_op(left.term(n), right.term(n)),
                                 f"({left}) {symbol} ({right})", self.stance)

    def __add__(self, other):
        return self._binary(other, RationalRule.__add__, lambda x, y: x + y, "+")

    def __radd__(self, other):
        return self.__add__(other)

    def __sub__(self, other):
        return self._binary(other, RationalRule.__sub__, lambda x, y: x - y, "-")

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        return self._binary(other, RationalRule.__mul__, lambda x, y: x * y, "*")

    def __rmul__(self, other):
        return self.__mul__(other)

    def __truediv__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self * other.reciprocal()

    def __rtruediv__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return other * self.reciprocal()

    def __neg__(self):
        if self.is_exact:
            return Germ([-b for b in self.branches], stance=self.stance)
        src = self
        return Germ.from_sampler(lambda n: -src.term(n), f"-({src})", self.stance)

    def __pos__(self):
        return self

    def reciprocal(self) -> "Germ":
        if self.is_exact:
            return Germ([b.reciprocal() for b in self.branches], stance=self.stance)
        src = self
        return Germ.from_sampler(lambda n: 1 / src.term(n), f"1/({src})", self.stance)

    def __pow__(self, k):
        if isinstance(k, Fraction) and k.denominator == 1:
            k = k.numerator
        if not isinstance(k, int):
            if self.is_exact:
                raise NotRepresentable("only integer powers of exact germs stay exact")
            src = self
            return Germ.from_sampler(lambda n: src.term(n) ** mpf(k), f"({src})^{k}", self.stance)
        base = self if k >= 0 else self.reciprocal()
        result = Germ.const(1, self.stance)
        for _ in range(abs(k)):
            result = result * base
        return result

    # elementary functions
    def _exact_trig(self, shift: Fraction) -> "Germ | None":
        """sin(pi*(p*n + q) + shift*pi) per branch, when exactly rational."""
        periods, linear = [], []
        for b in self.branches:
            if not b.den.degree == 0 or not b.den.leading().is_rational() or b.num.degree > 1:
                return None
            d = b.den.leading().rational()
            parts = [c.pi_multiple() for c in b.num.coeffs] + [Fraction(0)] * (2 - len(b.num.coeffs))
            if any(c is None for c in parts):
                return None
            q, p = parts[0] / d, parts[1] / d
            linear.append((p, q))
            # smallest P with p*P an even integer
            periods.append(2 * p.denominator // gcd(2 * p.denominator, p.numerator) if p else 1)
        period = reduce(_lcm, periods, len(self.branches))
        if period > MAX_PERIOD:
            return None
        out = []
        for r in range(period):
            p, q = linear[r % len(self.branches)]
            value = _sin_pi(p * r + q + shift)
            if value is None:
                return None
            out.append(RationalRule.const(value))
        return Germ(out, stance=self.stance)

    def _sampled(self, fn, name) -> "Germ":
        src = self
        return Germ.from_sampler(lambda n: fn(src.term(n)), f"{name}({src})", self.stance)

    def sin(self, order=None) -> "Germ":
        if self.is_exact:
            exact = self._exact_trig(Fraction(0))
            if exact is not None:
                return exact
        return self._sampled(mp.sin, "sin")

    def cos(self, order=None) -> "Germ":
        if self.is_exact:
            exact = self._exact_trig(Fraction(1, 2))
            if exact is not None:
                return exact
        return self._sampled(mp.cos, "cos")

    def sqrt(self, order=None) -> "Germ":
        if self.is_exact:
            if any(b.eventual_sign() < 0 for b in self.branches):
                raise DomainViolation("sqrt of an eventually negative sequence")
            values = [b.constant_value() for b in self.branches]
            if all(v is not None and v.is_rational() for v in values):
                roots = [rational_root(v.rational(), 2) for v in values]
                if all(r is not None for r in roots):
                    return Germ([RationalRule.const(r) for r in roots], stance=self.stance)
        return self._sampled(mp.sqrt, "sqrt")

    def __str__(self):
        if not self.is_exact:
            return f"<sampled: {self.label}>"
        if len(self.branches) == 1:
            return f"<{self.branches[0]}>"
        parts = [f"n%{self.period}=={r}: {b}" for r, b in enumerate(self.branches)]
        return "<" + " | ".join(parts) + ">"

    def __repr__(self):
        return f"Germ({self})"


def _envelope(g: Germ) -> list:
    env = []
    with mp.workdps(SAMPLE_DPS):
        for base in SAMPLE_POINTS:
            start = max(base, g.n0)
            env.append(max(abs(g.term(n)) for n in range(start, start + SAMPLE_WINDOW)))
    return env


def _sampled_null(g: Germ):
    """Monotone-envelope heuristic over decades 10^3 .. 10^6.

    Null when the windowed envelope at least halves every decade and ends
    below 1e-2 (or is numerically zero throughout); not null when it ends
    at or above 1e-2 without halving over the last decade.
    """
    env = _envelope(g)
    if all(e <= ZERO_TOL for e in env):
        return True
    if env[-1] < SMALL and all(b <= a / 2 for a, b in zip(env, env[1:])):
        return True
    if env[-1] >= SMALL and env[-1] > env[-2] / 2:
        return False
    return UNDETERMINED


def germ_is_null(g: Germ):
    """Whether ``g`` is a null sequence: True, False or UNDETERMINED."""
    if g.is_exact:
        return all(b.is_null() for b in g.branches)
    return _sampled_null(g)


def germ_is_infinitesimal(g: Germ):
    """Whether ``g`` is infinitesimal in the ultrapower under its stance.

    Only the branch on the member residue class matters; this coincides
    with :func:`germ_is_null` whenever all branches agree.
    """
    if not g.is_exact:
        return _sampled_null(g)
    verdicts = [b.is_null() for b in g.branches]
    if all(verdicts) or not any(verdicts):
        return verdicts[0]
    return verdicts[g.stance.member_residue(g.period)]


def germ_sign(g: Germ):
    """Sign (1, 0 or -1) of ``g`` in the ultrapower, or UNDETERMINED."""
    if g.is_exact:
        signs = [b.eventual_sign() for b in g.branches]
        if len(set(signs)) == 1:
            return signs[0]
        return signs[g.stance.member_residue(g.period)]
    with mp.workdps(SAMPLE_DPS):
        samples = {n: g.term(n) for base in SAMPLE_POINTS for n in range(base, base + SAMPLE_WINDOW)}
    signs = {n: 0 if abs(v) <= ZERO_TOL else (1 if v > 0 else -1) for n, v in samples.items()}
    if len(set(signs.values())) == 1:
        return next(iter(signs.values()))
    by_parity = [{s for n, s in signs.items() if n % 2 == r} for r in (0, 1)]
    if all(len(s) == 1 for s in by_parity):
        return by_parity[g.stance.member_residue(2)].pop()
    return UNDETERMINED


def germ_adequal(g: Germ, h: Germ):
    """Whether ``g - h`` is null."""
    if g.stance != h.stance:
        raise ValueError("germs under different stances cannot be compared")
    return germ_is_null(g - h)


def germ_apply(f, g: Germ) -> Germ:
    """Termwise composition ``<f(u_n)>``.

    ``f`` is tried on the germ itself first, which keeps compositions built
    from field operations (and the exactly evaluable trig cases) exact.
    Anything else becomes a sampled germ evaluating ``f`` on each term.
    """
    try:
        result = f(g)
        if isinstance(result, Germ):
            return result
        if isinstance(result, (int, Fraction)):
            return Germ.const(result, g.stance)
    except (TypeError, NotRepresentable, AttributeError):
        pass
    except ZeroDivisionError as exc:
        raise DomainViolation(str(exc)) from exc
    with mp.workdps(SAMPLE_DPS):
        try:
            for base in SAMPLE_POINTS:
                start = max(base, g.n0)
                for n in range(start, start + SAMPLE_WINDOW):
                    f(g.term(n))
        except (ZeroDivisionError, ValueError, DomainViolation) as exc:
            raise DomainViolation(f"f is undefined on terms of {g}") from exc
    name = getattr(f, "__name__", "f")
    return Germ.from_sampler(lambda n: f(g.term(n)), f"{name}({g})", g.stance)


def germ_st(g: Germ) -> Fraction:
    """Standard part of an exact germ with a rational limit."""
    if not g.is_exact:
        raise NotRepresentable("standard part of a sampled germ is not available exactly")
    limits = [b.limit() for b in g.branches]
    if len({_ratio_key(*lim) for lim in limits}) > 1:
        num, den = limits[g.stance.member_residue(g.period)]
    else:
        num, den = limits[0]
    if num.is_zero():
        return Fraction(0)
    # num/den is rational iff num is a rational multiple of den
    ratio = num.coeffs[-1] / den.coeffs[-1] if len(num.coeffs) == len(den.coeffs) else None
    if ratio is None or num != den * ratio:
        raise NotRepresentable(f"standard part ({num})/({den}) is not rational")
    return ratio


def _ratio_key(num: PiPoly, den: PiPoly):
    if num.is_zero():
        return ()
    scale = den.coeffs[-1]
    return (tuple(c / scale for c in num.coeffs), tuple(c / scale for c in den.coeffs))


def germ_to_lc(g: Germ, order=None) -> LCNumber:
    """Substitute ``n = 1/eps`` into a single-branch rational rule."""
    if not g.is_exact or g.period != 1:
        raise NotRepresentable("only single-branch exact germs have a Levi-Civita image")
    rule = g.branches[0]

    def to_lc(poly: NPoly) -> LCNumber:
        terms = []
        for i, c in enumerate(poly.coeffs):
            terms.append((-i, c.rational()))
        return LCNumber(terms)

    num, den = to_lc(rule.num), to_lc(rule.den)
    if num.is_zero():
        return num
    return num * inv(den, TruncationOrder.of(order))


def lc_to_germ(a: LCNumber, stance: UltrafilterStance = DEFAULT_STANCE) -> Germ:
    """Substitute ``eps = 1/n``; exact when all exponents are integers."""
    if all(q.denominator == 1 for q, _ in a.terms):
        result = Germ.const(0, stance)
        n = Germ.index(stance)
        for q, c in a.terms:
            result = result + c * n ** int(-q)
        return result
    terms = [(mpf(q.numerator) / q.denominator, mpf(c.numerator) / c.denominator) for q, c in a.terms]
    return Germ.from_sampler(lambda n: sum((c * mpf(n) ** (-q) for q, c in terms), mpf(0)),
                             f"{a} at eps=1/n", stance)
