"""Decimal root extraction by tenfold subdivision, and plain bisection.

Both routines work on exact rational polynomials and keep a certificate
for every step: the bracketing interval and the exact signs of the
polynomial at its ends.  :func:`stevin_root` gains one decimal digit per
step by cutting the bracket into ten equal parts; :func:`cauchy_bisect`
halves it, so it needs about 3.32 steps for the same gain.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .errors import NoBracket, NotRepresentable
from .lcfield import format_fraction

__all__ = ["Polynomial", "StevinStep", "StevinDigits", "stevin_root", "BisectStep", "BisectTrace",
           "cauchy_bisect", "truncated_decimal", "sqrt2_oracle"]


def _sign(v) -> int:
    return (v > 0) - (v < 0)


class Polynomial:
    """Dense polynomial with exact rational coefficients; ``coeffs[i]`` is
    the coefficient of ``x**i``."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def x(cls) -> "Polynomial":
        return cls([0, 1])

    @classmethod
    def from_expr(cls, fn) -> "Polynomial":
        """Expand an :class:`~adequal.expr.ExprFn` that is polynomial in x."""
        value = fn(cls.x())
        if isinstance(value, (int, Fraction)):
            return cls([value])
        if not isinstance(value, Polynomial):
            raise NotRepresentable(f"{fn} is not a polynomial")
        return value

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> "Polynomial":
        return Polynomial(i * c for i, c in enumerate(self.coeffs) if i)

    @staticmethod
    def _coerce(other):
        if isinstance(other, Polynomial):
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial([other])
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return Polynomial(x + y for x, y in zip(a, b))

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(-c for c in self.coeffs)

    def __sub__(self, other):
        other = self._coerce(other)
        return NotImplemented if other is None else self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        return NotImplemented if other is None else other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if not self.coeffs or not other.coeffs:
            return Polynomial()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Polynomial(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if other.degree > 0:
            raise NotRepresentable("division by a nonconstant polynomial")
        if other.degree < 0:
            raise ZeroDivisionError("polynomial division by zero")
        return Polynomial(c / other.coeffs[0] for c in self.coeffs)

    def __rtruediv__(self, other):
        if self.degree == 0:
            return Polynomial([Fraction(other) / self.coeffs[0]])
        raise NotRepresentable("division by a nonconstant polynomial")

    def __pow__(self, k):
        if isinstance(k, Fraction) and k.denominator == 1:
            k = k.numerator
        if not isinstance(k, int) or k < 0:
            raise NotRepresentable("polynomials only take nonnegative integer powers")
        result = Polynomial([1])
        for _ in range(k):
            result = result * self
        return result

    def __eq__(self, other):
        other = self._coerce(other)
        return other is not None and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            mag = format_fraction(abs(c))
            var = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            body = mag if not var else (var if mag == "1" else f"{mag}*{var}")
            parts.append(("-" if c < 0 else "+", body))
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        return out + "".join(f" {s} {b}" for s, b in parts[1:])

    def __repr__(self):
        return f"Polynomial('{self}')"


# -- Stevin ----------------------------------------------------------------

_SIGN_CHAR = {-1: "−", 0: "0", 1: "+"}


@dataclass(frozen=True)
class StevinStep:
    """One subdivision: the chosen tenth ``[lo, hi]`` and its end signs.

    ``sign_changes`` counts the candidate tenths (sign changes or exact
    zeros at decile points); the leftmost one is always taken.
    """

    index: int
    lo: Fraction
    hi: Fraction
    sign_lo: int
    sign_hi: int
    digit: int
    sign_changes: int
    exact_zero: bool = False

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def line(self) -> str:
        return (f"step {self.index}: [{format_fraction(self.lo)}, {format_fraction(self.hi)}] "
                f"signs({_SIGN_CHAR[self.sign_lo]},{_SIGN_CHAR[self.sign_hi]})"
                + (" exact-zero" if self.exact_zero else "")
                + (f" candidates={self.sign_changes}" if self.sign_changes > 1 else ""))


@dataclass(frozen=True)
class StevinDigits:
    lo: Fraction
    hi: Fraction
    digits: tuple[int, ...]
    steps: tuple[StevinStep, ...]
    exact_root: Fraction | None = None

    @property
    def integer_part(self) -> int:
        return int(self.lo) if self.lo.denominator == 1 else self.lo.numerator // self.lo.denominator

    @property
    def value(self) -> Fraction:
        """Left end of the final bracket, ``lo + width * 0.d1d2...``."""
        k = len(self.digits)
        frac = Fraction(int("".join(map(str, self.digits)) or "0"), 10 ** k)
        return self.lo + (self.hi - self.lo) * frac

    def text(self) -> str:
        """``I.d1d2...dk`` for a unit bracket starting at a nonnegative
        integer; otherwise ``lo + width*0.d1...dk`` with exact literals."""
        ds = "".join(map(str, self.digits))
        if self.hi - self.lo == 1 and self.lo.denominator == 1 and self.lo >= 0:
            return f"{self.lo.numerator}.{ds}" if ds else str(self.lo.numerator)
        return f"{format_fraction(self.lo)} + {format_fraction(self.hi - self.lo)}*0.{ds}"

    def certificate_lines(self) -> list[str]:
        return [s.line() for s in self.steps]

    def __str__(self):
        return self.text()


def _check_bracket(p: Polynomial, lo: Fraction, hi: Fraction) -> tuple[int, int]:
    if p.degree < 1:
        raise NoBracket("root extraction needs a polynomial of degree >= 1")
    if not lo < hi:
        raise NoBracket(f"empty interval [{format_fraction(lo)}, {format_fraction(hi)}]")
    s_lo, s_hi = _sign(p(lo)), _sign(p(hi))
    if s_lo * s_hi >= 0:
        raise NoBracket(f"p({format_fraction(lo)}) and p({format_fraction(hi)}) do not have opposite signs")
    return s_lo, s_hi


def stevin_root(p: Polynomial, lo, hi, digits: int) -> StevinDigits:
    """Extract ``digits`` decimal digits of a root bracketed by ``[lo, hi]``.

    Each step evaluates ``p`` exactly at the nine interior decile points and
    keeps the leftmost tenth showing a sign change.  Hitting an exact zero
    at a decile point ends the extraction; remaining digits are 0.
    """
    lo, hi = Fraction(lo), Fraction(hi)
    s_a, s_b = _check_bracket(p, lo, hi)
    a, b = lo, hi
    out_digits: list[int] = []
    steps: list[StevinStep] = []
    for i in range(1, digits + 1):
        w = (b - a) / 10
        points = [a + j * w for j in range(11)]
        signs = [s_a] + [_sign(p(x)) for x in points[1:10]] + [s_b]
        events = []
        for j in range(10):
            if j + 1 <= 9 and signs[j + 1] == 0:
                events.append((j + 1, True))
            elif signs[j] * signs[j + 1] < 0:
                events.append((j, False))
        digit, is_zero = events[0]
        if is_zero:
            root = points[digit]
            steps.append(StevinStep(i, root, root + w, 0, signs[digit + 1] if digit < 10 else s_b,
                                    digit, len(events), True))
            out_digits.append(digit)
            out_digits.extend([0] * (digits - i))
            return StevinDigits(lo, hi, tuple(out_digits), tuple(steps), root)
        a, b = points[digit], points[digit + 1]
        s_a, s_b = signs[digit], signs[digit + 1]
        steps.append(StevinStep(i, a, b, s_a, s_b, digit, len(events)))
        out_digits.append(digit)
    return StevinDigits(lo, hi, tuple(out_digits), tuple(steps))


# -- Cauchy bisection ------------------------------------------------------

@dataclass(frozen=True)
class BisectStep:
    index: int
    lo: Fraction
    hi: Fraction
    sign_lo: int
    sign_hi: int

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def line(self) -> str:
        return (f"step {self.index}: [{format_fraction(self.lo)}, {format_fraction(self.hi)}] "
                f"signs({_SIGN_CHAR[self.sign_lo]},{_SIGN_CHAR[self.sign_hi]})")


@dataclass(frozen=True)
class BisectTrace:
    lo: Fraction
    hi: Fraction
    steps: tuple[BisectStep, ...]
    exact_root: Fraction | None = None

    @property
    def final(self) -> tuple[Fraction, Fraction]:
        if self.exact_root is not None:
            return self.exact_root, self.exact_root
        if not self.steps:
            return self.lo, self.hi
        return self.steps[-1].lo, self.steps[-1].hi

    @property
    def width(self) -> Fraction:
        a, b = self.final
        return b - a


def cauchy_bisect(p: Polynomial, lo, hi, steps: int) -> BisectTrace:
    """Halve the bracket ``steps`` times, stopping early on an exact zero."""
    lo, hi = Fraction(lo), Fraction(hi)
    s_a, s_b = _check_bracket(p, lo, hi)
    a, b = lo, hi
    trace: list[BisectStep] = []
    for i in range(1, steps + 1):
        mid = (a + b) / 2
        s_m = _sign(p(mid))
        if s_m == 0:
            return BisectTrace(lo, hi, tuple(trace), mid)
        if s_a * s_m < 0:
            b, s_b = mid, s_m
        else:
            a, s_a = mid, s_m
        trace.append(BisectStep(i, a, b, s_a, s_b))
    return BisectTrace(lo, hi, tuple(trace))


def truncated_decimal(lo: Fraction, hi: Fraction, places: int) -> str | None:
    """Decimal digits shared by every point of ``[lo, hi)``, truncated to
    ``places``, or None when the bracket straddles a truncation boundary."""
    scale = 10 ** places
    a = (lo * scale).__floor__()
    b = (hi * scale).__ceil__() - 1
    if a != b or a < 0:
        return None
    whole, frac = divmod(a, scale)
    return f"{whole}.{frac:0{places}d}" if places else str(whole)


def sqrt2_oracle(digits: int = 50) -> tuple[Fraction, Fraction]:
    """Bracket ``[s, s + 10^-digits]`` around sqrt(2) from :func:`stevin_root`."""
    result = stevin_root(Polynomial([-2, 0, 1]), 1, 2, digits)
    s = result.value
    return s, s + Fraction(1, 10 ** digits)
