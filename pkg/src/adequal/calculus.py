"""Derivatives as standard parts of difference quotients, microcontinuity
probes and a continuity classifier.

Values at nonstandard points are computed in the Levi-Civita carrier when
possible.  When an expression leaves that carrier (``sin`` of an unlimited
or appreciable non-zero argument) the point and witness are translated to
sequence germs by ``eps -> 1/n`` and the gap is judged there instead.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from math import ceil
from typing import Sequence

from .errors import (DomainViolation, InconsistentDerivative, NotAdequal, NotRepresentable,
                     StanceUndecided, ZeroInput)
from .expr import ExprFn
from .germ import (DEFAULT_STANCE, UNDETERMINED, Germ, UltrafilterStance, germ_is_infinitesimal,
                   lc_to_germ)
from .lcfield import (EPS, H, LCNumber, Magnitude, TruncationOrder, adequal, classify, div,
                      format_fraction, mul, st, sub)

__all__ = ["derivative_at", "Verdict", "ProbeReport", "microcontinuous_at", "Interval",
           "ContinuityClass", "ContinuityResult", "classify_continuity", "WallisResult",
           "wallis_area", "GRID_PER_UNIT", "MAX_GRID"]

GRID_PER_UNIT = 10  # grid spacing 1/10, i.e. 11 points on a unit interval
MAX_GRID = 401


# -- derivative ------------------------------------------------------------

def _one_derivative(f: ExprFn, x0: Fraction, dx: LCNumber, order) -> Fraction:
    if dx.is_zero():
        raise ZeroInput("dx must be nonzero")
    if classify(dx) is not Magnitude.INFINITESIMAL:
        raise ValueError(f"dx = {dx} is not infinitesimal")
    k = TruncationOrder.of(order).max_exponent
    # the quotient loses v(dx) orders of precision; compensate up front
    work = TruncationOrder(k + max(dx.valuation, Fraction(0)))
    x = LCNumber.const(x0)
    dy = sub(LCNumber.coerce(f(x + dx, work)), LCNumber.coerce(f(x, work)))
    return st(div(dy, dx, work))


def derivative_at(f: ExprFn, x0, dx, order=None) -> Fraction:
    """``st((f(x0 + dx) - f(x0)) / dx)`` for a nonzero infinitesimal ``dx``.

    ``dx`` may be a list; all increments must then give the same value or
    :class:`InconsistentDerivative` is raised.  An unlimited quotient
    raises :class:`Unlimited`.
    """
    x0 = Fraction(x0)
    increments = list(dx) if isinstance(dx, (list, tuple)) else [dx]
    if not increments:
        raise ValueError("no increment given")
    values = [_one_derivative(f, x0, LCNumber.coerce(d), order) for d in increments]
    if len(set(values)) > 1:
        shown = ", ".join(f"{d}: {format_fraction(v)}" for d, v in zip(increments, values))
        raise InconsistentDerivative(f"derivative depends on the increment ({shown})")
    return values[0]


# -- microcontinuity -------------------------------------------------------

class Verdict(str, Enum):
    MICROCONTINUOUS = "microcontinuous"
    FAILS = "fails"
    UNDETERMINED = "undetermined"


def _text(v) -> str:
    if isinstance(v, Fraction):
        return format_fraction(v)
    return str(v)


@dataclass(frozen=True)
class ProbeReport:
    point: str
    x: object
    witness: object
    gap: object  # LCNumber, Germ, or None when the gap could not be formed
    verdict: Verdict
    kind: str = "standard"

    @property
    def exact(self) -> bool:
        if isinstance(self.gap, Germ):
            return self.gap.is_exact
        return isinstance(self.gap, LCNumber)

    def to_record(self) -> str:
        gap = "?" if self.gap is None else _text(self.gap)
        return f"{self.verdict.value} | {self.point} | {_text(self.witness)} | {gap}"

    def to_dict(self) -> dict:
        return {"verdict": self.verdict.value, "point": self.point, "x": _text(self.x),
                "witness": _text(self.witness), "gap": None if self.gap is None else _text(self.gap),
                "kind": self.kind, "exact": self.exact}


def _lc_verdict(gap: LCNumber) -> Verdict:
    """Infinitesimality of a possibly truncated gap."""
    known = [q for q, _ in gap.terms if gap.order is None or q <= gap.order]
    if known:
        return Verdict.MICROCONTINUOUS if known[0] > 0 else Verdict.FAILS
    if gap.order is None or gap.order >= 0:
        return Verdict.MICROCONTINUOUS
    return Verdict.UNDETERMINED


def _germ_verdict(gap: Germ) -> Verdict:
    try:
        null = germ_is_infinitesimal(gap)
    except StanceUndecided:
        return Verdict.UNDETERMINED
    if null is UNDETERMINED:
        return Verdict.UNDETERMINED
    return Verdict.MICROCONTINUOUS if null else Verdict.FAILS


def _as_germ(v, stance) -> Germ:
    if isinstance(v, Germ):
        return v
    if isinstance(v, (int, Fraction)):
        return Germ.const(v, stance)
    return lc_to_germ(LCNumber.coerce(v), stance)


def _check_adequal(x, w, stance):
    if isinstance(x, Germ) or isinstance(w, Germ):
        close = germ_is_infinitesimal(_as_germ(w, stance) - _as_germ(x, stance))
        if close is False:
            raise NotAdequal(f"witness {_text(w)} is not infinitely close to {_text(x)}")
    elif not adequal(LCNumber.coerce(x), LCNumber.coerce(w)):
        raise NotAdequal(f"witness {_text(w)} is not infinitely close to {_text(x)}")


def _gap(f: ExprFn, x, w, order, stance):
    """``f(w) - f(x)`` in the LC carrier, else in the germ model."""
    if not isinstance(x, Germ) and not isinstance(w, Germ):
        try:
            return sub(LCNumber.coerce(f(LCNumber.coerce(w), order)),
                       LCNumber.coerce(f(LCNumber.coerce(x), order)))
        except NotRepresentable:
            pass
    gx, gw = _as_germ(x, stance), _as_germ(w, stance)
    try:
        return _as_germ(f(gw), stance) - _as_germ(f(gx), stance)
    except NotRepresentable:
        return None


def microcontinuous_at(f: ExprFn, x, witnesses: Sequence, order=None, *, point: str | None = None,
                       kind: str = "standard", stance: UltrafilterStance | None = None) -> ProbeReport:
    """Check that ``f(w) - f(x)`` is infinitesimal for every witness ``w``.

    The report carries the first failing witness, else the first
    undetermined one, else the last witness checked.
    """
    if not witnesses:
        raise ValueError("at least one witness is needed")
    if stance is None:
        stance = x.stance if isinstance(x, Germ) else DEFAULT_STANCE
    order = TruncationOrder.of(order)
    label = point if point is not None else _text(x)
    undecided = None
    last = None
    for w in witnesses:
        _check_adequal(x, w, stance)
        gap = _gap(f, x, w, order, stance)
        if gap is None:
            verdict = Verdict.UNDETERMINED
        elif isinstance(gap, Germ):
            verdict = _germ_verdict(gap)
        else:
            verdict = _lc_verdict(gap)
        report = ProbeReport(label, x, w, gap, verdict, kind)
        if verdict is Verdict.FAILS:
            return report
        if verdict is Verdict.UNDETERMINED and undecided is None:
            undecided = report
        last = report
    return undecided or last


# -- domains ---------------------------------------------------------------

_INF = {"inf", "+inf", "oo", "+oo", "∞", "+∞"}
_NEG_INF = {"-inf", "-oo", "-∞", "−inf", "−∞", "−oo"}
_INTERVAL = re.compile(r"^\s*([\[(])\s*([^,]+?)\s*,\s*([^,]+?)\s*([\])])\s*$")


@dataclass(frozen=True)
class Interval:
    """Interval with rational or infinite (None) endpoints."""

    lo: Fraction | None
    hi: Fraction | None
    lo_closed: bool = False
    hi_closed: bool = False

    def __post_init__(self):
        if self.lo is None and self.lo_closed or self.hi is None and self.hi_closed:
            raise ValueError("infinite endpoints cannot be closed")
        if self.lo is not None and self.hi is not None:
            if self.lo > self.hi or (self.lo == self.hi and not (self.lo_closed and self.hi_closed)):
                raise ValueError("empty interval")

    @classmethod
    def parse(cls, text: str) -> "Interval":
        m = _INTERVAL.match(text)
        if not m:
            raise ValueError(f"cannot read interval {text!r}; expected e.g. (0,1) or [0,inf)")
        left, a, b, right = m.groups()

        def end(s, infinite):
            if s in infinite:
                return None
            return Fraction(s.replace("−", "-"))

        lo, hi = end(a, _NEG_INF), end(b, _INF)
        return cls(lo, hi, left == "[", right == "]")

    def contains(self, x: Fraction) -> bool:
        if self.lo is not None and (x < self.lo or (x == self.lo and not self.lo_closed)):
            return False
        if self.hi is not None and (x > self.hi or (x == self.hi and not self.hi_closed)):
            return False
        return True

    def grid(self) -> list[Fraction]:
        """Standard probe points: spacing 1/10 over the bounded part (one
        unit next to a finite end of an unbounded interval, [-1, 1] for the
        whole line), widened if needed to stay within MAX_GRID points."""
        if self.lo is not None and self.hi is not None:
            a, b = self.lo, self.hi
        elif self.lo is not None:
            a, b = self.lo, self.lo + 1
        elif self.hi is not None:
            a, b = self.hi - 1, self.hi
        else:
            a, b = Fraction(-1), Fraction(1)
        if a == b:
            return [a]
        steps = max(1, ceil((b - a) * GRID_PER_UNIT))
        steps = min(steps, MAX_GRID - 1)
        h = (b - a) / steps
        return [a + j * h for j in range(steps + 1) if self.contains(a + j * h)]

    def __str__(self):
        lo = "-inf" if self.lo is None else format_fraction(self.lo)
        hi = "inf" if self.hi is None else format_fraction(self.hi)
        return f"{'[' if self.lo_closed else '('}{lo},{hi}{']' if self.hi_closed else ')'}"


# -- classification --------------------------------------------------------

class ContinuityClass(str, Enum):
    UNIFORMLY_CONTINUOUS = "uniformly_continuous"
    CONTINUOUS = "continuous"
    NEITHER = "neither"
    UNDETERMINED = "undetermined"


@dataclass(frozen=True)
class ContinuityResult:
    classification: ContinuityClass
    reports: tuple[ProbeReport, ...]
    deciding: tuple[ProbeReport, ...] = field(default=())

    def to_dict(self) -> dict:
        return {"classification": self.classification.value,
                "deciding": [r.to_dict() for r in self.deciding],
                "probes": len(self.reports)}


_PHASES = (Fraction(1, 2), Fraction(1), Fraction(3, 2))


def _standard_probes(domain: Interval, x0: Fraction):
    x = LCNumber.const(x0)
    out = []
    for step in (EPS, -EPS, EPS * EPS):
        # at a closed end only witnesses on the inward side lie in the domain
        if domain.lo is not None and x0 == domain.lo and step < 0:
            continue
        if domain.hi is not None and x0 == domain.hi and step > 0:
            continue
        out.append(x + step)
    return out


def _endpoint_probes(a: Fraction, direction: int, stance):
    """Points infinitely close to the open end ``a``, approached from the
    interior (``direction`` = +1 above a, -1 below)."""
    base = LCNumber.const(a)
    d = direction
    lc_x = base + d * EPS
    yield f"{format_fraction(a)}{'+' if d > 0 else '-'}eps", lc_x, [base + d * 2 * EPS, base + d * (EPS + EPS * EPS)]
    # phase-locked sequence points: sin/cos of their reciprocals are exact
    n, pi = Germ.index(stance), Germ.pi(stance)
    shift = Germ.const(a, stance)
    gx = shift + d * (2 * pi * n).reciprocal()
    ws = [shift + d * (2 * pi * n + t * pi).reciprocal() for t in _PHASES]
    sign = "+" if d > 0 else "-"
    yield f"{format_fraction(a)}{sign}<1/(2*pi*n)>", gx, ws


def _unbounded_probes(direction: int):
    x = H if direction > 0 else -H
    yield ("H" if direction > 0 else "-H"), x, [x + direction * EPS, x - direction * EPS]


def classify_continuity(f: ExprFn, domain: Interval, order=None,
                        stance: UltrafilterStance | None = None) -> ContinuityResult:
    """Continuity class of ``f`` on ``domain`` from microcontinuity probes.

    Continuous when every standard grid point passes; uniformly continuous
    when in addition the built-in nonstandard points pass (points
    infinitely close to open ends, and H or -H on unbounded sides).  Any
    undecided probe that could change the answer gives ``undetermined``.
    The probe set is sound for the supported expressions but not complete.
    """
    if isinstance(domain, str):
        domain = Interval.parse(domain)
    stance = DEFAULT_STANCE if stance is None else stance
    order = TruncationOrder.of(order)
    standard = []
    for x0 in domain.grid():
        witnesses = _standard_probes(domain, x0)
        if witnesses:
            standard.append(microcontinuous_at(f, LCNumber.const(x0), witnesses, order,
                                               point=format_fraction(x0), kind="standard", stance=stance))
    nonstandard = []
    probes = []
    if domain.lo is not None and not domain.lo_closed:
        probes.extend(_endpoint_probes(domain.lo, 1, stance))
    if domain.hi is not None and not domain.hi_closed:
        probes.extend(_endpoint_probes(domain.hi, -1, stance))
    if domain.hi is None:
        probes.extend(_unbounded_probes(1))
    if domain.lo is None:
        probes.extend(_unbounded_probes(-1))
    for label, x, ws in probes:
        nonstandard.append(microcontinuous_at(f, x, ws, order, point=label, kind="nonstandard",
                                              stance=stance))
    reports = tuple(standard + nonstandard)

    def pick(rs, verdict):
        # exact gaps first so the deciding witness is a certified one
        return tuple(sorted((r for r in rs if r.verdict is verdict), key=lambda r: not r.exact))

    failed = pick(standard, Verdict.FAILS)
    if failed:
        return ContinuityResult(ContinuityClass.NEITHER, reports, failed)
    unknown = pick(standard, Verdict.UNDETERMINED)
    if unknown:
        return ContinuityResult(ContinuityClass.UNDETERMINED, reports, unknown)
    failed = pick(nonstandard, Verdict.FAILS)
    if failed:
        return ContinuityResult(ContinuityClass.CONTINUOUS, reports, failed)
    unknown = pick(nonstandard, Verdict.UNDETERMINED)
    if unknown:
        return ContinuityResult(ContinuityClass.UNDETERMINED, reports, unknown)
    return ContinuityResult(ContinuityClass.UNIFORMLY_CONTINUOUS, reports, tuple(nonstandard))


# -- area of a triangle from infinitely many strips ------------------------

@dataclass(frozen=True)
class WallisResult:
    area: Fraction
    strip: LCNumber
    count: LCNumber
    product: LCNumber
    certificate: tuple[str, ...]


def wallis_area(a, b) -> WallisResult:
    """Area ``ab/2`` as (strip width ``a*eps``) times (``(b/2)*H`` strips).

    The product is formed in the field; the certificate records the two
    factors and the cancellation of the exponents.
    """
    a, b = Fraction(a), Fraction(b)
    if a <= 0 or b <= 0:
        raise DomainViolation("both lengths must be positive")
    strip = LCNumber.monomial(a, 1)
    count = LCNumber.monomial(b / 2, -1)
    product = mul(strip, count)
    if not product.is_standard():
        raise AssertionError(f"product {product} is not standard")
    area = st(product)
    (e1, c1), (e2, c2) = strip.terms[0], count.terms[0]
    certificate = (
        f"strip width: {strip}",
        f"strip count: {count}",
        f"exponents: {format_fraction(e1)} + {format_fraction(e2)} = {format_fraction(e1 + e2)}",
        f"coefficients: {format_fraction(c1)} * {format_fraction(c2)} = {format_fraction(c1 * c2)}",
        f"product: {product}",
    )
    return WallisResult(area, strip, count, product, certificate)
