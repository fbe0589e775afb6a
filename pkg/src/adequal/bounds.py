"""Certified lower bounds for how far a fraction m/n can sit from sqrt(2).

For ``1 <= m/n <= 3/2`` the integer ``|2n^2 - m^2|`` is at least 1, since
2n^2 has an odd power of two and m^2 an even one.  Dividing by
``n^2 (sqrt(2) + m/n) <= 3 n^2`` gives ``|sqrt(2) - m/n| >= 1/(3n^2)``.
Everything here is checked with integers only.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import OutOfRange
from .lcfield import format_fraction
from .roots import sqrt2_oracle

__all__ = ["GapCertificate", "irr_gap", "SweepSummary", "sweep"]


@dataclass(frozen=True)
class GapCertificate:
    m: int
    n: int
    integer_gap: int
    lower_bound: Fraction
    verified: bool
    checks: tuple[tuple[str, bool], ...] = ()

    def __str__(self):
        flag = "true" if self.verified else "false"
        return f"gap={self.integer_gap} bound={format_fraction(self.lower_bound)} verified={flag}"

    def to_dict(self) -> dict:
        return {"m": self.m, "n": self.n, "gap": self.integer_gap,
                "bound": format_fraction(self.lower_bound), "verified": self.verified,
                "checks": {name: ok for name, ok in self.checks}}


def _two_adic(k: int) -> int:
    return (k & -k).bit_length() - 1


def irr_gap(m: int, n: int) -> GapCertificate:
    """Certificate that ``|sqrt(2) - m/n| >= 1/(3 n^2)``."""
    if n < 1 or m < 1:
        raise OutOfRange("m and n must be positive integers")
    if not (n <= m and 2 * m <= 3 * n):
        raise OutOfRange(f"m/n = {m}/{n} lies outside [1, 3/2]")
    gap = abs(2 * n * n - m * m)
    bound = Fraction(1, 3 * n * n)
    d = 3 * n * n
    if 2 * n * n > m * m:
        # sqrt(2) > m/n: need sqrt(2) >= (3mn + 1)/d
        direct = 2 * d * d >= (3 * m * n + 1) ** 2
    else:
        # sqrt(2) < m/n: need sqrt(2) <= (3mn - 1)/d
        direct = (3 * m * n - 1) ** 2 >= 2 * d * d
    checks = (
        ("parity", _two_adic(2 * n * n) % 2 == 1 and _two_adic(m * m) % 2 == 0),
        ("gap>=1", gap >= 1),
        ("m/n<=3/2", 2 * m <= 3 * n),
        ("sqrt2<=3/2", 2 * 4 <= 9),
        ("cross-multiplied", direct),
    )
    return GapCertificate(m, n, gap, bound, all(ok for _, ok in checks), checks)


@dataclass(frozen=True)
class SweepSummary:
    limit: int
    pairs: int
    verified: bool
    failures: tuple[tuple[int, int], ...]
    min_ratio: Fraction
    argmin: tuple[int, int]

    def __str__(self):
        m, n = self.argmin
        return (f"pairs={self.pairs} verified={'true' if self.verified else 'false'} "
                f"min_ratio={float(self.min_ratio):.6f} at m/n={m}/{n}")

    def to_dict(self) -> dict:
        return {"limit": self.limit, "pairs": self.pairs, "verified": self.verified,
                "failures": [list(p) for p in self.failures],
                "min_ratio": float(self.min_ratio), "min_ratio_exact": format_fraction(self.min_ratio),
                "argmin": list(self.argmin)}


def sweep(limit: int, digits: int = 50) -> SweepSummary:
    """Check every ``m/n`` in ``[1, 3/2]`` with ``n <= limit``.

    Each pair gets an :func:`irr_gap` certificate; in addition the actual
    distance is bounded below against a ``digits``-place bracket of sqrt(2)
    and the smallest ``distance / bound`` ratio is reported (a certified
    lower bound on the true minimum).
    """
    if limit < 1:
        raise OutOfRange("limit must be at least 1")
    lo, hi = sqrt2_oracle(digits)
    scale = 10 ** digits
    s_lo = lo.numerator * (scale // lo.denominator)
    s_hi = s_lo + 1
    best, argmin = None, (1, 1)
    failures = []
    pairs = 0
    for n in range(1, limit + 1):
        for m in range(n, 3 * n // 2 + 1):
            pairs += 1
            if not irr_gap(m, n).verified:
                failures.append((m, n))
            # ratio = 3n^2 |sqrt2 - m/n| >= 3n (s n - m scale) / scale
            if m * scale < s_lo * n:
                num = 3 * n * (s_lo * n - m * scale)
            elif m * scale > s_hi * n:
                num = 3 * n * (m * scale - s_hi * n)
            else:
                num = 0
            if best is None or num < best:
                best, argmin = num, (m, n)
    min_ratio = Fraction(best, scale)
    return SweepSummary(limit, pairs, not failures and min_ratio > 1, tuple(failures), min_ratio, argmin)
