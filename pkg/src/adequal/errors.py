"""Exception hierarchy shared by every module.

Domain errors (everything deriving from :class:`AdequalError` except
:class:`ParseError`) map to CLI exit code 1; parse errors map to 2.
"""


class AdequalError(Exception):
    """Base class for all library errors."""


class Unlimited(AdequalError, ArithmeticError):
    """A standard part was requested for an unlimited (infinite) value."""


class ZeroInput(AdequalError, ZeroDivisionError):
    """An operation that needs a nonzero argument received zero."""


class TruncationError(AdequalError, ArithmeticError):
    """A truncated value does not carry enough terms for the requested result."""


class NotRepresentable(AdequalError, ArithmeticError):
    """The value has no exact representation in the requested carrier.

    Raised e.g. for ``sin`` of an unlimited element, or ``sqrt(2)`` over the
    rationals.  Callers use it to fall back to the sampled germ model.
    """


class DomainViolation(AdequalError, ValueError):
    """A function was evaluated outside its domain."""


class NotAdequal(AdequalError, ValueError):
    """A witness point is not infinitely close to the probed point."""


class InvalidStance(AdequalError, ValueError):
    """Ultrafilter decisions that violate the filter laws."""


class StanceUndecided(AdequalError, LookupError):
    """The stance does not decide membership of a needed index set."""


class NoBracket(AdequalError, ValueError):
    """The polynomial does not change sign on the given interval."""


class OutOfRange(AdequalError, ValueError):
    """An argument lies outside the range the operation is defined on."""


class InconsistentDerivative(AdequalError, ArithmeticError):
    """Different infinitesimal increments produced different derivatives."""


class ParseError(AdequalError, ValueError):
    """Syntax error in an expression, with position and expected tokens."""

    def __init__(self, message, position=None, expected=()):
        self.position = position
        self.expected = frozenset(expected)
        detail = message
        if position is not None:
            detail += f" at position {position}"
        if self.expected:
            detail += " (expected one of: " + ", ".join(sorted(self.expected)) + ")"
        super().__init__(detail)
