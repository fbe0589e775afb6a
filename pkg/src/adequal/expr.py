"""Expression trees in one variable, evaluable on several carriers.

An :class:`ExprFn` is built by the parser in :mod:`adequal.notation` (or by
hand from the node classes) and can be called on

* rationals (``int``/``Fraction``): exact, elementary tags only where the
  value is rational (``sin(0)``, ``sqrt(9/4)``);
* :class:`~adequal.lcfield.LCNumber`: exact field operations, elementary
  tags by truncated Taylor expansion;
* :class:`~adequal.germ.Germ`: termwise;
* mpmath numbers: plain numerics, used for sampled germs;
* :class:`~adequal.roots.Polynomial` (any object with ring operators).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from mpmath import mp, mpf

from . import lcfield
from .errors import DomainViolation, NotRepresentable
from .lcfield import LCNumber, TruncationOrder, format_fraction, rational_root

ELEMENTARY = ("sin", "cos", "sqrt")
SYMBOLS = ("eps", "H", "pi")

# binding strength used when printing
_PREC_ADD, _PREC_MUL, _PREC_NEG, _PREC_POW, _PREC_ATOM = 1, 2, 3, 4, 5


class Node:
    __slots__ = ()

    def precedence(self) -> int:
        return _PREC_ATOM


@dataclass(frozen=True)
class Const(Node):
    value: Fraction

    def precedence(self):
        if self.value < 0:
            return _PREC_NEG
        return _PREC_ATOM if self.value.denominator == 1 else _PREC_MUL

    def __str__(self):
        return format_fraction(self.value)


@dataclass(frozen=True)
class Var(Node):
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Symbol(Node):
    """Named constant: ``eps``, ``H`` (= 1/eps) or ``pi``."""

    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Alternating(Node):
    """The sign pattern ``(-1)^n`` of an index variable."""

    var: str

    def __str__(self):
        return f"(-1)^{self.var}"


@dataclass(frozen=True)
class BinOp(Node):
    op: str
    left: Node
    right: Node

    def precedence(self):
        return _PREC_ADD if self.op in "+-" else _PREC_MUL

    def __str__(self):
        p = self.precedence()
        left = _wrap(self.left, p)
        # left-associative: equal precedence on the right needs parentheses
        right = _wrap(self.right, p + 1)
        sep = f" {self.op} " if self.op in "+-" else self.op
        return f"{left}{sep}{right}"


@dataclass(frozen=True)
class Neg(Node):
    arg: Node

    def precedence(self):
        return _PREC_NEG

    def __str__(self):
        return "-" + _wrap(self.arg, _PREC_NEG)


@dataclass(frozen=True)
class Pow(Node):
    base: Node
    exponent: Fraction

    def precedence(self):
        return _PREC_POW

    def __str__(self):
        e = format_fraction(self.exponent)
        if self.exponent.denominator != 1:
            e = f"({e})"
        return f"{_wrap(self.base, _PREC_ATOM)}^{e}"


@dataclass(frozen=True)
class Call(Node):
    name: str
    arg: Node

    def __str__(self):
        return f"{self.name}({self.arg})"


def _wrap(node: Node, needed: int) -> str:
    text = str(node)
    return f"({text})" if node.precedence() < needed else text


def _is_lc(v) -> bool:
    return isinstance(v, LCNumber)


def _is_numeric(v) -> bool:
    return isinstance(v, (mpf, float))


def elementary(name: str, v, order=None):
    """Apply ``sin``/``cos``/``sqrt`` on whichever carrier ``v`` lives in."""
    if isinstance(v, int):
        v = Fraction(v)
    if isinstance(v, Fraction):
        if name == "sqrt":
            if v < 0:
                raise DomainViolation(f"sqrt({format_fraction(v)}) is undefined")
            root = rational_root(v, 2)
            if root is None:
                raise NotRepresentable(f"sqrt({format_fraction(v)}) is irrational")
            return root
        if v == 0:
            return Fraction(0) if name == "sin" else Fraction(1)
        raise NotRepresentable(f"{name}({format_fraction(v)}) is irrational")
    if isinstance(v, LCNumber):
        return getattr(lcfield, name)(v, order)
    if _is_numeric(v):
        if name == "sqrt" and v < 0:
            raise DomainViolation("sqrt of a negative number")
        return getattr(mp, name)(v)
    method = getattr(v, name, None)
    if method is None:
        raise NotRepresentable(f"{name} is not available on {type(v).__name__}")
    return method()


class ExprFn:
    """Callable expression in the variable ``var`` (default ``x``)."""

    __slots__ = ("node", "var")

    def __init__(self, node: Node, var: str = "x"):
        self.node = node
        self.var = var

    def __call__(self, value, order=None):
        order = TruncationOrder.of(order)
        if isinstance(value, int):
            value = Fraction(value)
        try:
            return self._eval(self.node, value, order)
        except ZeroDivisionError as exc:
            raise DomainViolation(f"{self} is undefined at {value}: {exc}") from exc

    def _symbol(self, name: str, value):
        if name == "pi":
            if _is_numeric(value):
                return +mp.pi
            from .germ import PiPoly
            return PiPoly([0, 1])
        if _is_numeric(value):
            raise NotRepresentable(f"{name} has no numerical value")
        return lcfield.EPS if name == "eps" else lcfield.H

    def _eval(self, node: Node, value, order):
        if isinstance(node, Const):
            return mpf(node.value.numerator) / node.value.denominator if _is_numeric(value) else node.value
        if isinstance(node, Var):
            return value
        if isinstance(node, Symbol):
            return self._symbol(node.name, value)
        if isinstance(node, Alternating):
            if isinstance(value, Fraction) and value.denominator == 1:
                return Fraction((-1) ** (value.numerator % 2))
            if _is_numeric(value):
                return mpf(-1) ** int(value)
            from .germ import Germ
            if isinstance(value, Germ):
                return Germ.alternating(value.stance)
            raise NotRepresentable("(-1)^n needs an integer index or a germ")
        if isinstance(node, Neg):
            return -self._eval(node.arg, value, order)
        if isinstance(node, BinOp):
            a = self._eval(node.left, value, order)
            b = self._eval(node.right, value, order)
            if node.op == "+":
                return a + b
            if node.op == "-":
                return a - b
            if node.op == "*":
                return a * b
            if _is_lc(b) or (_is_lc(a) and isinstance(b, Fraction)):
                return lcfield.div(LCNumber.coerce(a), LCNumber.coerce(b), order)
            if isinstance(b, Fraction) and b == 0:
                raise ZeroDivisionError("division by zero")
            return a / b
        if isinstance(node, Pow):
            base = self._eval(node.base, value, order)
            e = node.exponent
            if _is_lc(base):
                return lcfield.power(base, e, order)
            if isinstance(base, Fraction) and e.denominator != 1:
                root = rational_root(base, e.denominator) if base >= 0 or e.denominator % 2 else None
                if root is None:
                    raise NotRepresentable(f"{format_fraction(base)}^({format_fraction(e)}) is irrational")
                return root ** e.numerator
            if _is_numeric(base):
                return base ** (mpf(e.numerator) / e.denominator)
            return base ** (e.numerator if e.denominator == 1 else e)
        if isinstance(node, Call):
            return elementary(node.name, self._eval(node.arg, value, order), order)
        raise TypeError(f"unknown node {node!r}")

    # -- structure -----------------------------------------------------

    def variables(self) -> set:
        out = set()

        def walk(n):
            if isinstance(n, Var):
                out.add(n.name)
            elif isinstance(n, Alternating):
                out.add(n.var)
            elif isinstance(n, Neg):
                walk(n.arg)
            elif isinstance(n, Call):
                walk(n.arg)
            elif isinstance(n, Pow):
                walk(n.base)
            elif isinstance(n, BinOp):
                walk(n.left)
                walk(n.right)
        walk(self.node)
        return out

    def _combine(self, other, op):
        other_node = other.node if isinstance(other, ExprFn) else Const(Fraction(other))
        return ExprFn(BinOp(op, self.node, other_node), self.var)

    def __add__(self, other):
        return self._combine(other, "+")

    def __sub__(self, other):
        return self._combine(other, "-")

    def __mul__(self, other):
        return self._combine(other, "*")

    def __truediv__(self, other):
        return self._combine(other, "/")

    def __eq__(self, other):
        return isinstance(other, ExprFn) and (self.node, self.var) == (other.node, other.var)

    def __hash__(self):
        return hash((self.node, self.var))

    def __str__(self):
        return str(self.node)

    def __repr__(self):
        return f"ExprFn('{self}')"


def identity(var: str = "x") -> ExprFn:
    return ExprFn(Var(var), var)
