"""Parsing of expressions and rules, and semicolon rendering.

The grammar (published in ``docs/grammar.md``)::

    expr     = term , { ("+" | "-") , term } ;
    term     = unary , { ("*" | "/") , unary } ;
    unary    = ("-" | "+") , unary | power ;
    power    = primary , [ "^" , unary ] ;       (* right associative *)
    primary  = number | name | func , "(" , expr , ")" | "(" , expr , ")" ;
    number   = digit , { digit } , [ "." , digit , { digit } ] ;

so ``^`` binds tighter than unary minus, which binds tighter than ``*`` and
``/``.  ``-x^2`` is ``-(x^2)`` and ``eps^-1`` is ``1/eps``.  Exponents must
be rational constants, except for the special form ``(-1)^n`` in rules.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import NotRepresentable, ParseError
from .expr import (ELEMENTARY, Alternating, BinOp, Call, Const, ExprFn, Neg, Node, Pow, Symbol, Var)
from .lcfield import LCNumber, TruncationOrder, format_fraction, leading_order, st

__all__ = ["tokenize", "parse_tree", "parse_expr", "parse_lc", "parse_rule", "render_semicolon",
           "parse_semicolon", "SemicolonForm", "decimal_truncate", "MINUS"]

MINUS = "−"
DOT = "·"
EPSILON = "ε"

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:\.\d+)?)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^()−×]))")

# names accepted in each mode, besides the elementary function tags
_EXPR_NAMES = {"x": Var("x"), "eps": Symbol("eps"), "H": Symbol("H")}
_RULE_NAMES = {"n": Var("n"), "pi": Symbol("pi")}

_BINARY = {"+": 10, "-": 10, "*": 20, "/": 20, "^": 40}
_PREFIX_BP = 30


@dataclass(frozen=True)
class Token:
    kind: str  # "num", "name", "op", "end"
    text: str
    pos: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].isspace():
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        value = m.group(kind)
        if value == MINUS:
            value = "-"
        elif value == "×":
            value = "*"
        tokens.append(Token(kind, value, m.start(kind)))
        pos = m.end()
    tokens.append(Token("end", "", len(text)))
    return tokens


class _Parser:
    """Pratt parser over the token list."""

    def __init__(self, text: str, names: dict):
        self.tokens = tokenize(text)
        self.i = 0
        self.names = names

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def advance(self) -> Token:
        t = self.tokens[self.i]
        self.i += 1
        return t

    def expect(self, text: str) -> Token:
        if self.tok.text != text or self.tok.kind == "end":
            raise ParseError(f"unexpected {self._describe(self.tok)}", self.tok.pos, {repr(text)})
        return self.advance()

    @staticmethod
    def _describe(t: Token) -> str:
        return "end of input" if t.kind == "end" else repr(t.text)

    def _operand_expected(self) -> set:
        return {"number", "'('", "'-'", *self.names, *ELEMENTARY}

    def parse(self) -> Node:
        node = self.expression(0)
        if self.tok.kind != "end":
            raise ParseError(f"unexpected {self._describe(self.tok)}", self.tok.pos,
                             {"end of input", *(repr(op) for op in _BINARY)})
        return node

    def expression(self, rbp: int) -> Node:
        left = self.prefix()
        while self.tok.kind == "op" and _BINARY.get(self.tok.text, -1) > rbp:
            op = self.advance()
            if op.text == "^":
                left = self.power(left, op)
            else:
                right = self.expression(_BINARY[op.text])
                left = BinOp(op.text, left, right)
        return left

    def power(self, base: Node, op: Token) -> Node:
        exp_pos = self.tok.pos
        exponent = self.expression(_BINARY["^"] - 1)
        if isinstance(exponent, Var) and base == Const(Fraction(-1)):
            return Alternating(exponent.name)
        value = _constant_value(exponent)
        if value is None:
            raise ParseError("exponent must be a rational constant", exp_pos, {"number"})
        return Pow(base, value)

    def prefix(self) -> Node:
        t = self.tok
        if t.kind == "num":
            self.advance()
            return Const(Fraction(t.text))
        if t.kind == "op" and t.text in "+-":
            self.advance()
            arg = self.expression(_PREFIX_BP)
            if t.text == "+":
                return arg
            if isinstance(arg, Const):
                return Const(-arg.value)
            return Neg(arg)
        if t.kind == "op" and t.text == "(":
            self.advance()
            node = self.expression(0)
            self.expect(")")
            return node
        if t.kind == "name":
            self.advance()
            if t.text in ELEMENTARY:
                self.expect("(")
                arg = self.expression(0)
                self.expect(")")
                return Call(t.text, arg)
            if t.text in self.names:
                return self.names[t.text]
            raise ParseError(f"unknown name {t.text!r}", t.pos, self._operand_expected())
        raise ParseError(f"unexpected {self._describe(t)}", t.pos, self._operand_expected())


def _constant_value(node: Node) -> Fraction | None:
    """Rational value of a variable-free, symbol-free subtree."""
    if isinstance(node, Const):
        return node.value
    if isinstance(node, Neg):
        v = _constant_value(node.arg)
        return None if v is None else -v
    if isinstance(node, BinOp):
        a, b = _constant_value(node.left), _constant_value(node.right)
        if a is None or b is None:
            return None
        if node.op == "/":
            return None if b == 0 else a / b
        return {"+": a + b, "-": a - b, "*": a * b}[node.op]
    if isinstance(node, Pow):
        v = _constant_value(node.base)
        if v is None or node.exponent.denominator != 1 or (v == 0 and node.exponent < 0):
            return None
        return v ** node.exponent.numerator
    return None


def parse_tree(text: str, names: dict | None = None) -> Node:
    return _Parser(text, _EXPR_NAMES if names is None else names).parse()


def parse_expr(text: str, order=None) -> ExprFn | LCNumber:
    """Parse an expression in ``x`` (-> ExprFn) or a constant (-> LCNumber).

    ``eps`` denotes the positive infinitesimal and ``H`` its inverse.
    """
    node = parse_tree(text)
    fn = ExprFn(node, "x")
    if "x" in fn.variables():
        return fn
    return LCNumber.coerce(fn(Fraction(0), TruncationOrder.of(order)))


def parse_lc(text: str, order=None) -> LCNumber:
    value = parse_expr(text, order)
    if not isinstance(value, LCNumber):
        raise ParseError("expected a constant, found an expression in x", 0)
    return value


def parse_function(text: str) -> ExprFn:
    """Parse ``text`` as a function of ``x`` (constants become constant functions)."""
    return ExprFn(parse_tree(text), "x")


def parse_rule(text: str, stance=None):
    """Parse a sequence rule in ``n`` into a :class:`~adequal.germ.Germ`.

    Accepts quotients of polynomials in ``n`` with rational coefficients,
    the symbol ``pi``, the special form ``(-1)^n`` and the elementary tags,
    e.g. ``"((-1)^n)/(n)"`` or ``"1/(2*pi*n + pi/2)"``.
    """
    from .germ import DEFAULT_STANCE, Germ, PiPoly

    stance = DEFAULT_STANCE if stance is None else stance
    fn = ExprFn(parse_tree(text, _RULE_NAMES), "n")
    value = fn(Germ.index(stance))
    if isinstance(value, Germ):
        return value
    if isinstance(value, (Fraction, PiPoly)):
        return Germ.const(0, stance) + value
    raise NotRepresentable(f"rule {text!r} does not define a sequence")


# -- semicolon notation ----------------------------------------------------

def decimal_truncate(q: Fraction, places: int) -> str:
    """Decimal expansion of ``q`` truncated (not rounded) to ``places`` digits."""
    if places < 0:
        raise ValueError("places must be nonnegative")
    sign = MINUS if q < 0 else ""
    scaled = abs(q.numerator) * 10 ** places // q.denominator
    whole, frac = divmod(scaled, 10 ** places)
    if places == 0:
        return f"{sign}{whole}"
    return f"{sign}{whole}.{frac:0{places}d}"


@dataclass(frozen=True)
class SemicolonForm:
    """``standard ; tail``: st(x) truncated to ``places`` digits, then the
    leading term of ``x - st(x)`` (or ``0``)."""

    standard: str
    tail: str
    places: int
    standard_part: Fraction
    tail_term: tuple[Fraction, Fraction] | None

    def __str__(self):
        return f"{self.standard} ; {self.tail}"

    @property
    def side(self) -> int:
        """-1 if x lies below its standard part, 1 above, 0 if standard."""
        if self.tail_term is None:
            return 0
        return 1 if self.tail_term[0] > 0 else -1

    def note(self) -> str:
        rel = {-1: "<", 0: "=", 1: ">"}[self.side]
        return f"x {rel} {format_fraction(self.standard_part).replace('-', MINUS)}"


def render_semicolon(x: LCNumber, places: int) -> SemicolonForm:
    """Semicolon display of a limited number.

    >>> str(render_semicolon(LCNumber.const(1) - LCNumber.monomial(1, 1), 6))
    '1.000000 ; −1·ε^1'
    """
    s = st(x)  # raises Unlimited for unlimited x
    tail = x - s
    if tail.is_zero():
        desc, term = "0", None
    else:
        c, q = leading_order(tail)
        desc = f"{'+' if c > 0 else MINUS}{format_fraction(abs(c))}{DOT}{EPSILON}^{format_fraction(q)}"
        term = (c, q)
    return SemicolonForm(decimal_truncate(s, places), desc, places, s, term)


_SEMI = re.compile(
    rf"^\s*(?P<sign>{MINUS}|-)?(?P<whole>\d+)(?:\.(?P<frac>\d+))?\s*;\s*"
    rf"(?:(?P<zero>0)|(?P<tsign>[+{MINUS}-])(?P<c>\d+(?:/\d+)?){DOT}{EPSILON}\^(?P<q>\d+(?:/\d+)?))\s*$")


def parse_semicolon(text: str) -> tuple[Fraction, tuple[Fraction, Fraction] | None]:
    """Inverse of :func:`render_semicolon`: (truncated standard part, leading tail term)."""
    m = _SEMI.match(text)
    if not m:
        raise ParseError("not a semicolon form", 0, {"digits ; tail"})
    frac = m.group("frac") or ""
    value = Fraction(int(m.group("whole") + frac), 10 ** len(frac))
    if m.group("sign"):
        value = -value
    if m.group("zero"):
        return value, None
    c = Fraction(m.group("c"))
    if m.group("tsign") != "+":
        c = -c
    return value, (c, Fraction(m.group("q")))
