"""Command-line interface: ``adequal <command> ...``.

Exit codes: 0 success, 1 domain error (unlimited value, no bracket, ...),
2 usage or parse error.  ``--format json`` prints one record
``{"command": ..., "ok": true, "result": ...}`` or
``{"command": ..., "ok": false, "error": {"type": ..., "message": ...}}``.
"""

from __future__ import annotations

import argparse
import json
import random
import re
import sys
from fractions import Fraction

from . import bounds, calculus, germ, lcfield, notation, roots
from .errors import AdequalError, ParseError
from .lcfield import LCNumber, TruncationOrder, format_fraction

# options whose values are expressions and may start with "-"
_EXPR_OPTIONS = ("--dx", "--at", "--witness", "--lo", "--hi", "--on")
_NEGATIVE_NUMBER = re.compile(r"^-\d+$|^-\d*\.\d+$")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}\n{self.format_usage().rstrip()}")


# -- argument helpers --------------------------------------------------------

def _rational(text: str) -> Fraction:
    text = text.replace(notation.MINUS, "-").strip()
    try:
        return Fraction(text)
    except ValueError:
        pass
    value = notation.parse_lc(text)
    if not value.is_standard():
        raise ParseError(f"{text!r} is not a rational number", 0, {"rational"})
    return value.coefficient(0)


def _point(text: str, order):
    return notation.parse_lc(text, order)


def _stance(text: str | None):
    if not text:
        return germ.DEFAULT_STANCE
    return germ.UltrafilterStance.parse(text)


def _polynomial(text: str) -> roots.Polynomial:
    return roots.Polynomial.from_expr(notation.parse_function(text))


def _bool_text(v) -> str:
    if v is germ.UNDETERMINED:
        return "undetermined"
    return "true" if v else "false"


def _json_bool(v):
    return None if v is germ.UNDETERMINED else bool(v)


def _config(path: str | None) -> dict:
    if not path:
        return {}
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            key = key.strip()
            if not sep or key not in ("order", "stance"):
                raise UsageError(f"{path}:{lineno}: expected order=... or stance=...")
            out[key] = value.strip()
    return out


# -- commands ----------------------------------------------------------------
# each returns (text, json-able result)

def cmd_eval(args, ctx):
    if args.germ is not None:
        return _eval_germ(args, ctx)
    if args.expr is None:
        raise UsageError("eval needs an expression or --germ RULE")
    value = notation.parse_expr(args.expr, ctx["order"])
    if isinstance(value, LCNumber):
        if args.at is not None:
            raise UsageError("--at needs an expression in x")
    else:
        if args.at is None:
            raise UsageError(f"{args.expr!r} depends on x; give --at")
        value = LCNumber.coerce(value(_point(args.at, ctx["order"]), ctx["order"]))
    result = {"value": str(value), "class": lcfield.classify(value).value,
              "order": None if value.order is None else format_fraction(value.order)}
    text = str(value)
    if args.semicolon is not None:
        form = notation.render_semicolon(value, args.semicolon)
        text = str(form)
        result["semicolon"] = text
    return text, result


def _eval_germ(args, ctx):
    stance = ctx["stance"]
    g = notation.parse_rule(args.germ, stance)
    if args.apply is not None:
        g = germ.germ_apply(notation.parse_function(args.apply), g)
    null = germ.germ_is_null(g)
    try:
        inf = germ.germ_is_infinitesimal(g)
        sign = germ.germ_sign(g)
    except AdequalError as exc:
        inf = sign = germ.UNDETERMINED
        if not isinstance(exc, germ.StanceUndecided):
            raise
    try:
        std = format_fraction(germ.germ_st(g))
    except AdequalError as exc:
        std = None
        std_reason = type(exc).__name__
    result = {"germ": str(g), "exact": g.is_exact, "null": _json_bool(null),
              "infinitesimal": _json_bool(inf), "sign": None if sign is germ.UNDETERMINED else sign,
              "st": std}
    lines = [f"germ: {g}", f"null: {_bool_text(null)}", f"infinitesimal: {_bool_text(inf)}",
             f"sign: {'undetermined' if sign is germ.UNDETERMINED else sign}",
             f"st: {std if std is not None else 'unavailable (' + std_reason + ')'}"]
    try:
        lc = germ.germ_to_lc(g, ctx["order"])
        result["lc"] = str(lc)
        lines.append(f"lc: {lc}")
    except AdequalError:
        result["lc"] = None
    if args.adequal is not None:
        other = notation.parse_rule(args.adequal, stance)
        verdict = germ.germ_adequal(g, other)
        result["adequal"] = _json_bool(verdict)
        lines.append(f"adequal: {_bool_text(verdict)}")
    return "\n".join(lines), result


def cmd_st(args, ctx):
    if args.germ:
        value = germ.germ_st(notation.parse_rule(args.expr, ctx["stance"]))
    else:
        value = lcfield.st(notation.parse_lc(args.expr, ctx["order"]))
    return format_fraction(value), {"st": format_fraction(value)}


def cmd_diff(args, ctx):
    f = notation.parse_function(args.function)
    dxs = [notation.parse_lc(d, ctx["order"]) for d in (args.dx or ["eps"])]
    value = calculus.derivative_at(f, _rational(args.at), dxs, ctx["order"])
    return format_fraction(value), {"derivative": format_fraction(value), "dx": [str(d) for d in dxs]}


def cmd_classify(args, ctx):
    if args.on is None:
        if args.germ:
            g = notation.parse_rule(args.expr, ctx["stance"])
            inf = germ.germ_is_infinitesimal(g)
            text = _bool_text(inf)
            return f"infinitesimal: {text}", {"infinitesimal": _json_bool(inf)}
        value = notation.parse_lc(args.expr, ctx["order"])
        cls = lcfield.classify(value).value
        return cls, {"class": cls}
    domain = calculus.Interval.parse(args.on)
    res = calculus.classify_continuity(notation.parse_function(args.expr), domain, ctx["order"], ctx["stance"])
    lines = [res.classification.value] + [r.to_record() for r in res.deciding]
    result = res.to_dict()
    result["domain"] = str(domain)
    return "\n".join(lines), result


def cmd_microcont(args, ctx):
    f = notation.parse_function(args.function)
    if args.germ:
        x = notation.parse_rule(args.at, ctx["stance"])
        ws = [notation.parse_rule(w, ctx["stance"]) for w in args.witness]
    else:
        x = _point(args.at, ctx["order"])
        ws = [_point(w, ctx["order"]) for w in args.witness]
    report = calculus.microcontinuous_at(f, x, ws, ctx["order"], stance=ctx["stance"])
    return report.to_record(), report.to_dict()


def cmd_stevin(args, ctx):
    res = roots.stevin_root(_polynomial(args.polynomial), _rational(args.lo), _rational(args.hi), args.digits)
    lines = [res.text()]
    if args.certificate:
        lines += res.certificate_lines()
    result = {"digits": res.text(), "exact_root": None if res.exact_root is None else format_fraction(res.exact_root),
              "certificate": res.certificate_lines()}
    return "\n".join(lines), result


def cmd_bisect(args, ctx):
    trace = roots.cauchy_bisect(_polynomial(args.polynomial), _rational(args.lo), _rational(args.hi), args.steps)
    a, b = trace.final
    shared = None
    for places in range(0, 40):
        d = roots.truncated_decimal(a, b, places) if a != b else None
        if d is None:
            break
        shared = d
    if trace.exact_root is not None:
        text = f"exact root {format_fraction(trace.exact_root)}"
    else:
        text = f"[{format_fraction(a)}, {format_fraction(b)}] width=2^-{len(trace.steps)}"
        if shared is not None:
            text += f" digits={shared}"
    result = {"lo": format_fraction(a), "hi": format_fraction(b), "steps": len(trace.steps),
              "exact_root": None if trace.exact_root is None else format_fraction(trace.exact_root),
              "digits": shared}
    return text, result


def cmd_irr_gap(args, ctx):
    cert = bounds.irr_gap(args.m, args.n)
    return str(cert), cert.to_dict()


def cmd_sweep(args, ctx):
    summary = bounds.sweep(args.limit)
    return str(summary), summary.to_dict()


def cmd_wallis(args, ctx):
    res = calculus.wallis_area(_rational(args.a), _rational(args.b))
    text = "\n".join([f"area={format_fraction(res.area)}", *res.certificate])
    return text, {"area": format_fraction(res.area), "certificate": list(res.certificate)}


def cmd_transfer_check(args, ctx):
    rng = random.Random(args.seed)
    samples = [tuple(lcfield.random_lcnumber(rng) for _ in range(3)) for _ in range(args.samples)]
    report = lcfield.check_transfer_schema(samples)
    text = f"identities={len(report.identities)} samples={report.samples} violations={len(report.violations)}"
    bad = [{"identity": name, "sample": [str(v) for v in vs]} for name, vs in report.violations]
    return text, {"identities": list(report.identities), "samples": report.samples, "violations": bad}


COMMANDS = {
    "eval": cmd_eval,
    "st": cmd_st,
    "diff": cmd_diff,
    "classify": cmd_classify,
    "microcont": cmd_microcont,
    "stevin": cmd_stevin,
    "bisect": cmd_bisect,
    "irr-gap": cmd_irr_gap,
    "sweep": cmd_sweep,
    "wallis": cmd_wallis,
    "transfer-check": cmd_transfer_check,
}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default=argparse.SUPPRESS)
    common.add_argument("--config", default=argparse.SUPPRESS, help="key=value file (order, stance)")
    common.add_argument("--order", default=argparse.SUPPRESS, help="truncation order (rational > 0)")
    common.add_argument("--stance", default=argparse.SUPPRESS,
                        help='residue decisions, e.g. "0 mod 2; not 1 mod 3"')

    parser = _Parser(prog="adequal", parents=[common],
                     description="Exact infinitesimal arithmetic and certified root digits.")
    sub = parser.add_subparsers(dest="command", metavar="command", parser_class=_Parser)
    sub.required = True

    def add(name, help_text):
        return sub.add_parser(name, parents=[common], help=help_text)

    p = add("eval", "evaluate a constant or f(x) at a point; or inspect a sequence germ")
    p.add_argument("expr", nargs="?")
    p.add_argument("--at")
    p.add_argument("--semicolon", type=int, metavar="PLACES")
    p.add_argument("--germ", metavar="RULE")
    p.add_argument("--apply", metavar="F")
    p.add_argument("--adequal", metavar="RULE")

    p = add("st", "standard part of a limited value")
    p.add_argument("expr")
    p.add_argument("--germ", action="store_true", help="read EXPR as a sequence rule in n")

    p = add("diff", "derivative as st of a difference quotient")
    p.add_argument("function")
    p.add_argument("--at", required=True)
    p.add_argument("--dx", action="append", help="infinitesimal increment (repeatable; default eps)")

    p = add("classify", "magnitude class of a value, or continuity class of f on an interval")
    p.add_argument("expr")
    p.add_argument("--on", metavar="INTERVAL")
    p.add_argument("--germ", action="store_true")

    p = add("microcont", "microcontinuity of f at a point for given witnesses")
    p.add_argument("function")
    p.add_argument("--at", required=True)
    p.add_argument("--witness", action="append", required=True)
    p.add_argument("--germ", action="store_true", help="read the point and witnesses as rules in n")

    p = add("stevin", "decimal digits of a polynomial root by tenfold subdivision")
    p.add_argument("polynomial")
    p.add_argument("--lo", required=True)
    p.add_argument("--hi", required=True)
    p.add_argument("--digits", type=int, default=6)
    p.add_argument("--certificates", "--certificate", dest="certificate", action="store_true")

    p = add("bisect", "bracket a polynomial root by repeated halving")
    p.add_argument("polynomial")
    p.add_argument("--lo", required=True)
    p.add_argument("--hi", required=True)
    p.add_argument("--steps", type=int, default=40)

    p = add("irr-gap", "certified lower bound on |sqrt(2) - m/n|")
    p.add_argument("m", type=int)
    p.add_argument("n", type=int)

    p = add("sweep", "check irr-gap for every m/n in [1, 3/2] with n <= N")
    p.add_argument("limit", type=int)

    p = add("wallis", "triangle area from infinitely many infinitesimal strips")
    p.add_argument("a")
    p.add_argument("b")

    p = add("transfer-check", "check the first-order identity schema on random samples")
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    return parser


def _preprocess(argv: list[str], options: set[str]) -> list[str]:
    """Let expression values start with '-': ``--dx -eps`` becomes
    ``--dx=-eps`` and a bare ``-x^2`` becomes ``−x^2``."""
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in _EXPR_OPTIONS and i + 1 < len(argv):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        if tok == "--":
            out.extend(argv[i:])
            break
        if (tok.startswith("-") and not tok.startswith("--") and tok not in options
                and not _NEGATIVE_NUMBER.match(tok) and len(tok) > 1):
            tok = notation.MINUS + tok[1:]
        out.append(tok)
        i += 1
    return out


def _emit(stream, fmt, command, ok, payload):
    if fmt == "json":
        key = "result" if ok else "error"
        print(json.dumps({"command": command, "ok": ok, key: payload}, sort_keys=True), file=stream)
    else:
        print(payload, file=stream)


def run(argv: list[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    fmt = "json" if "--format=json" in argv or any(
        a == "--format" and b == "json" for a, b in zip(argv, argv[1:])) else "text"
    command = next((a for a in argv if a in COMMANDS), None)
    try:
        try:
            args = parser.parse_args(_preprocess(argv, {"-h"}))
        except SystemExit as exc:  # --help
            return int(exc.code or 0)
        fmt = getattr(args, "format", "text")
        config = _config(getattr(args, "config", None))
        order = getattr(args, "order", config.get("order"))
        stance = getattr(args, "stance", config.get("stance"))
        ctx = {"order": TruncationOrder(_rational(order)) if order is not None else TruncationOrder.of(None),
               "stance": _stance(stance)}
        text, result = COMMANDS[args.command](args, ctx)
    except (UsageError, ParseError) as exc:
        if fmt == "json":
            _emit(stdout, fmt, command, False, {"type": type(exc).__name__, "message": str(exc)})
        else:
            print(exc, file=stderr)
        return 2
    except (AdequalError, ZeroDivisionError, ValueError, OSError) as exc:
        if fmt == "json":
            _emit(stdout, fmt, command, False, {"type": type(exc).__name__, "message": str(exc)})
        else:
            print(f"error: {type(exc).__name__}: {exc}", file=stderr)
        return 1
    _emit(stdout, fmt, args.command, True, result if fmt == "json" else text)
    return 0


def main() -> None:
    sys.exit(run())
