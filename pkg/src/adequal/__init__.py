"""Exact arithmetic with infinitesimals, sequence germs and certified roots."""

from .errors import (AdequalError, DomainViolation, InconsistentDerivative, InvalidStance, NoBracket,
                     NotAdequal, NotRepresentable, OutOfRange, ParseError, StanceUndecided,
                     TruncationError, Unlimited, ZeroInput)
from .lcfield import (EPS, H, ONE, ZERO, LCNumber, Magnitude, TruncationOrder, adequal,
                      check_transfer_identity, check_transfer_schema, classify, cmp, div,
                      factor_leading, inv, power, st)
from .germ import (DEFAULT_STANCE, UNDETERMINED, Germ, IndexSet, UltrafilterStance, germ_adequal,
                   germ_apply, germ_is_infinitesimal, germ_is_null, germ_sign, germ_st)
from .expr import ExprFn
from .notation import parse_expr, parse_function, parse_lc, parse_rule, render_semicolon
from .calculus import (ContinuityClass, Interval, ProbeReport, Verdict, classify_continuity,
                       derivative_at, microcontinuous_at, wallis_area)
from .roots import Polynomial, cauchy_bisect, stevin_root
from .bounds import irr_gap, sweep

__version__ = "0.1.0"
