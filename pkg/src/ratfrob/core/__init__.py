"""Exact arithmetic substrate: polynomials, rational functions, series."""

from .expoly import ExpPoly, Generator, const, exp_of, exponential, gen, ordinary
from .ratfunc import RatFunc, as_ratfunc, differentiate, eval_exact, simplify
from .series import INFINITY, ZERO, Center, FormalSeries, finite, laurent_expand, puiseux_root, series_root
from .text import format_expoly, parse_expr

W = ordinary("w", laurent=True)

__all__ = [
    "Center",
    "ExpPoly",
    "FormalSeries",
    "Generator",
    "INFINITY",
    "RatFunc",
    "W",
    "ZERO",
    "as_ratfunc",
    "const",
    "differentiate",
    "eval_exact",
    "exp_of",
    "exponential",
    "finite",
    "format_expoly",
    "gen",
    "laurent_expand",
    "ordinary",
    "parse_expr",
    "puiseux_root",
    "series_root",
    "simplify",
]
