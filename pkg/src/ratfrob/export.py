"""LaTeX rendering of prepotentials and expressions."""

from __future__ import annotations

import re
from fractions import Fraction

from .core.expoly import ExpPoly, Generator
from .core.ratfunc import RatFunc

_GREEK = {"alpha", "beta", "sigma"}


def _symbol(name: str) -> str:
    m = re.fullmatch(r"([A-Za-z]+)_(\d+)", name)
    if not m:
        return name
    base, idx = m.groups()
    return (f"\\{base}" if base in _GREEK else base) + f"_{{{idx}}}"


def _gen_power(g: Generator, x: int) -> str:
    if g.is_exponential:
        arg = _symbol(g.base)
        k = "" if x == 1 else "-" if x == -1 else f"{x}"
        return f"e^{{{k}{arg}}}"
    s = _symbol(g.name)
    return s if x == 1 else f"{s}^{{{x}}}"


def _magnitude(a: Fraction, bare: bool) -> str:
    if a == 1 and not bare:
        return ""
    if a.denominator == 1:
        return str(a.numerator)
    return f"\\frac{{{a.numerator}}}{{{a.denominator}}}"


def expoly_latex(p: ExpPoly) -> str:
    if p.is_zero():
        return "0"
    out = ""
    for i, (e, c) in enumerate(p.sorted_terms()):
        c = Fraction(c)
        mono = " ".join(_gen_power(g, x) for g, x in zip(p.gens, e) if x)
        body = " ".join(x for x in (_magnitude(abs(c), not mono), mono) if x)
        if i == 0:
            out = ("-" if c < 0 else "") + body
        else:
            out += (" - " if c < 0 else " + ") + body
    return out


def value_latex(x) -> str:
    if isinstance(x, RatFunc):
        return f"\\frac{{{expoly_latex(x.num)}}}{{{expoly_latex(x.den)}}}"
    if isinstance(x, ExpPoly):
        return expoly_latex(x)
    return expoly_latex(ExpPoly.constant(x))


def prepotential_latex(F) -> str:
    """Smooth part, then one line per log atom."""
    lines = [expoly_latex(F.smooth)]
    for a in F.logs:
        lines.append(f"+ \\left({value_latex(a.coeff)}\\right)\\log\\left({value_latex(a.arg)}\\right)")
    return "\\begin{aligned}\n\\mathcal{F} &= " + " \\\\\n&\\quad ".join(lines) + "\n\\end{aligned}"
