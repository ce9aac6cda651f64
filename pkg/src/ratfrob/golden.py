"""Reference prepotentials for the worked examples.

Strings use this package's names: t_k, alpha_m, beta_m, exp(...) and log(...).
``relabel`` maps the reference coordinate names onto the built chart's names
where the two orderings differ.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .charts import Family

_LOGS2 = "1/2*alpha_1^2*log(alpha_1) + 1/2*alpha_2^2*log(alpha_2)"


@dataclass(frozen=True)
class GoldenExample:
    name: str
    family: Family
    text: str
    relabel: dict = field(default_factory=dict)
    f: str | None = None
    note: str = ""


GOLDEN: dict[str, GoldenExample] = {}


def _add(*args, **kw) -> None:
    ex = GoldenExample(*args, **kw)
    GOLDEN[ex.name] = ex


_add("l0-m1", Family("A", 0, 0, 1),
     "1/2*alpha_1^2*log(alpha_1) + 1/2*alpha_1*beta_1^2")
_add("l0-m2", Family("A", 0, 0, 2),
     _LOGS2 + " + alpha_1*alpha_2*log(beta_1 - beta_2)"
     " + 1/2*(alpha_1*beta_1^2 + alpha_2*beta_2^2)")
_add("a1-np2", Family("A", 1, 0, 2),
     "1/12*t_1^3 + " + _LOGS2 + " + alpha_1*alpha_2*log(beta_1 - beta_2)"
     " + 1/3*(alpha_1*beta_1^3 + alpha_2*beta_2^3) + t_1*(alpha_1*beta_1 + alpha_2*beta_2)",
     f="0")
_add("a3-np2", Family("A", 3, 0, 2),
     "1/2*t_1*t_2^2 + 1/2*t_1^2*t_3 - 1/16*t_2^2*t_3^2 + 1/960*t_3^5"
     " + " + _LOGS2 + " + alpha_1*alpha_2*log(beta_1 - beta_2)"
     " + 1/5*(alpha_1*beta_1^5 + alpha_2*beta_2^5)"
     " + 1/3*t_3*(alpha_1*beta_1^3 + alpha_2*beta_2^3)"
     " + 1/2*t_2*(alpha_1*beta_1^2 + alpha_2*beta_2^2)"
     " + (t_1 + 1/8*t_3^2)*(alpha_1*beta_1 + alpha_2*beta_2)"
     " + 1/4*t_2*t_3*(alpha_1 + alpha_2)",
     f="1/4*t_2*t_3",
     note="reference base polynomial uses another normalization of the metric")
_add("a4-np2", Family("A", 4, 0, 2),
     "1/2*t_1^2*t_4 + t_1*t_2*t_3 + 1/2*t_2^3 + 1/3*t_3^4 + 6*t_2*t_3^2*t_4 + 9*t_2^2*t_4^2"
     " + 24*t_3^2*t_4^3 + 216/5*t_4^6"
     " + " + _LOGS2 + " + alpha_1*alpha_2*log(beta_1 - beta_2)"
     " + 1/6*(alpha_1*beta_1^6 + alpha_2*beta_2^6)"
     " + 1/4*t_4*(alpha_1*beta_1^4 + alpha_2*beta_2^4)"
     " + 1/3*t_3*(alpha_1*beta_1^3 + alpha_2*beta_2^3)"
     " + 1/2*(t_2 + 1/5*t_4^2)*(alpha_1*beta_1^2 + alpha_2*beta_2^2)"
     " + (t_1 + 1/5*t_3*t_4)*(alpha_1*beta_1 + alpha_2*beta_2)"
     " + (1/10*t_3^2 + 1/5*t_2*t_4 + 1/150*t_4^3)*(alpha_1 + alpha_2)",
     f="1/10*t_3^2 + 1/5*t_2*t_4 + 1/150*t_4^3",
     note="reference base polynomial uses another normalization of the metric")
_add("qh-p1-np1", Family("EAW", 0, 1, 1),
     "1/2*t_1^2*t_2 + exp(t_2) + 1/2*alpha_1^2*log(alpha_1) + 1/2*alpha_1^2*beta_1"
     " + alpha_1*exp(beta_1) - alpha_1*exp(t_2 - beta_1) + t_1*alpha_1*beta_1",
     f="0")
_add("qh-p1-np2", Family("EAW", 0, 1, 2),
     "1/2*t_1^2*t_2 + exp(t_2) + " + _LOGS2
     + " + alpha_1*alpha_2*log(exp(beta_1) - exp(beta_2))"
     " + 1/2*(alpha_1^2*beta_1 + alpha_2^2*beta_2) + t_1*(alpha_1*beta_1 + alpha_2*beta_2)"
     " + alpha_1*exp(beta_1) + alpha_2*exp(beta_2)"
     " - exp(t_2)*(alpha_1*exp(-beta_1) + alpha_2*exp(-beta_2))",
     f="0")
_add("a2-r1-np1", Family("EAW", 1, 1, 1),
     "1/2*t_1^2*t_3 + 1/4*t_2^2*t_1 + t_2*exp(t_3) - 1/96*t_2^4"
     " + 1/2*alpha_1^2*log(alpha_1) + 1/2*alpha_1^2*beta_1 + 1/2*alpha_1*exp(2*beta_1)"
     " - alpha_1*exp(t_3 - beta_1) + t_2*alpha_1*exp(beta_1) + t_1*alpha_1*beta_1 + 1/4*t_2^2*alpha_1",
     relabel={"t_1": "t_2", "t_2": "t_1"},
     f="1/4*t_2^2")
_add("a3-r2-np2", Family("EAW", 1, 2, 2),
     "1/4*t_1^2*t_2 + 1/2*t_2^2*t_4 + 1/4*t_2*t_3^2 - 1/96*t_1^4 - 1/96*t_3^4"
     " + t_1*t_3*exp(t_4) + 1/2*exp(2*t_4)"
     " + " + _LOGS2 + " + alpha_1*alpha_2*log(exp(beta_1) - exp(beta_2))"
     " + 1/2*(alpha_1^2*beta_1 + alpha_2^2*beta_2) + t_2*(alpha_1*beta_1 + alpha_2*beta_2)"
     " + 1/2*(alpha_1*exp(2*beta_1) + alpha_2*exp(2*beta_2))"
     " + t_1*(alpha_1*exp(beta_1) + alpha_2*exp(beta_2)) + 1/4*t_1^2*(alpha_1 + alpha_2)"
     " - exp(t_4)*t_3*(alpha_1*exp(-beta_1) + alpha_2*exp(-beta_2))"
     " - 1/2*exp(2*t_4)*(alpha_1*exp(-2*beta_1) + alpha_2*exp(-2*beta_2))",
     f="1/4*t_1^2")

NAMES = tuple(GOLDEN)


def golden(name: str) -> GoldenExample:
    try:
        return GOLDEN[name]
    except KeyError:
        raise KeyError(f"unknown example {name!r}; known: {', '.join(NAMES)}") from None


def reference_prepotential(name: str):
    """The reference as a Prepotential in the built chart's coordinate names."""
    from .prepotential import Prepotential

    ex = golden(name)
    F = Prepotential.from_text(ex.text)
    return F.rename(ex.relabel) if ex.relabel else F


def reference_f(name: str):
    from .core.text import parse_expr

    ex = golden(name)
    if ex.f is None:
        return None
    v = parse_expr(ex.f)
    return v.rename(ex.relabel) if ex.relabel and hasattr(v, "rename") else v
