"""Exact Frobenius structures on spaces of rational superpotentials with simple poles."""

from .charts import Family, Superpotential
from .flat import base_chart, full_flat_chart
from .prepotential import Prepotential, assemble, assemble_A, assemble_EAW, base_prepotential, solve_f
from .verify import VerifyConfig, compare_mod_quadratics, homogeneity_check, wdvv_check

__version__ = "0.1.0"

__all__ = [
    "Family",
    "Prepotential",
    "Superpotential",
    "VerifyConfig",
    "assemble",
    "assemble_A",
    "assemble_EAW",
    "base_chart",
    "base_prepotential",
    "compare_mod_quadratics",
    "full_flat_chart",
    "homogeneity_check",
    "solve_f",
    "wdvv_check",
]
