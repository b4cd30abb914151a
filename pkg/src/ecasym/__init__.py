"""Algebraic and statistical toolkit for elementary cellular automata.

Rule 22 (a + b + c + abc over F2) is the symmetric reference; Rule 30
(a + b + c + bc) is the asymmetric rule being compared against it.
"""

__version__ = "0.1.0"

from .rule_algebra import DomainError, RuleSpec, anf_of_rule, census, classify
from .evolution import (
    Row,
    SupportSet,
    center_column,
    diagonal_identity_scan,
    evolve_single_seed,
    evolve_window,
    render_pbm,
    step,
    support,
)
from .rule22 import PolyF2, cardinality22, mersenne_poly, poly22, support22, verify_closed_forms
from .continuum import (
    PdeGrid,
    blow_up_time,
    duffing_integrate,
    ode_closed_form,
    ode_integrate,
    pde_integrate,
)
from .statistics import (
    block_entropy,
    deviation,
    equidistribution_test,
    fit_power_law,
    mutual_information,
    sensitivity_profile,
)

__all__ = [
    "DomainError",
    "PdeGrid",
    "PolyF2",
    "Row",
    "RuleSpec",
    "SupportSet",
    "anf_of_rule",
    "block_entropy",
    "blow_up_time",
    "cardinality22",
    "census",
    "center_column",
    "classify",
    "deviation",
    "diagonal_identity_scan",
    "duffing_integrate",
    "equidistribution_test",
    "evolve_single_seed",
    "evolve_window",
    "fit_power_law",
    "mersenne_poly",
    "mutual_information",
    "ode_closed_form",
    "ode_integrate",
    "pde_integrate",
    "poly22",
    "render_pbm",
    "sensitivity_profile",
    "step",
    "support",
    "support22",
    "verify_closed_forms",
]
