"""Travelling-wave solutions of conformable fractional PDEs.

Parse an equation, lower it to an ODE, derive and solve the coefficient
systems of the auxiliary-equation ansatz exactly, and check the resulting
closed forms numerically against the original fractional equation.
"""

from .catalog import EQUATIONS, ConditionViolation, EquationInstance
from .catalog_verify import Constants, Grid, derive, make_solution, residual, sample
from .cfd_num import cfd, cfd_limit, iterated_cfd, property_suite
from .multipoly import MultiPoly
from .pde_lang import BetaMode, format_ode, lower_to_ode, parse_pde
from .surd import SurdNumber
from .surd_solve import solve

__all__ = [
    "EQUATIONS", "BetaMode", "ConditionViolation", "Constants", "EquationInstance", "Grid",
    "MultiPoly", "SurdNumber", "cfd", "cfd_limit", "derive", "format_ode", "iterated_cfd",
    "lower_to_ode", "make_solution", "parse_pde", "property_suite", "residual", "sample", "solve",
]
