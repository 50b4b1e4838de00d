"""Exact verification toolkit for conjugacy-class and local counting in Sp_2n(q), q odd."""

from ._budget import BudgetExceeded, default_budget
from .classparams import (AutSpec, SpClassParam, WittClass, count_classes, count_invariant,
                          enumerate_params, is_invariant, validate)
from .gf import GF, FrobOrbit, factor_poly, field_of_order
from .series import IntPoly, TruncSeries, build_gend, build_genfun_c
from .symbols import LSymbol, count_degenerate, dprime_convolution, phi

__version__ = "0.1.0"

__all__ = [
    "AutSpec", "BudgetExceeded", "FrobOrbit", "GF", "IntPoly", "LSymbol", "SpClassParam",
    "TruncSeries", "WittClass", "build_gend", "build_genfun_c", "count_classes",
    "count_degenerate", "count_invariant", "default_budget", "dprime_convolution",
    "enumerate_params", "factor_poly", "field_of_order", "is_invariant", "phi", "validate",
]
