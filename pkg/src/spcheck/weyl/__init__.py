"""Extended Weyl group of type C_l: signed permutations, monomial lifts, Sylow twists, wreath stabilizers."""

from .monomial import MonomialMat, chevalley_h, chevalley_n, roots, simple_roots
from .signed import SignedPerm, centralizer_in_W, torus_fixed_order, weyl_order
from .twist import (TwistSpec, WeylReport, coxeter_v0, enumerate_V, extended_weyl_checks,
                    regular_numbers, sylow_twist, twist_setting_checks)
from .wreath import (check_mu, factor_action, normalizer_check, stabilizer_grid,
                     stabilizer_shape, wreath_mu)

__all__ = [
    "MonomialMat", "SignedPerm", "TwistSpec", "WeylReport",
    "centralizer_in_W", "check_mu", "chevalley_h", "chevalley_n", "coxeter_v0",
    "enumerate_V", "extended_weyl_checks", "factor_action", "normalizer_check",
    "regular_numbers", "roots", "simple_roots", "stabilizer_grid", "stabilizer_shape",
    "sylow_twist", "torus_fixed_order", "twist_setting_checks", "weyl_order", "wreath_mu",
]
