"""Exact arithmetic in the first Weyl algebra and commuting fourth-order operators."""
from .algebra import EXACT, FLOAT, BiPolyZ, Poly, chebyshev
from .commutant import SpectralCurve, bc_curve, find_commuting, find_partner
from .families import (dixmier_pair, cosh_curve, mokhov_L4, rank_transform,
                       sharp_pair)
from .orbits import AutWord, apply_aut, orbit_excludes
from .parsing import parse_op, print_op
from .rank2 import SIGMA, SelfAdjointPair, genus1_V_from_W, solve_Q
from .solver import VWSystem, leading_law, multi_start, newton_solve, verify_candidate
from .weyl import WeylOp, commutator, formal_adjoint, weyl_mul

__all__ = [
    "EXACT", "FLOAT", "BiPolyZ", "Poly", "chebyshev",
    "SpectralCurve", "bc_curve", "find_commuting", "find_partner",
    "dixmier_pair", "cosh_curve", "mokhov_L4", "rank_transform", "sharp_pair",
    "AutWord", "apply_aut", "orbit_excludes",
    "parse_op", "print_op",
    "SIGMA", "SelfAdjointPair", "genus1_V_from_W", "solve_Q",
    "VWSystem", "leading_law", "multi_start", "newton_solve", "verify_candidate",
    "WeylOp", "commutator", "formal_adjoint", "weyl_mul",
]
