"""Hyperbolic difference quotients, Schur-algorithm interpolation and
sampling estimates for analytic self-maps of the unit disc."""

__version__ = "0.1.0"

from .blaschke import (BoundaryModulus, OuterFunction, ScaledBlaschke, automorphism, blaschke_deriv,
                       blaschke_eval, hyp_deriv, make_test_family, outer_eval)
from .construct import (AssemblyInputs, assemble_solution, audit_f1_properties, auxiliary_values,
                        necessity_stress)
from .hyperbolic import (DiscPoint, HyperbolicPath, geodesic_path, hyp_dist, hyp_length,
                         hyperbolic_lattice, mobius_bracket, pseudo_dist)
from .quotients import (QuotientTriangle, build_triangle, column_condition_check, delta_k_of_function,
                        epsilon_of, verify_estab)
from .sampling import capacity, sampling_constant, sampling_ratio
from .sequences import (CarlesonSquare, carleson_layer_counts, decompose_separated, fit_density,
                        order_check, r_density, separation_constant)
from .solver import SchurChain, denjoy_sum, eval_chain, pick_psd, schur_solve, solvability

__all__ = [
    "AssemblyInputs",
    "BoundaryModulus",
    "CarlesonSquare",
    "DiscPoint",
    "HyperbolicPath",
    "OuterFunction",
    "QuotientTriangle",
    "ScaledBlaschke",
    "SchurChain",
    "assemble_solution",
    "audit_f1_properties",
    "automorphism",
    "auxiliary_values",
    "blaschke_deriv",
    "blaschke_eval",
    "build_triangle",
    "capacity",
    "carleson_layer_counts",
    "column_condition_check",
    "decompose_separated",
    "delta_k_of_function",
    "denjoy_sum",
    "epsilon_of",
    "eval_chain",
    "fit_density",
    "geodesic_path",
    "hyp_deriv",
    "hyp_dist",
    "hyp_length",
    "hyperbolic_lattice",
    "make_test_family",
    "mobius_bracket",
    "necessity_stress",
    "order_check",
    "outer_eval",
    "pick_psd",
    "pseudo_dist",
    "r_density",
    "sampling_constant",
    "sampling_ratio",
    "schur_solve",
    "separation_constant",
    "solvability",
    "verify_estab",
]
