"""Commutator factorization of trace-zero complex matrices.

Any square complex matrix with zero trace can be written as A = [B, C]
with B normal and ||B|| * ||C||_2 bounded by sqrt(O(1) + log m) * ||A||_2;
this package constructs such factorizations with machine-checkable
certificates and verifies the matching lower-bound inequality chain on the
witness matrix P - I/m.
"""

from .factorizer import (
    FactorizationCertificate,
    c_from_b,
    factor,
    local_swap_improve,
    mean_c2_over_permutations,
)
from .filtration import Filtration, StructureReport, build_filtration, verify_filtration_structure
from .lattice import (
    EnergyReport,
    LatticePointSet,
    gaussian_points,
    leading_term_fit,
    optimize_configuration,
    pair_expectation,
)
from .linalg import (
    SingularProfile,
    commutator,
    hs_norm,
    is_normal,
    nuclear_norm,
    operator_norm,
    polar_decompose,
    singular_profile,
)
from .lowerbound import (
    LowerBoundReport,
    construct_partial_isometries,
    extremal_matrix,
    lower_bound_report,
    quarter_log_sum,
    quarter_log_sum_sweep,
    verify_hs_lower_bound,
    verify_partial_sums,
    verify_trace_inequality,
)
from .matio import read_matrix, read_points, write_matrix, write_points
from .reduction import DiagonalizationResult, apply_conjugation, zero_diagonal_reduce

__version__ = "0.1.0"

__all__ = [
    "FactorizationCertificate",
    "factor",
    "c_from_b",
    "mean_c2_over_permutations",
    "local_swap_improve",
    "Filtration",
    "StructureReport",
    "build_filtration",
    "verify_filtration_structure",
    "LatticePointSet",
    "EnergyReport",
    "gaussian_points",
    "pair_expectation",
    "optimize_configuration",
    "leading_term_fit",
    "SingularProfile",
    "commutator",
    "operator_norm",
    "hs_norm",
    "nuclear_norm",
    "singular_profile",
    "polar_decompose",
    "is_normal",
    "LowerBoundReport",
    "extremal_matrix",
    "lower_bound_report",
    "quarter_log_sum",
    "quarter_log_sum_sweep",
    "verify_trace_inequality",
    "verify_partial_sums",
    "verify_hs_lower_bound",
    "construct_partial_isometries",
    "DiagonalizationResult",
    "zero_diagonal_reduce",
    "apply_conjugation",
    "read_matrix",
    "write_matrix",
    "read_points",
    "write_points",
]
