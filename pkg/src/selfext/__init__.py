"""Exact extension of operators between polyhedral normed spaces."""

from .exact import DimensionError, Mat, Rational, as_rational, format_rational, kernel_basis, rank, solve_linear
from .extend import (
    CancellationError,
    CertificateError,
    CertificateItem,
    ExtensionProblem,
    ExtensionResult,
    LowerBoundCertificate,
    LyapunovInstance,
    LyapunovResult,
    c0_finite_demo,
    coordinatewise_linf_extension,
    extend_functional,
    hilbert_extension,
    lyapunov_certificate,
    min_norm_extension,
    subspace_dual_norm,
    verify_certificate,
)
from .lp import EQ, GE, LE, Constraint, LinearProgram, LPSolution, SolverError, check_solution, solve_lp
from .r3 import HyperplaneParams, R3InvariantError, R3Trace, r3_extend, r3_extend_traced
from .se import (
    SearchReport,
    bm_l1_lp,
    heredity_lift,
    l1_to_linf_embedding,
    lift_certificate,
    particr4_threshold,
    se_lower_bound_search,
    stability_bound,
)
from .spaces import (
    CapExceeded,
    PolyhedralSpace,
    Subspace,
    VertexSet,
    ball_vertices,
    dual_norm,
    is_extreme,
    norm,
    operator_norm,
    subspace_ball_vertices,
    subspace_operator_norm,
    sum_zero,
)
from .verify import CheckResult, VerificationReport, verify_paper

__version__ = "0.1.0"
