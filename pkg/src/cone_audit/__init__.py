"""cone-audit: exact polyhedral cone computations and optimality-condition checks.

The package represents polyhedral convex constraint sets in exact rational
arithmetic, computes their contingent cones, second-order tangent sets and
normal cones in closed form, and verifies first-order and second-order
necessary optimality conditions at user-supplied candidate points, with
witnesses and certificates.  A float regime with explicit tolerances covers
single smooth level-set constraints and the second-order subdifferential
membership oracle.
"""

from ._version import __version__
from .analysis import revalidate_report, run_analysis
from .dd import GeneratorSet, double_description
from .errors import (
    AnalysisError,
    ConeAuditError,
    DimensionCapExceededError,
    DimensionMismatchError,
    InactiveConstraintError,
    NotInSetError,
    NotTangentDirectionError,
    ProblemFormatError,
    UnsupportedFamilyError,
    VanishingGradientError,
)
from .geometry import ActiveSet, PolyhedralCone, Polyhedron, cone_equal, cone_subset
from .linalg import Rational, RationalMatrix, RationalVector, matrix, rational, vector
from .lp import LPResult, LPStatus, solve_lp
from .objectives import (
    AffineRegion,
    ConstraintKind,
    ExampleFixture,
    QuadraticObjective,
    RegionKind,
    SmoothLevelSetConstraint,
    SmoothObjective,
    fixture,
)
from .problem import ProblemFile, parse_problem
from .optimality import (
    ConditionId,
    ConditionReport,
    CopositivityResult,
    CopositivityStatus,
    CriticalDirection,
    LagrangeCertificate,
    QPConditions,
    SecondOrderBundle,
    Verdict,
    check_c1,
    check_c2_copositivity,
    check_qp,
    classical_second_order_check,
    critical_cone,
    first_order_check,
    theorem33_check,
)
from .ssd import (
    CalmnessEstimate,
    EX41_GRADIENT_FAMILY,
    HypothesisReport,
    LogMesh,
    MembershipVerdict,
    PiecewiseGradientDescriptor,
    SSDQuery,
    estimate_calmness,
    linear_equality_check,
    ssd_hessian_closed_form,
    ssd_interval_1d_example_family,
    ssd_membership,
    theorem41_check,
    unconstrained_check,
)

__all__ = [name for name in dir() if not name.startswith("_")]
