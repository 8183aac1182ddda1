"""First- and second-order necessary optimality condition checkers.

Every check reports one of Holds / Fails / Inconclusive with re-checkable
evidence: a failing check carries a witness vector that violates the
defining inequality when substituted back, and a rational-arithmetic Holds
carries an exact certificate (Lagrange multipliers or a copositivity trace).

The checks mirror the standard necessary conditions at a candidate point
x of  min f over C:

* first order:        <grad f(x), v> >= 0 on the tangent cone;
* classical second:   inf <grad f(x), w> over the second-order tangent set
                      plus <Hess f(x) v, v> is nonnegative, per critical v;
* strengthened (c1):  <grad f(x), w> >= 0 on the second-order tangent set;
* strengthened (c2):  <Hess f(x) v, v> >= 0 on the whole critical cone,
                      i.e. the Hessian is copositive there;
* QP (c0)/(c1')/(c2') are the same three specialized to quadratic data,
  run entirely in exact arithmetic.

The universal quantifier over critical directions in (c1') is resolved by
enumerating the critical cone's generators (rays and both signs of the
lineality basis); reports list the checked directions explicitly.

Exact checks take tolerance 0.  Float-regime checks treat violations within
the tolerance as boundary Holds, because irrational candidate points make
exact zeros unattainable in binary64.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import DimensionMismatchError
from .geometry import PolyhedralCone, Polyhedron
from .linalg import RationalMatrix, RationalVector
from .lp import LPStatus, solve_lp
from .objectives import (
    AffineRegion,
    QuadraticObjective,
    RegionKind,
    SmoothLevelSetConstraint,
    SmoothObjective,
)

DEFAULT_FLOAT_TOL = 1e-9
DEFAULT_SUBDIVISION_DEPTH = 12
DEFAULT_FALSIFIER_SAMPLES = 100_000
_EIG_TOL = 1e-10


class Verdict(Enum):
    HOLDS = "holds"
    FAILS = "fails"
    INCONCLUSIVE = "inconclusive"


class ConditionId(Enum):
    FIRST_ORDER = "FirstOrder"
    CLASSICAL_32 = "Classical32"
    C1 = "C1"
    C2 = "C2"
    QP_C0 = "QP_c0"
    QP_C1P = "QP_c1p"
    QP_C2P = "QP_c2p"


@dataclass(frozen=True)
class LagrangeCertificate:
    """Multipliers proving -gradient = sum(lambda_i * row_i) + A^T mu exactly.

    ``inequality_multipliers`` are (position, origin row, lambda) triples over
    the cone's inequality rows, lambda >= 0; ``equality_multipliers`` has one
    entry per equality row of the cone.
    """

    inequality_multipliers: tuple[tuple[int, int | None, Fraction], ...]
    equality_multipliers: RationalVector

    def verify(self, gradient: RationalVector, cone: PolyhedralCone) -> bool:
        total = RationalVector.zero(gradient.dim)
        for pos, _origin, lam in self.inequality_multipliers:
            if lam < 0:
                return False
            total = total + cone.ineq_rows.row(pos).scale(lam)
        for j, mu in enumerate(self.equality_multipliers):
            total = total + cone.eq_rows.row(j).scale(mu)
        return total == -gradient


class CopositivityStatus(Enum):
    COPOSITIVE = "copositive"
    NOT_COPOSITIVE = "not copositive"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class CopositivityResult:
    """Outcome of a copositivity test over a cone.

    On NOT_COPOSITIVE the witness lies in the cone and its quadratic form
    value is negative (exact whenever the data is rational).
    """

    status: CopositivityStatus
    witness: RationalVector | tuple[float, ...] | None = None
    witness_value: Fraction | float | None = None
    depth_reached: int = 0
    cells_certified: int = 0
    method: str = ""


@dataclass(frozen=True)
class ConditionReport:
    condition: ConditionId
    verdict: Verdict
    witness: RationalVector | tuple[float, ...] | None = None
    certificate: LagrangeCertificate | CopositivityResult | None = None
    margin: Fraction | float | None = None
    boundary: bool = False
    checked_directions: tuple | None = None
    witness_direction: RationalVector | tuple | None = None
    notes: str = ""


@dataclass(frozen=True)
class CriticalDirection:
    """A direction with its verified tangency/orthogonality flags."""

    vector: tuple
    in_tangent_cone: bool
    negation_in_tangent_cone: bool
    gradient_orthogonal: bool

    @property
    def is_critical(self) -> bool:
        return self.in_tangent_cone and self.gradient_orthogonal

    @property
    def is_bidirectional(self) -> bool:
        """Critical with -v also tangent (the stronger hypothesis some
        subdifferential-based conditions require)."""
        return self.is_critical and self.negation_in_tangent_cone


def assess_direction_polyhedral(
    constraint_set: Polyhedron,
    point: RationalVector,
    direction: RationalVector,
    gradient_pairing: Fraction | float,
    tolerance: float | Fraction = 0,
) -> CriticalDirection:
    cone = constraint_set.tangent_cone(point)
    return CriticalDirection(
        vector=tuple(direction.entries),
        in_tangent_cone=cone.contains(direction),
        negation_in_tangent_cone=cone.contains(-direction),
        gradient_orthogonal=abs(gradient_pairing) <= tolerance,
    )


def assess_direction_region(
    region: AffineRegion,
    direction,
    gradient_pairing: float,
    tolerance: float = DEFAULT_FLOAT_TOL,
) -> CriticalDirection:
    vec = np.asarray(direction, dtype=float).reshape(-1)
    return CriticalDirection(
        vector=tuple(float(a) for a in vec),
        in_tangent_cone=region.contains(vec, tolerance),
        negation_in_tangent_cone=region.contains(-vec, tolerance),
        gradient_orthogonal=abs(gradient_pairing) <= tolerance,
    )


# ---------------------------------------------------------------------------
# Linear conditions: <gradient, .> >= 0 over a cone or affine region
# ---------------------------------------------------------------------------


def _as_rational_vector(values) -> RationalVector:
    if isinstance(values, RationalVector):
        return values
    return RationalVector([Fraction(float(a)) for a in np.asarray(values, dtype=float).reshape(-1)])


def _linear_condition_on_cone(
    gradient: RationalVector,
    cone: PolyhedralCone,
    tolerance,
    condition: ConditionId,
) -> ConditionReport:
    if gradient.dim != cone.dim:
        raise DimensionMismatchError("gradient dimension does not match the cone")
    result = solve_lp(
        gradient,
        eq_matrix=cone.eq_rows,
        eq_rhs=RationalVector.zero(cone.eq_rows.nrows),
        ineq_matrix=cone.ineq_rows,
        ineq_rhs=RationalVector.zero(cone.ineq_rows.nrows),
    )
    if result.status is LPStatus.OPTIMAL:
        # The infimum over a cone is 0; the dual multipliers certify
        # -gradient = sum(lambda_i row_i) + sum(mu_j eq_j).
        certificate = LagrangeCertificate(
            inequality_multipliers=tuple(
                (pos, cone.ineq_origins[pos], lam)
                for pos, lam in enumerate(result.dual_inequalities)
            ),
            equality_multipliers=-result.dual_equalities,
        )
        if not certificate.verify(gradient, cone):
            raise RuntimeError("Lagrange certificate failed exact verification")
        return ConditionReport(
            condition=condition,
            verdict=Verdict.HOLDS,
            certificate=certificate,
            margin=Fraction(0),
        )
    ray = result.witness.primitive()
    violation = gradient.dot(ray)
    sup = max(abs(a) for a in ray.entries)
    scaled = violation / sup
    if tolerance and abs(scaled) <= tolerance:
        return ConditionReport(
            condition=condition,
            verdict=Verdict.HOLDS,
            margin=float(scaled),
            boundary=True,
            notes="violation within tolerance; treated as boundary case",
        )
    return ConditionReport(
        condition=condition,
        verdict=Verdict.FAILS,
        witness=ray,
        margin=scaled if tolerance == 0 else float(scaled),
    )


def _linear_condition_on_region(
    gradient,
    region: AffineRegion,
    tolerance: float,
    condition: ConditionId,
) -> ConditionReport:
    value, attained, ray = region.linear_infimum(gradient, tolerance)
    if value == float("-inf"):
        return ConditionReport(
            condition=condition,
            verdict=Verdict.FAILS,
            witness=tuple(float(a) for a in ray),
            margin=float("-inf"),
            notes="pairing is unbounded below on the region",
        )
    if value >= -tolerance:
        return ConditionReport(
            condition=condition,
            verdict=Verdict.HOLDS,
            margin=float(value),
            boundary=abs(value) <= tolerance,
        )
    return ConditionReport(
        condition=condition,
        verdict=Verdict.FAILS,
        witness=tuple(float(a) for a in attained),
        margin=float(value),
    )


def first_order_check(
    gradient,
    tangent: PolyhedralCone | AffineRegion,
    tolerance: float | Fraction = 0,
    condition: ConditionId = ConditionId.FIRST_ORDER,
) -> ConditionReport:
    """Is <gradient, v> >= 0 for every v in the tangent cone?

    Equivalently the infimum of the pairing over the cone is 0 (so -gradient
    lies in the normal cone).  Exact cones go through the certificate LP;
    affine regions use the closed form.
    """
    if isinstance(tangent, PolyhedralCone):
        return _linear_condition_on_cone(
            _as_rational_vector(gradient), tangent, tolerance, condition
        )
    return _linear_condition_on_region(gradient, tangent, float(tolerance), condition)


def check_c1(
    gradient,
    second_order_set: PolyhedralCone | AffineRegion,
    tolerance: float | Fraction = 0,
) -> ConditionReport:
    """Strengthened condition: <gradient, w> >= 0 on the second-order tangent set."""
    if isinstance(second_order_set, PolyhedralCone):
        return _linear_condition_on_cone(
            _as_rational_vector(gradient), second_order_set, tolerance, ConditionId.C1
        )
    return _linear_condition_on_region(
        gradient, second_order_set, float(tolerance), ConditionId.C1
    )


def critical_cone(gradient, tangent: PolyhedralCone) -> PolyhedralCone:
    """Tangent directions orthogonal to the gradient, as a cone.

    Meaningful as a "critical cone" when the first-order condition holds;
    callers checking second-order conditions at a non-stationary point get
    the same intersection without a warning.
    """
    grad = _as_rational_vector(gradient)
    if grad.dim != tangent.dim:
        raise DimensionMismatchError("gradient dimension does not match the cone")
    eq = tangent.eq_rows.stack(RationalMatrix([grad], tangent.dim))
    return PolyhedralCone(
        tangent.dim,
        eq_rows=eq,
        ineq_rows=tangent.ineq_rows,
        ineq_origins=tangent.ineq_origins,
        dim_cap=tangent.dim_cap,
    )


# ---------------------------------------------------------------------------
# Copositivity
# ---------------------------------------------------------------------------


def _psd_witness(q: list[list[Fraction]]) -> list[Fraction] | None:
    """None if the symmetric rational matrix is PSD, else u with u'Qu < 0.

    Pivoted congruence elimination: a negative diagonal entry is an
    immediate witness; a zero diagonal with a nonzero off-diagonal entry
    yields an explicit indefinite 2x2 witness; a positive pivot reduces to
    the Schur complement, through which witnesses lift exactly.
    """
    k = len(q)
    if k == 0:
        return None
    head = q[0][0]
    if head < 0:
        return [Fraction(1)] + [Fraction(0)] * (k - 1)
    if head == 0:
        j = next((c for c in range(1, k) if q[0][c] != 0), None)
        if j is not None:
            u = [Fraction(0)] * k
            # value of t*e0 + ej is 2 t q0j + qjj; pick t so it equals -1
            u[0] = -(q[j][j] + 1) / (2 * q[0][j])
            u[j] = Fraction(1)
            return u
        sub = [[q[i][c] for c in range(1, k)] for i in range(1, k)]
        tail = _psd_witness(sub)
        return None if tail is None else [Fraction(0)] + tail
    schur = [
        [q[i][c] - q[0][i] * q[0][c] / head for c in range(1, k)]
        for i in range(1, k)
    ]
    tail = _psd_witness(schur)
    if tail is None:
        return None
    cross = sum((q[0][i + 1] * tail[i] for i in range(k - 1)), Fraction(0))
    return [-cross / head] + tail


def _quadratic_form(matrix: RationalMatrix, v: RationalVector) -> Fraction:
    return matrix.matvec(v).dot(v)


def _copositivity_exact(
    matrix: RationalMatrix,
    cone: PolyhedralCone,
    max_depth: int,
    falsifier_samples: int,
) -> CopositivityResult:
    gens = cone.generators()
    if gens.is_origin():
        return CopositivityResult(status=CopositivityStatus.COPOSITIVE, method="trivial")

    if not gens.rays:
        # Pure subspace: copositivity there is positive semidefiniteness of
        # the restriction to the lineality basis, decided exactly.
        basis = list(gens.lineality)
        restricted = [[_pairing(matrix, a, b) for b in basis] for a in basis]
        witness_coords = _psd_witness(restricted)
        if witness_coords is None:
            return CopositivityResult(
                status=CopositivityStatus.COPOSITIVE, method="subspace-factorization"
            )
        witness = RationalVector.zero(cone.dim)
        for coord, vec in zip(witness_coords, basis):
            witness = witness + vec.scale(coord)
        witness = witness.primitive()
        return CopositivityResult(
            status=CopositivityStatus.NOT_COPOSITIVE,
            witness=witness,
            witness_value=_quadratic_form(matrix, witness),
            method="subspace-factorization",
        )

    generators = list(gens.spanning_vectors())
    queue: list[tuple[tuple[RationalVector, ...], int]] = [(tuple(generators), 0)]
    cells_certified = 0
    depth_reached = 0
    inconclusive = False
    while queue:
        cell, depth = queue.pop(0)
        depth_reached = max(depth_reached, depth)
        products = [[_pairing(matrix, a, b) for b in cell] for a in cell]
        negative_vertex = next(
            (i for i in range(len(cell)) if products[i][i] < 0), None
        )
        if negative_vertex is not None:
            witness = cell[negative_vertex]
            return CopositivityResult(
                status=CopositivityStatus.NOT_COPOSITIVE,
                witness=witness,
                witness_value=products[negative_vertex][negative_vertex],
                depth_reached=depth_reached,
                cells_certified=cells_certified,
                method="simplicial-partition",
            )
        if all(
            products[i][j] >= 0
            for i in range(len(cell))
            for j in range(i, len(cell))
        ):
            cells_certified += 1
            continue
        if depth >= max_depth:
            inconclusive = True
            continue
        split = _longest_edge(cell)
        if split is None:  # degenerate cell, nothing to bisect
            inconclusive = True
            continue
        i, j = split
        midpoint = (cell[i] + cell[j]).primitive()
        left = tuple(midpoint if k == i else v for k, v in enumerate(cell))
        right = tuple(midpoint if k == j else v for k, v in enumerate(cell))
        queue.append((left, depth + 1))
        queue.append((right, depth + 1))

    if not inconclusive:
        return CopositivityResult(
            status=CopositivityStatus.COPOSITIVE,
            depth_reached=depth_reached,
            cells_certified=cells_certified,
            method="simplicial-partition",
        )

    sampled = _sphere_sampling_falsifier(matrix, generators, falsifier_samples)
    if sampled is not None:
        witness, value = sampled
        return CopositivityResult(
            status=CopositivityStatus.NOT_COPOSITIVE,
            witness=witness,
            witness_value=value,
            depth_reached=depth_reached,
            cells_certified=cells_certified,
            method="sphere-sampling",
        )
    return CopositivityResult(
        status=CopositivityStatus.INCONCLUSIVE,
        depth_reached=depth_reached,
        cells_certified=cells_certified,
        method="simplicial-partition",
    )


def _pairing(matrix: RationalMatrix, a: RationalVector, b: RationalVector) -> Fraction:
    return matrix.matvec(b).dot(a)


def _longest_edge(cell: Sequence[RationalVector]) -> tuple[int, int] | None:
    best = None
    best_len = Fraction(0)
    for i in range(len(cell)):
        for j in range(i + 1, len(cell)):
            diff = cell[i] - cell[j]
            length = diff.dot(diff)
            if length > best_len:
                best, best_len = (i, j), length
    return best


def _sphere_sampling_falsifier(
    matrix: RationalMatrix,
    generators: list[RationalVector],
    samples: int,
) -> tuple[RationalVector, Fraction] | None:
    """Seeded random search for a cone direction with negative quadratic form.

    Candidates are convex combinations of the generators, screened in float
    and confirmed in exact arithmetic before being reported.
    """
    rng = random.Random(1789)
    float_gens = np.array([g.as_floats() for g in generators], dtype=float)
    float_matrix = np.array(matrix.as_float_rows(), dtype=float)
    for _ in range(samples):
        coeffs = np.array([rng.random() for _ in generators])
        candidate = coeffs @ float_gens
        norm = float(np.linalg.norm(candidate))
        if norm < 1e-12:
            continue
        candidate /= norm
        if float(candidate @ float_matrix @ candidate) < -1e-9:
            exact = RationalVector.zero(len(candidate))
            for c, g in zip(coeffs, generators):
                exact = exact + g.scale(Fraction(float(c)))
            exact = exact.primitive()
            value = _quadratic_form(matrix, exact)
            if value < 0:
                return exact, value
    return None


def _copositivity_float(matrix, region: AffineRegion) -> CopositivityResult:
    m = np.asarray(matrix, dtype=float)
    if region.kind is RegionKind.HYPERPLANE:
        unit = region.normal / np.linalg.norm(region.normal)
        _, _, vh = np.linalg.svd(unit.reshape(1, -1))
        basis = vh[1:]
    else:
        # q(v) = q(-v), and the half-space plus its negation cover the whole
        # space, so copositivity on a half-space is plain semidefiniteness.
        basis = np.eye(region.dim)
    restricted = basis @ m @ basis.T
    eigenvalues, eigenvectors = np.linalg.eigh(restricted)
    smallest = float(eigenvalues[0])
    if smallest >= -_EIG_TOL:
        return CopositivityResult(status=CopositivityStatus.COPOSITIVE, method="eigenvalue")
    witness = eigenvectors[:, 0] @ basis
    return CopositivityResult(
        status=CopositivityStatus.NOT_COPOSITIVE,
        witness=tuple(float(a) for a in witness),
        witness_value=smallest,
        method="eigenvalue",
    )


def check_c2_copositivity(
    matrix,
    cone: PolyhedralCone | AffineRegion,
    *,
    max_depth: int = DEFAULT_SUBDIVISION_DEPTH,
    falsifier_samples: int = DEFAULT_FALSIFIER_SAMPLES,
) -> CopositivityResult:
    """Is <matrix v, v> >= 0 for every v in the cone?

    Exact rational cones: a pure subspace is decided completely by pivoted
    factorization of the restricted matrix; otherwise the simplicial
    partition over the generators certifies cells with all pairwise products
    nonnegative, reports any vertex with negative form as a witness, and
    bisects the longest edge up to ``max_depth``, falling back to a seeded
    sphere-sampling falsifier before answering Inconclusive.  Float regions
    are decided by an eigenvalue threshold of 1e-10 on the restricted matrix.
    """
    if isinstance(cone, PolyhedralCone):
        if not isinstance(matrix, RationalMatrix):
            raise TypeError("exact copositivity requires a RationalMatrix")
        return _copositivity_exact(matrix, cone, max_depth, falsifier_samples)
    return _copositivity_float(matrix, cone)


# ---------------------------------------------------------------------------
# Classical second-order condition and bundled checks
# ---------------------------------------------------------------------------


def classical_second_order_check(
    gradient,
    curvature: Fraction | float,
    second_order_set: PolyhedralCone | AffineRegion,
    tolerance: float | Fraction = 0,
) -> ConditionReport:
    """inf <gradient, w> over the second-order tangent set, plus curvature, >= 0.

    ``curvature`` is the caller-evaluated <Hess f(x) v, v> for the critical
    direction that produced the set.  Over a polyhedral second-order set the
    infimum is 0 or -inf; over the one-constraint affine descriptors it has
    the closed form handled by the region itself.
    """
    certificate = None
    if isinstance(second_order_set, PolyhedralCone):
        grad = _as_rational_vector(gradient)
        linear = _linear_condition_on_cone(
            grad, second_order_set, 0, ConditionId.CLASSICAL_32
        )
        if linear.verdict is Verdict.HOLDS:
            infimum: Fraction | float = Fraction(0)
            witness_point: RationalVector | tuple | None = RationalVector.zero(grad.dim)
            certificate = linear.certificate
        else:
            infimum = float("-inf")
            witness_point = linear.witness
    else:
        infimum, attained, ray = second_order_set.linear_infimum(
            gradient, float(tolerance)
        )
        witness_point = tuple(float(a) for a in (ray if ray is not None else attained))
    if infimum == float("-inf"):
        return ConditionReport(
            condition=ConditionId.CLASSICAL_32,
            verdict=Verdict.FAILS,
            witness=witness_point,
            margin=float("-inf"),
            notes="gradient pairing is unbounded below on the second-order set",
        )
    total = infimum + curvature
    exact = isinstance(total, Fraction)
    holds = (total >= 0) if exact else (total >= -tolerance)
    if holds:
        return ConditionReport(
            condition=ConditionId.CLASSICAL_32,
            verdict=Verdict.HOLDS,
            certificate=certificate,
            margin=total,
            boundary=(not exact) and abs(total) <= tolerance,
        )
    return ConditionReport(
        condition=ConditionId.CLASSICAL_32,
        verdict=Verdict.FAILS,
        witness=witness_point,
        margin=total,
    )


@dataclass(frozen=True)
class SecondOrderBundle:
    """Checks performed at one critical direction.

    ``strengthened_gradient`` is (c1) on the second-order tangent set,
    ``curvature_at_direction`` the single-direction (c2) sign test, and
    ``classical`` the combined inequality those two strengthen, kept for
    comparison: the classical condition can hold while (c2) fails.
    """

    direction: CriticalDirection
    strengthened_gradient: ConditionReport
    curvature_at_direction: ConditionReport
    classical: ConditionReport


def theorem33_check(
    objective: SmoothObjective,
    constraint: Polyhedron | SmoothLevelSetConstraint,
    point,
    direction,
    tolerance: float = DEFAULT_FLOAT_TOL,
) -> SecondOrderBundle:
    """Bundle (c1), the (c2) sign at one direction, and the classical check.

    ``constraint`` is either an exact polyhedron (cones computed exactly,
    gradients converted to exact rationals) or a single smooth level-set
    constraint (affine descriptors, float arithmetic with tolerances).
    """
    grad = objective.gradient_at(point)
    hessian = objective.hessian_at(point)
    vec = np.asarray(direction, dtype=float).reshape(-1)
    curvature = float(vec @ hessian @ vec)
    pairing = float(grad @ vec)

    if isinstance(constraint, Polyhedron):
        point_r = _as_rational_vector(point)
        direction_r = _as_rational_vector(direction)
        critical = assess_direction_polyhedral(
            constraint, point_r, direction_r, pairing, tolerance
        )
        second_order = constraint.second_order_tangent_set(point_r, direction_r)
    else:
        region = constraint.tangent_cone(point, tolerance)
        critical = assess_direction_region(region, vec, pairing, tolerance)
        second_order = constraint.second_order_tangent_set(point, vec, tolerance)

    c1 = check_c1(grad, second_order, tolerance)
    if curvature >= -tolerance:
        c2_at_v = ConditionReport(
            condition=ConditionId.C2,
            verdict=Verdict.HOLDS,
            margin=curvature,
            boundary=abs(curvature) <= tolerance,
        )
    else:
        c2_at_v = ConditionReport(
            condition=ConditionId.C2,
            verdict=Verdict.FAILS,
            witness=tuple(float(a) for a in vec),
            margin=curvature,
        )
    classical = classical_second_order_check(grad, curvature, second_order, tolerance)
    return SecondOrderBundle(
        direction=critical,
        strengthened_gradient=c1,
        curvature_at_direction=c2_at_v,
        classical=classical,
    )


@dataclass(frozen=True)
class QPConditions:
    """The (c0)/(c1')/(c2') reports for a quadratic program at a point."""

    stationarity: ConditionReport
    strengthened_gradient: ConditionReport
    curvature_on_critical_cone: ConditionReport
    tangent_cone: PolyhedralCone
    critical_cone: PolyhedralCone
    checked_directions: tuple[RationalVector, ...] = field(default=())

    @property
    def all_hold(self) -> bool:
        return all(
            r.verdict is Verdict.HOLDS
            for r in (
                self.stationarity,
                self.strengthened_gradient,
                self.curvature_on_critical_cone,
            )
        )


def check_qp(
    objective: QuadraticObjective,
    constraint_set: Polyhedron,
    point: RationalVector,
    *,
    max_depth: int = DEFAULT_SUBDIVISION_DEPTH,
    falsifier_samples: int = DEFAULT_FALSIFIER_SAMPLES,
) -> QPConditions:
    """Exact (c0)/(c1')/(c2') verification for min (1/2)<Mx,x> + <q,x> over a polyhedron.

    (c0) is the first-order check with gradient M x + q; (c1') runs the
    strengthened gradient condition over the second-order tangent set at
    every generator of the critical cone; (c2') tests copositivity of M on
    the critical cone.
    """
    constraint_set.require_member(point)
    gradient = objective.gradient(point)
    tangent = constraint_set.tangent_cone(point)
    c0 = first_order_check(gradient, tangent, 0, ConditionId.QP_C0)

    crit = critical_cone(gradient, tangent)
    directions = list(crit.generators().spanning_vectors())
    if not directions:
        directions = [RationalVector.zero(constraint_set.dim)]

    c1_reports = []
    failing = None
    for v in directions:
        second_order = constraint_set.second_order_tangent_set(point, v)
        report = check_c1(gradient, second_order, 0)
        c1_reports.append(report)
        if report.verdict is Verdict.FAILS and failing is None:
            failing = (v, report)
    if failing is None:
        certificates = [r.certificate for r in c1_reports]
        c1p = ConditionReport(
            condition=ConditionId.QP_C1P,
            verdict=Verdict.HOLDS,
            certificate=certificates[0] if certificates else None,
            margin=Fraction(0),
            checked_directions=tuple(directions),
            notes="checked at every critical-cone generator",
        )
    else:
        v, report = failing
        c1p = ConditionReport(
            condition=ConditionId.QP_C1P,
            verdict=Verdict.FAILS,
            witness=report.witness,
            margin=report.margin,
            checked_directions=tuple(directions),
            witness_direction=v,
            notes=f"violated at critical direction {v}",
        )

    copositivity = check_c2_copositivity(
        objective.matrix, crit, max_depth=max_depth, falsifier_samples=falsifier_samples
    )
    verdict = {
        CopositivityStatus.COPOSITIVE: Verdict.HOLDS,
        CopositivityStatus.NOT_COPOSITIVE: Verdict.FAILS,
        CopositivityStatus.INCONCLUSIVE: Verdict.INCONCLUSIVE,
    }[copositivity.status]
    c2p = ConditionReport(
        condition=ConditionId.QP_C2P,
        verdict=verdict,
        witness=copositivity.witness,
        certificate=copositivity,
        margin=copositivity.witness_value,
    )
    return QPConditions(
        stationarity=c0,
        strengthened_gradient=c1p,
        curvature_on_critical_cone=c2p,
        tangent_cone=tangent,
        critical_cone=crit,
        checked_directions=tuple(directions),
    )
