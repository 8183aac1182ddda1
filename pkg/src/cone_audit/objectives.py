"""Objective models and single smooth level-set constraints.

Two arithmetic regimes coexist.  :class:`QuadraticObjective` is exact
rational data (symmetric matrix, linear term, constant) whose gradients feed
the tolerance-free polyhedral checkers.  :class:`SmoothObjective` wraps
binary64 evaluators for value/gradient/Hessian and is used wherever the
candidate point is irrational; verdicts in that regime carry explicit
tolerances.

A :class:`SmoothLevelSetConstraint` describes a set {g <= 0} or {h = 0} cut
out by one smooth function.  At a regular active point its tangent cone is
the half-space (or hyperplane) of the constraint gradient, and the
second-order tangent set in a boundary-tangential direction is the affine
translate whose offset is the negated curvature of the constraint; both come
back as :class:`AffineRegion` descriptors.

The worked examples used by the CLI and acceptance suite ship as named
fixtures: "ex31", "ex32", "ex41".
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Callable

import numpy as np

from .errors import (
    DimensionMismatchError,
    InactiveConstraintError,
    NotTangentDirectionError,
    VanishingGradientError,
)
from .geometry import Polyhedron
from .linalg import RationalMatrix, RationalVector

DEFAULT_ACTIVITY_TOL = 1e-9

Array = np.ndarray


@dataclass(frozen=True)
class QuadraticObjective:
    """f(x) = (1/2) <M x, x> + <q, x> + constant with M exactly symmetric."""

    matrix: RationalMatrix
    linear: RationalVector
    constant: Fraction = Fraction(0)

    def __post_init__(self):
        if self.matrix.nrows != self.matrix.ncols:
            raise DimensionMismatchError("quadratic matrix must be square")
        if not self.matrix.is_symmetric():
            raise ValueError("quadratic matrix must be exactly symmetric")
        if self.linear.dim != self.matrix.ncols:
            raise DimensionMismatchError("linear term does not match the matrix size")

    @property
    def dim(self) -> int:
        return self.matrix.ncols

    def value(self, x: RationalVector) -> Fraction:
        return Fraction(1, 2) * self.matrix.matvec(x).dot(x) + self.linear.dot(x) + self.constant

    def gradient(self, x: RationalVector) -> RationalVector:
        """Exact M x + q."""
        return self.matrix.matvec(x) + self.linear

    def quadratic_form(self, v: RationalVector) -> Fraction:
        return self.matrix.matvec(v).dot(v)

    def as_smooth(self) -> "SmoothObjective":
        m = np.array(self.matrix.as_float_rows(), dtype=float).reshape(self.dim, self.dim)
        q = np.array(self.linear.as_floats(), dtype=float)
        c = float(self.constant)
        return SmoothObjective(
            dimension=self.dim,
            value=lambda x: 0.5 * float(x @ m @ x) + float(q @ x) + c,
            gradient=lambda x: m @ x + q,
            hessian=lambda x: m,
        )


@dataclass(frozen=True)
class SmoothObjective:
    """Black-box C1 (optionally C2) objective with float evaluators."""

    dimension: int
    value: Callable[[Array], float]
    gradient: Callable[[Array], Array]
    hessian: Callable[[Array], Array] | None = None

    def gradient_at(self, x) -> Array:
        point = np.asarray(x, dtype=float).reshape(self.dimension)
        grad = np.asarray(self.gradient(point), dtype=float).reshape(-1)
        if grad.shape != (self.dimension,):
            raise DimensionMismatchError("gradient evaluator returned a wrong shape")
        return grad

    def hessian_at(self, x) -> Array:
        if self.hessian is None:
            raise ValueError("objective has no Hessian evaluator")
        point = np.asarray(x, dtype=float).reshape(self.dimension)
        hess = np.asarray(self.hessian(point), dtype=float)
        if hess.shape != (self.dimension, self.dimension):
            raise DimensionMismatchError("Hessian evaluator returned a wrong shape")
        scale = max(1.0, float(np.max(np.abs(hess))))
        if float(np.max(np.abs(hess - hess.T))) > 1e-12 * scale:
            raise ValueError("Hessian evaluator is not symmetric at the queried point")
        return hess


class RegionKind(Enum):
    HALF_SPACE = "half-space"
    HYPERPLANE = "hyperplane"


class AffineRegion:
    """{w | <normal, w> <= offset} or {w | <normal, w> = offset}, float data."""

    def __init__(self, kind: RegionKind, normal, offset: float):
        self.kind = kind
        self.normal = np.asarray(normal, dtype=float).reshape(-1)
        self.offset = float(offset)
        if not np.any(self.normal):
            raise VanishingGradientError("affine region needs a nonzero normal")

    @property
    def dim(self) -> int:
        return self.normal.shape[0]

    def normalized_offset(self) -> float:
        """Offset after scaling the normal to unit Euclidean length."""
        return self.offset / float(np.linalg.norm(self.normal))

    def contains(self, w, tol: float = 1e-9) -> bool:
        value = float(self.normal @ np.asarray(w, dtype=float))
        if self.kind is RegionKind.HYPERPLANE:
            return abs(value - self.offset) <= tol
        return value <= self.offset + tol

    def linear_infimum(self, direction, tol: float = 1e-9):
        """inf of <direction, w> over the region.

        Returns (value, attained point, None) when finite and
        (-inf, feasible base point, descent ray) when unbounded below.  The
        infimum is finite only when ``direction`` is parallel to the normal:
        any nonparallel direction descends along the region, and for a
        half-space a positive multiple of the normal descends through the
        interior.
        """
        grad = np.asarray(direction, dtype=float).reshape(-1)
        norm_sq = float(self.normal @ self.normal)
        mu = float(grad @ self.normal) / norm_sq
        residual = grad - mu * self.normal
        base = (self.offset / norm_sq) * self.normal
        scale = max(1.0, float(np.linalg.norm(grad)))
        if float(np.linalg.norm(residual)) > tol * scale:
            return float("-inf"), base, -residual
        if self.kind is RegionKind.HALF_SPACE and mu > tol:
            return float("-inf"), base, -self.normal
        return mu * self.offset, base, None


class ConstraintKind(Enum):
    INEQUALITY = "inequality"
    EQUALITY = "equality"


@dataclass(frozen=True)
class SmoothLevelSetConstraint:
    """One smooth constraint g(x) <= 0 or h(x) = 0 with supplied derivatives."""

    kind: ConstraintKind
    dimension: int
    value: Callable[[Array], float]
    gradient: Callable[[Array], Array]
    hessian: Callable[[Array], Array] | None = None

    def _point(self, x) -> Array:
        return np.asarray(x, dtype=float).reshape(self.dimension)

    def _active_gradient(self, x, activity_tol: float) -> Array:
        point = self._point(x)
        level = float(self.value(point))
        if abs(level) > activity_tol:
            raise InactiveConstraintError(
                f"constraint value {level} at the queried point exceeds the "
                f"activity tolerance {activity_tol}"
            )
        grad = np.asarray(self.gradient(point), dtype=float).reshape(-1)
        if float(np.linalg.norm(grad)) <= activity_tol:
            raise VanishingGradientError(
                "constraint gradient vanishes at the queried point"
            )
        return grad

    def tangent_cone(self, x, activity_tol: float = DEFAULT_ACTIVITY_TOL) -> AffineRegion:
        """Half-space {v | <grad g, v> <= 0}, or the hyperplane for an equality."""
        grad = self._active_gradient(x, activity_tol)
        kind = (
            RegionKind.HALF_SPACE
            if self.kind is ConstraintKind.INEQUALITY
            else RegionKind.HYPERPLANE
        )
        return AffineRegion(kind, grad, 0.0)

    def second_order_tangent_set(
        self, x, v, activity_tol: float = DEFAULT_ACTIVITY_TOL
    ) -> AffineRegion:
        """{w | <grad g, w> <=/= -<Hess g v, v>} for boundary-tangential v."""
        if self.hessian is None:
            raise ValueError("constraint has no Hessian evaluator")
        grad = self._active_gradient(x, activity_tol)
        direction = np.asarray(v, dtype=float).reshape(self.dimension)
        pairing = float(grad @ direction)
        if abs(pairing) > activity_tol * max(
            1.0, float(np.linalg.norm(grad)) * float(np.linalg.norm(direction))
        ):
            raise NotTangentDirectionError(
                "direction is not tangential to the constraint boundary: "
                f"<grad, v> = {pairing}"
            )
        hess = np.asarray(self.hessian(self._point(x)), dtype=float)
        curvature = float(direction @ hess @ direction)
        kind = (
            RegionKind.HALF_SPACE
            if self.kind is ConstraintKind.INEQUALITY
            else RegionKind.HYPERPLANE
        )
        return AffineRegion(kind, grad, -curvature)


# ---------------------------------------------------------------------------
# Built-in worked-example fixtures
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExampleFixture:
    """A named, self-contained worked example for the CLI and test suites."""

    name: str
    dimension: int
    objective: SmoothObjective
    constraint: SmoothLevelSetConstraint | None
    polyhedron: Polyhedron | None
    candidate_point: tuple[float, ...]
    default_direction: tuple[float, ...]
    description: str


def _ex31() -> ExampleFixture:
    objective = SmoothObjective(
        dimension=2,
        value=lambda x: -2.0 * x[0] ** 2 - x[1] ** 2,
        gradient=lambda x: np.array([-4.0 * x[0], -2.0 * x[1]]),
        hessian=lambda x: np.array([[-4.0, 0.0], [0.0, -2.0]]),
    )
    constraint = SmoothLevelSetConstraint(
        kind=ConstraintKind.INEQUALITY,
        dimension=2,
        value=lambda x: 2.0 * x[0] ** 2 + 3.0 * x[1] ** 2 - 6.0,
        gradient=lambda x: np.array([4.0 * x[0], 6.0 * x[1]]),
        hessian=lambda x: np.array([[4.0, 0.0], [0.0, 6.0]]),
    )
    return ExampleFixture(
        name="ex31",
        dimension=2,
        objective=objective,
        constraint=constraint,
        polyhedron=None,
        candidate_point=(math.sqrt(3.0), 0.0),
        default_direction=(0.0, 1.0),
        description="concave quadratic over one smooth inequality (elliptic disk)",
    )


def _ex32() -> ExampleFixture:
    objective = SmoothObjective(
        dimension=2,
        value=lambda x: -x[0] ** 2 - x[1] ** 2,
        gradient=lambda x: np.array([-2.0 * x[0], -2.0 * x[1]]),
        hessian=lambda x: np.array([[-2.0, 0.0], [0.0, -2.0]]),
    )
    constraint = SmoothLevelSetConstraint(
        kind=ConstraintKind.EQUALITY,
        dimension=2,
        value=lambda x: x[0] ** 2 + 2.0 * x[1] ** 2 - 1.0,
        gradient=lambda x: np.array([2.0 * x[0], 4.0 * x[1]]),
        hessian=lambda x: np.array([[2.0, 0.0], [0.0, 4.0]]),
    )
    return ExampleFixture(
        name="ex32",
        dimension=2,
        objective=objective,
        constraint=constraint,
        polyhedron=None,
        candidate_point=(-1.0, 0.0),
        default_direction=(0.0, 1.0),
        description="negative square norm over one smooth equality (ellipse)",
    )


def _ex41_gradient(x: float) -> float:
    return -x if x <= 0.0 else x * x


def _ex41() -> ExampleFixture:
    # C1 but not C2 at the origin: gradient -x on the left, x^2 on the right.
    objective = SmoothObjective(
        dimension=1,
        value=lambda x: (-0.5 * x[0] ** 2) if x[0] <= 0.0 else (x[0] ** 3 / 3.0),
        gradient=lambda x: np.array([_ex41_gradient(float(x[0]))]),
        hessian=None,
    )
    halfline = Polyhedron(
        1,
        ineq_matrix=RationalMatrix([RationalVector([-1])], 1),
        ineq_rhs=RationalVector([0]),
    )
    return ExampleFixture(
        name="ex41",
        dimension=1,
        objective=objective,
        constraint=None,
        polyhedron=halfline,
        candidate_point=(0.0,),
        default_direction=(1.0,),
        description="piecewise C1 objective on the nonnegative half-line",
    )


_FIXTURE_BUILDERS = {"ex31": _ex31, "ex32": _ex32, "ex41": _ex41}

FIXTURE_NAMES = tuple(sorted(_FIXTURE_BUILDERS))


def fixture(name: str) -> ExampleFixture:
    """Look up a shipped worked example by name ("ex31", "ex32", "ex41")."""
    try:
        builder = _FIXTURE_BUILDERS[name]
    except KeyError:
        raise KeyError(
            f"unknown fixture {name!r}; available: {', '.join(FIXTURE_NAMES)}"
        ) from None
    return builder()
