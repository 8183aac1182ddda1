"""Polyhedral constraint sets and their first/second-order cones.

A :class:`Polyhedron` is the H-form set {x | A x = y, <row_i, x> <= bound_i}.
From a feasible base point it produces, in exact arithmetic:

* the contingent (tangent) cone,
* second-order tangent sets in a tangent direction, together with the
  active rows that remain tight along that direction,
* the normal cone (by generators: active rows plus the row space of A),
* polars, and
* brute-force step oracles that decide tangency by actually stepping into
  the set at an exactly computed step length.  For polyhedra the finite
  step test is equivalent to the limit definition, which makes the oracles
  an independent cross-check of the cone formulas.

Inequality rows are numbered 1..p on all public surfaces (active sets,
provenance tags, error messages).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from .dd import DEFAULT_DIMENSION_CAP, GeneratorSet, double_description
from .errors import (
    DimensionMismatchError,
    NotInSetError,
    NotTangentDirectionError,
)
from .linalg import RationalMatrix, RationalVector, row_space_basis
from .lp import LPResult, solve_lp

_HALF = Fraction(1, 2)
_ONE = Fraction(1)


@dataclass(frozen=True)
class ActiveSet:
    """Inequality rows satisfied with equality at a feasible point (1-based)."""

    point: RationalVector
    indices: tuple[int, ...]


class PolyhedralCone:
    """A polyhedral cone, held as {v | eq v = 0, ineq v <= 0} and/or generators.

    Whichever representation is missing is computed on demand through the
    double description method and cached; instances are immutable apart from
    that cache, so concurrent read-only use is safe.  ``ineq_origins`` tags
    each inequality row with the 1-based row of the polyhedron it came from
    (None for rows without such provenance).
    """

    def __init__(
        self,
        dim: int,
        eq_rows: RationalMatrix | None = None,
        ineq_rows: RationalMatrix | None = None,
        ineq_origins: tuple[int | None, ...] | None = None,
        *,
        generators: GeneratorSet | None = None,
        dim_cap: int = DEFAULT_DIMENSION_CAP,
    ):
        if eq_rows is None and ineq_rows is None and generators is None:
            eq_rows = RationalMatrix([], dim)
            ineq_rows = RationalMatrix([], dim)
        self.dim = dim
        self.dim_cap = dim_cap
        has_h = eq_rows is not None or ineq_rows is not None
        self._eq = eq_rows if eq_rows is not None else (RationalMatrix([], dim) if has_h else None)
        self._ineq = ineq_rows if ineq_rows is not None else (RationalMatrix([], dim) if has_h else None)
        if self._eq is not None and self._eq.ncols != dim:
            raise DimensionMismatchError("equality rows do not match cone dimension")
        if self._ineq is not None and self._ineq.ncols != dim:
            raise DimensionMismatchError("inequality rows do not match cone dimension")
        if ineq_origins is not None and self._ineq is not None and len(ineq_origins) != self._ineq.nrows:
            raise DimensionMismatchError("one origin tag per inequality row is required")
        if ineq_origins is None and self._ineq is not None:
            ineq_origins = (None,) * self._ineq.nrows
        self.ineq_origins = ineq_origins if self._ineq is not None else ()
        if generators is not None and generators.dim != dim:
            raise DimensionMismatchError("generators do not match cone dimension")
        self._generators = generators

    # -- constructors --------------------------------------------------

    @classmethod
    def full_space(cls, dim: int) -> "PolyhedralCone":
        return cls(dim)

    @classmethod
    def from_generators(cls, generators: GeneratorSet, *, dim_cap: int = DEFAULT_DIMENSION_CAP) -> "PolyhedralCone":
        return cls(generators.dim, generators=generators, dim_cap=dim_cap)

    @classmethod
    def nonnegative_orthant(cls, dim: int) -> "PolyhedralCone":
        return cls(
            dim,
            eq_rows=RationalMatrix([], dim),
            ineq_rows=RationalMatrix([-RationalVector.unit(dim, i) for i in range(dim)], dim),
            ineq_origins=tuple(range(1, dim + 1)),
        )

    # -- representations ------------------------------------------------

    @property
    def eq_rows(self) -> RationalMatrix:
        self._ensure_h()
        return self._eq

    @property
    def ineq_rows(self) -> RationalMatrix:
        self._ensure_h()
        return self._ineq

    def generators(self) -> GeneratorSet:
        if self._generators is None:
            self._generators = double_description(
                self.dim, tuple(self._eq.rows), tuple(self._ineq.rows), dim_cap=self.dim_cap
            )
        return self._generators

    def _ensure_h(self) -> None:
        if self._eq is not None:
            return
        # H-form of cone(R) + span(L): enumerate the polar's generators; each
        # polar ray gives one inequality, each polar lineality vector one
        # equality (the polar's H-form is read off this cone's generators).
        gens = self._generators
        polar_gens = double_description(
            self.dim, gens.lineality, gens.rays, dim_cap=self.dim_cap
        )
        self._eq = RationalMatrix(polar_gens.lineality, self.dim)
        self._ineq = RationalMatrix(polar_gens.rays, self.dim)
        self.ineq_origins = (None,) * self._ineq.nrows

    # -- queries ----------------------------------------------------------

    def contains(self, v: RationalVector) -> bool:
        if v.dim != self.dim:
            raise DimensionMismatchError(
                f"vector dimension {v.dim} does not match cone dimension {self.dim}"
            )
        self._ensure_h()
        return all(row.dot(v) == 0 for row in self._eq.rows) and all(
            row.dot(v) <= 0 for row in self._ineq.rows
        )

    def polar(self) -> "PolyhedralCone":
        """The cone of functionals nonpositive on this cone, in H-form.

        One inequality per generator ray, one equality per lineality basis
        vector.
        """
        gens = self.generators()
        return PolyhedralCone(
            self.dim,
            eq_rows=RationalMatrix(gens.lineality, self.dim),
            ineq_rows=RationalMatrix(gens.rays, self.dim),
            dim_cap=self.dim_cap,
        )

    def membership_lp(self, v: RationalVector) -> LPResult:
        """Feasibility LP deciding v in cone(rays) + span(lineality).

        Independent of the H-form row checks; used by tests to cross-validate
        the double description output.
        """
        gens = self.generators()
        columns = list(gens.rays) + list(gens.lineality)
        k_rays = len(gens.rays)
        if not columns:
            # Only the origin; encode 0 = v through an empty-variable system.
            feasible = v.is_zero()
            if feasible:
                return solve_lp(RationalVector([]))
            return solve_lp(
                RationalVector([]),
                eq_matrix=RationalMatrix([RationalVector([])] * v.dim, 0),
                eq_rhs=v,
            )
        eq = RationalMatrix(
            [RationalVector(col[i] for col in columns) for i in range(self.dim)],
            len(columns),
        )
        ineq_rows = [
            RationalVector([-_ONE if j == r else Fraction(0) for j in range(len(columns))])
            for r in range(k_rays)
        ]
        return solve_lp(
            RationalVector([Fraction(0)] * len(columns)),
            eq_matrix=eq,
            eq_rhs=v,
            ineq_matrix=RationalMatrix(ineq_rows, len(columns)),
            ineq_rhs=RationalVector([Fraction(0)] * k_rays),
        )

    def __repr__(self) -> str:
        if self._eq is not None:
            return f"PolyhedralCone(dim={self.dim}, eq={self._eq.nrows}, ineq={self._ineq.nrows})"
        return f"PolyhedralCone(dim={self.dim}, generators cached)"


def cone_subset(inner: PolyhedralCone, outer: PolyhedralCone) -> tuple[bool, RationalVector | None]:
    """Decide cone inclusion; on failure return a generator of ``inner`` outside ``outer``."""
    if inner.dim != outer.dim:
        raise DimensionMismatchError("cones live in different ambient dimensions")
    for vec in inner.generators().spanning_vectors():
        if not outer.contains(vec):
            return False, vec
    return True, None


def cone_equal(first: PolyhedralCone, second: PolyhedralCone) -> tuple[bool, RationalVector | None]:
    """Mutual inclusion test; the witness vector lies in one cone only."""
    ok, witness = cone_subset(first, second)
    if not ok:
        return False, witness
    ok, witness = cone_subset(second, first)
    if not ok:
        return False, witness
    return True, None


class Polyhedron:
    """H-form convex polyhedron {x | A x = y, <row_i, x> <= bound_i}.

    The set may be empty; feasibility is queryable rather than assumed.
    All data is exact, all methods are pure.
    """

    def __init__(
        self,
        dim: int,
        eq_matrix: RationalMatrix | None = None,
        eq_rhs: RationalVector | None = None,
        ineq_matrix: RationalMatrix | None = None,
        ineq_rhs: RationalVector | None = None,
        *,
        dim_cap: int = DEFAULT_DIMENSION_CAP,
    ):
        self.dim = dim
        self.dim_cap = dim_cap
        self.eq_matrix = eq_matrix if eq_matrix is not None else RationalMatrix([], dim)
        self.eq_rhs = eq_rhs if eq_rhs is not None else RationalVector([])
        self.ineq_matrix = ineq_matrix if ineq_matrix is not None else RationalMatrix([], dim)
        self.ineq_rhs = ineq_rhs if ineq_rhs is not None else RationalVector([])
        if self.eq_matrix.ncols != dim or self.ineq_matrix.ncols != dim:
            raise DimensionMismatchError("constraint rows do not match the ambient dimension")
        if self.eq_matrix.nrows != self.eq_rhs.dim:
            raise DimensionMismatchError("equality block and its right-hand side differ in size")
        if self.ineq_matrix.nrows != self.ineq_rhs.dim:
            raise DimensionMismatchError("inequality rows and bounds differ in size")

    # -- constructors ------------------------------------------------------

    @classmethod
    def nonnegative_orthant(cls, dim: int) -> "Polyhedron":
        rows = RationalMatrix([-RationalVector.unit(dim, i) for i in range(dim)], dim)
        return cls(dim, ineq_matrix=rows, ineq_rhs=RationalVector.zero(dim))

    @classmethod
    def full_space(cls, dim: int) -> "Polyhedron":
        return cls(dim)

    @classmethod
    def from_affine_equations(cls, matrix: RationalMatrix, offset: RationalVector) -> "Polyhedron":
        """The affine set {x | matrix x + offset = 0}."""
        return cls(matrix.ncols, eq_matrix=matrix, eq_rhs=-offset)

    # -- basic queries -------------------------------------------------

    @property
    def num_inequalities(self) -> int:
        return self.ineq_matrix.nrows

    def _check_point(self, x: RationalVector) -> None:
        if x.dim != self.dim:
            raise DimensionMismatchError(
                f"point dimension {x.dim} does not match ambient dimension {self.dim}"
            )

    def contains(self, x: RationalVector) -> bool:
        self._check_point(x)
        return all(
            row.dot(x) == self.eq_rhs[i] for i, row in enumerate(self.eq_matrix.rows)
        ) and all(
            row.dot(x) <= self.ineq_rhs[k] for k, row in enumerate(self.ineq_matrix.rows)
        )

    def require_member(self, x: RationalVector) -> None:
        self._check_point(x)
        for i, row in enumerate(self.eq_matrix.rows):
            value = row.dot(x)
            if value != self.eq_rhs[i]:
                raise NotInSetError(
                    f"point violates equality row {i + 1}: got {value}, expected {self.eq_rhs[i]}",
                    violation=value - self.eq_rhs[i],
                )
        for k, row in enumerate(self.ineq_matrix.rows):
            value = row.dot(x)
            if value > self.ineq_rhs[k]:
                raise NotInSetError(
                    f"point violates inequality row {k + 1}: {value} > {self.ineq_rhs[k]}",
                    violated_row=k + 1,
                    violation=value - self.ineq_rhs[k],
                )

    def feasibility(self) -> LPResult:
        """Feasibility LP: OPTIMAL with a point, or INFEASIBLE with Farkas multipliers."""
        return solve_lp(
            RationalVector.zero(self.dim),
            eq_matrix=self.eq_matrix,
            eq_rhs=self.eq_rhs,
            ineq_matrix=self.ineq_matrix,
            ineq_rhs=self.ineq_rhs,
        )

    def _active_rows(self, x: RationalVector) -> list[int]:
        return [
            k
            for k, row in enumerate(self.ineq_matrix.rows)
            if row.dot(x) == self.ineq_rhs[k]
        ]

    def active_set(self, x: RationalVector) -> ActiveSet:
        self.require_member(x)
        return ActiveSet(point=x, indices=tuple(k + 1 for k in self._active_rows(x)))

    # -- cones -------------------------------------------------------------

    def tangent_cone(self, x: RationalVector) -> PolyhedralCone:
        """Contingent cone: {v | A v = 0, <row_i, v> <= 0 for active i}."""
        self.require_member(x)
        active = self._active_rows(x)
        return PolyhedralCone(
            self.dim,
            eq_rows=self.eq_matrix,
            ineq_rows=RationalMatrix([self.ineq_matrix.row(k) for k in active], self.dim),
            ineq_origins=tuple(k + 1 for k in active),
            dim_cap=self.dim_cap,
        )

    def _is_tangent(self, x: RationalVector, v: RationalVector, active: list[int]) -> bool:
        return all(row.dot(v) == 0 for row in self.eq_matrix.rows) and all(
            self.ineq_matrix.row(k).dot(v) <= 0 for k in active
        )

    def directionally_active_indices(self, x: RationalVector, v: RationalVector) -> tuple[int, ...]:
        """Active rows that stay tight along a tangent direction (1-based)."""
        self.require_member(x)
        active = self._active_rows(x)
        if not self._is_tangent(x, v, active):
            raise NotTangentDirectionError(
                "direction is not tangent at the base point; the second-order "
                "tangent set is only defined for tangent directions"
            )
        return tuple(k + 1 for k in active if self.ineq_matrix.row(k).dot(v) == 0)

    def second_order_tangent_set(self, x: RationalVector, v: RationalVector) -> PolyhedralCone:
        """{w | A w = 0, <row_i, w> <= 0 for active rows orthogonal to v}.

        The returned cone's ``ineq_origins`` are exactly those row numbers,
        so callers can report which constraints stay binding at second order.
        Raises :class:`NotTangentDirectionError` when v is not tangent.
        """
        tight = self.directionally_active_indices(x, v)
        return PolyhedralCone(
            self.dim,
            eq_rows=self.eq_matrix,
            ineq_rows=RationalMatrix([self.ineq_matrix.row(k - 1) for k in tight], self.dim),
            ineq_origins=tight,
            dim_cap=self.dim_cap,
        )

    def normal_cone(self, x: RationalVector) -> PolyhedralCone:
        """Normal cone by generators: active rows as rays, row space of A as lineality."""
        self.require_member(x)
        active = self._active_rows(x)
        rays = tuple(self.ineq_matrix.row(k).primitive() for k in active)
        lineality = row_space_basis(self.eq_matrix)
        gens = GeneratorSet(
            dim=self.dim,
            rays=tuple(sorted(set(rays), key=lambda r: r.entries)),
            lineality=tuple(sorted((l.primitive() for l in lineality), key=lambda r: r.entries)),
        )
        return PolyhedralCone.from_generators(gens, dim_cap=self.dim_cap)

    # -- step oracles --------------------------------------------------

    def tangent_step_oracle(self, x: RationalVector, v: RationalVector) -> bool:
        """Decide tangency by stepping: is x + t* v in the set?

        t* is half of min(slack_i / max(1, |<row_i, v>|)) over inactive rows,
        so no inactive row can flip within the step; membership of the
        stepped point is then exactly equivalent to tangency of v.
        """
        self.require_member(x)
        if v.dim != self.dim:
            raise DimensionMismatchError("direction dimension does not match the set")
        step = _ONE
        for k, row in enumerate(self.ineq_matrix.rows):
            slack = self.ineq_rhs[k] - row.dot(x)
            if slack > 0:
                speed = abs(row.dot(v))
                step = min(step, slack / max(_ONE, speed))
        return self.contains(x + v.scale(step * _HALF))

    def second_order_step_oracle(
        self, x: RationalVector, v: RationalVector, w: RationalVector
    ) -> bool:
        """Decide membership in the second-order tangent set by stepping.

        Tests x + t v + (t^2/2) w at a rational t small enough that neither
        inactive rows nor active rows with strictly negative <row, v> can be
        violated by the quadratic term; the remaining rows then decide
        membership exactly.  Requires v tangent at x.
        """
        self.require_member(x)
        active = set(self._active_rows(x))
        if not self._is_tangent(x, v, sorted(active)):
            raise NotTangentDirectionError(
                "direction is not tangent at the base point"
            )
        if w.dim != self.dim:
            raise DimensionMismatchError("second-order direction dimension mismatch")
        step = _ONE
        for k, row in enumerate(self.ineq_matrix.rows):
            first = row.dot(v)
            second = abs(row.dot(w))
            if k in active:
                if first < 0:
                    step = min(step, -first / max(_ONE, second * _HALF))
            else:
                slack = self.ineq_rhs[k] - row.dot(x)
                step = min(step, slack / max(_ONE, abs(first) + second * _HALF))
        t = step * _HALF
        probe = x + v.scale(t) + w.scale(t * t * _HALF)
        return self.contains(probe)

    def __repr__(self) -> str:
        return (
            f"Polyhedron(dim={self.dim}, equalities={self.eq_matrix.nrows}, "
            f"inequalities={self.ineq_matrix.nrows})"
        )
