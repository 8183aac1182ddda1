"""Double description: generator enumeration for polyhedral cones.

Converts a homogeneous system  {v | B v = 0, G v <= 0}  into generators
(extreme rays plus a lineality basis).  The incremental algorithm keeps the
pair (lineality basis L, ray list R) exact at every step:

* a constraint that cuts the current lineality space removes one basis
  vector, which re-enters the ray list oriented to the feasible side, and
  projects every other generator onto the constraint hyperplane;
* a constraint orthogonal to the lineality space performs the classical
  ray step, pairing strictly-feasible with strictly-violating rays; the
  combinatorial adjacency test (no third ray whose zero set contains the
  common zero set of the pair) prunes non-extreme combinations.

All data is rational, all choices are index-ordered, and output rays are
reduced modulo the lineality space and scaled to coprime integers, so
identical inputs give bit-identical generator sets.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DimensionCapExceededError
from .linalg import RationalMatrix, RationalVector, rref

DEFAULT_DIMENSION_CAP = 10


@dataclass(frozen=True)
class GeneratorSet:
    """V-representation of a polyhedral cone: cone(rays) + span(lineality)."""

    dim: int
    rays: tuple[RationalVector, ...]
    lineality: tuple[RationalVector, ...]

    def is_origin(self) -> bool:
        return not self.rays and not self.lineality

    def spanning_vectors(self) -> tuple[RationalVector, ...]:
        """Rays followed by +-each lineality basis vector (conic generators)."""
        negs = tuple(-v for v in self.lineality)
        return self.rays + self.lineality + negs


def _canonical_lineality(vectors: Sequence[RationalVector], dim: int) -> tuple[RationalVector, ...]:
    if not vectors:
        return ()
    rows, pivots = rref(RationalMatrix(vectors, dim))
    return tuple(
        sorted(
            (RationalVector(rows[i]).primitive() for i in range(len(pivots))),
            key=lambda v: v.entries,
        )
    )


def _reduce_mod(vec: RationalVector, basis_rows: list[list[Fraction]], pivots: list[int]) -> RationalVector:
    """Canonical representative of ``vec`` modulo the span of an RREF basis."""
    entries = list(vec.entries)
    for row, pc in zip(basis_rows, pivots):
        factor = entries[pc]
        if factor != 0:
            entries = [a - factor * b for a, b in zip(entries, row)]
    return RationalVector(entries)


class _State:
    def __init__(self, dim: int):
        self.dim = dim
        self.lineality: list[RationalVector] = [RationalVector.unit(dim, i) for i in range(dim)]
        self._refresh_basis()
        self.rays: list[RationalVector] = []
        self.processed: list[RationalVector] = []

    def _refresh_basis(self) -> None:
        if self.lineality:
            self._basis_rows, self._pivots = rref(RationalMatrix(self.lineality, self.dim))
            self.lineality = [
                RationalVector(self._basis_rows[i]) for i in range(len(self._pivots))
            ]
        else:
            self._basis_rows, self._pivots = [], []

    def _canonical_ray(self, vec: RationalVector) -> RationalVector:
        return _reduce_mod(vec, self._basis_rows, self._pivots).primitive()

    def _dedupe(self, rays: Iterable[RationalVector]) -> list[RationalVector]:
        seen: dict[tuple, RationalVector] = {}
        for r in rays:
            if not r.is_zero():
                seen.setdefault(r.entries, r)
        return list(seen.values())

    def add_constraint(self, normal: RationalVector) -> None:
        """Intersect the current cone with {v | normal . v <= 0}."""
        lin_values = [normal.dot(l) for l in self.lineality]
        cut = next((i for i, val in enumerate(lin_values) if val != 0), None)
        if cut is not None:
            pivot_vec, pivot_val = self.lineality[cut], lin_values[cut]
            if pivot_val > 0:
                pivot_vec, pivot_val = -pivot_vec, -pivot_val
            self.lineality = [
                l - pivot_vec.scale(normal.dot(l) / pivot_val)
                for i, l in enumerate(self.lineality)
                if i != cut
            ]
            self._refresh_basis()
            adjusted = [
                r - pivot_vec.scale(normal.dot(r) / pivot_val) for r in self.rays
            ]
            adjusted.append(pivot_vec)
            self.rays = self._dedupe(self._canonical_ray(r) for r in adjusted)
        else:
            values = [normal.dot(r) for r in self.rays]
            keep = [r for r, val in zip(self.rays, values) if val <= 0]
            plus = [(r, val) for r, val in zip(self.rays, values) if val > 0]
            minus = [(r, val) for r, val in zip(self.rays, values) if val < 0]
            if plus and minus:
                zero_sets = {
                    r.entries: frozenset(
                        k for k, g in enumerate(self.processed) if g.dot(r) == 0
                    )
                    for r in self.rays
                }
                combos = []
                for rp, vp in plus:
                    for rm, vm in minus:
                        common = zero_sets[rp.entries] & zero_sets[rm.entries]
                        if any(
                            zero_sets[other.entries] >= common
                            for other in self.rays
                            if other.entries not in (rp.entries, rm.entries)
                        ):
                            continue
                        combos.append(rm.scale(vp) - rp.scale(vm))
                keep.extend(self._canonical_ray(c) for c in combos)
            self.rays = self._dedupe(keep)
        self.processed.append(normal)

    def result(self) -> GeneratorSet:
        rays = tuple(sorted(self.rays, key=lambda v: v.entries))
        return GeneratorSet(
            dim=self.dim,
            rays=rays,
            lineality=_canonical_lineality(self.lineality, self.dim),
        )


def double_description(
    dim: int,
    eq_rows: Sequence[RationalVector] = (),
    ineq_rows: Sequence[RationalVector] = (),
    *,
    dim_cap: int = DEFAULT_DIMENSION_CAP,
) -> GeneratorSet:
    """Generators of {v in R^dim | eq_rows . v = 0, ineq_rows . v <= 0}.

    Equalities are processed first (as opposing inequality pairs), which
    shrinks the lineality space early and keeps ray counts small.
    """
    if dim > dim_cap:
        raise DimensionCapExceededError(dim, dim_cap)
    state = _State(dim)
    for row in eq_rows:
        if not row.is_zero():
            state.add_constraint(row)
            state.add_constraint(-row)
    for row in ineq_rows:
        if not row.is_zero():
            state.add_constraint(row)
    return state.result()
