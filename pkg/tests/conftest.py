"""Shared test helpers: random rational polyhedra built around known feasible points."""

import random
from fractions import Fraction

from cone_audit.geometry import Polyhedron
from cone_audit.linalg import RationalMatrix, RationalVector


def small_fraction(rng: random.Random, span: int = 3) -> Fraction:
    return Fraction(rng.randint(-span, span), rng.choice((1, 1, 2, 3)))


def random_vector(rng: random.Random, dim: int, span: int = 3) -> RationalVector:
    return RationalVector([small_fraction(rng, span) for _ in range(dim)])


def random_feasible_polyhedron(
    rng: random.Random,
    dim: int,
    num_ineq: int,
    num_eq: int = 0,
    active_probability: float = 0.5,
):
    """A polyhedron guaranteed to contain a known base point.

    Rows are random; each bound is the row value at the base point plus a
    nonnegative slack, zero with the given probability so the base point
    sits on interestingly many facets.
    """
    base = random_vector(rng, dim)
    ineq_rows = []
    bounds = []
    for _ in range(num_ineq):
        row = random_vector(rng, dim)
        if row.is_zero():
            row = RationalVector.unit(dim, rng.randrange(dim))
        slack = Fraction(0)
        if rng.random() >= active_probability:
            slack = Fraction(rng.randint(1, 4), rng.choice((1, 2)))
        ineq_rows.append(row)
        bounds.append(row.dot(base) + slack)
    eq_rows = []
    eq_rhs = []
    for _ in range(num_eq):
        row = random_vector(rng, dim)
        eq_rows.append(row)
        eq_rhs.append(row.dot(base))
    polyhedron = Polyhedron(
        dim,
        eq_matrix=RationalMatrix(eq_rows, dim),
        eq_rhs=RationalVector(eq_rhs),
        ineq_matrix=RationalMatrix(ineq_rows, dim),
        ineq_rhs=RationalVector(bounds),
    )
    return polyhedron, base


def tangent_membership_by_rows(polyhedron: Polyhedron, base, direction) -> bool:
    """Direct row evaluation of the tangent-cone formula (no step oracle)."""
    active = [
        k
        for k, row in enumerate(polyhedron.ineq_matrix.rows)
        if row.dot(base) == polyhedron.ineq_rhs[k]
    ]
    if any(row.dot(direction) != 0 for row in polyhedron.eq_matrix.rows):
        return False
    return all(polyhedron.ineq_matrix.row(k).dot(direction) <= 0 for k in active)
