import itertools
import random
from fractions import Fraction

import pytest

from cone_audit.dd import double_description
from cone_audit.errors import DimensionCapExceededError
from cone_audit.geometry import PolyhedralCone
from cone_audit.linalg import RationalMatrix, RationalVector, kernel_basis, rref, vector
from cone_audit.lp import LPStatus

from conftest import random_vector


def brute_force_generators(dim, eq_rows, ineq_rows):
    """Independent generator enumeration by face analysis.

    The lineality space is the kernel of all rows; every extreme ray spans a
    one-dimensional face (modulo lineality) obtained by making some subset of
    inequalities tight, so enumerating subsets and keeping the feasible
    direction of each such kernel recovers exactly the extreme rays.
    """
    stacked = RationalMatrix(list(eq_rows) + list(ineq_rows), dim)
    lineality = kernel_basis(stacked)
    lin_rows, lin_pivots = rref(RationalMatrix(lineality, dim)) if lineality else ([], [])

    def reduce_mod_lineality(vec):
        entries = list(vec.entries)
        for row, pivot in zip(lin_rows, lin_pivots):
            factor = entries[pivot]
            if factor != 0:
                entries = [a - factor * b for a, b in zip(entries, row)]
        return RationalVector(entries)

    rays = set()
    for size in range(0, min(dim, len(ineq_rows)) + 1):
        for subset in itertools.combinations(range(len(ineq_rows)), size):
            tight = RationalMatrix(
                list(eq_rows) + [ineq_rows[k] for k in subset], dim
            )
            face_space = kernel_basis(tight)
            if len(face_space) != len(lineality) + 1:
                continue
            direction = next(
                (
                    reduced
                    for reduced in (reduce_mod_lineality(v) for v in face_space)
                    if not reduced.is_zero()
                ),
                None,
            )
            if direction is None:
                continue
            direction = direction.primitive()
            if all(g.dot(direction) <= 0 for g in ineq_rows):
                rays.add(direction)
            elif all(g.dot(-direction) <= 0 for g in ineq_rows):
                rays.add((-direction).primitive())
    canonical_lineality = tuple(
        sorted(
            (RationalVector(row).primitive() for row in lin_rows),
            key=lambda v: v.entries,
        )
    )
    return tuple(sorted(rays, key=lambda v: v.entries)), canonical_lineality


def test_halfplane():
    gens = double_description(2, ineq_rows=[vector(1, 0)])
    assert gens.rays == (vector(-1, 0),)
    assert gens.lineality == (vector(0, 1),)


def test_first_orthant():
    gens = double_description(2, ineq_rows=[vector(-1, 0), vector(0, -1)])
    assert gens.rays == (vector(0, 1), vector(1, 0))
    assert gens.lineality == ()


def test_origin_from_identity_equalities():
    gens = double_description(2, eq_rows=[vector(1, 0), vector(0, 1)])
    assert gens.is_origin()


def test_full_space():
    gens = double_description(3)
    assert gens.rays == ()
    assert len(gens.lineality) == 3


def test_dimension_cap():
    with pytest.raises(DimensionCapExceededError):
        double_description(11)
    gens = double_description(11, dim_cap=12)
    assert len(gens.lineality) == 11


def test_ice_cream_like_cone():
    # {v | v1 <= 0, v1 + v2 <= 0, v1 - v2 <= 0}: a pointed wedge
    gens = double_description(
        2, ineq_rows=[vector(1, 0), vector(1, 1), vector(1, -1)]
    )
    assert gens.lineality == ()
    assert set(gens.rays) == {vector(-1, 1), vector(-1, -1)}


def test_soundness_and_completeness_random():
    """Every generator satisfies the H-system, and grid rays of the H-system
    lie in the generator cone (membership LP)."""
    rng = random.Random(7)
    grid = [Fraction(a) for a in (-1, 0, 1)]
    for _ in range(60):
        dim = rng.randint(1, 5)
        rows = [random_vector(rng, dim) for _ in range(rng.randint(1, 8))]
        eqs = [random_vector(rng, dim) for _ in range(rng.randint(0, 2))]
        cone = PolyhedralCone(
            dim,
            eq_rows=RationalMatrix(eqs, dim),
            ineq_rows=RationalMatrix(rows, dim),
        )
        gens = cone.generators()
        for ray in gens.rays:
            assert cone.contains(ray)
        for line in gens.lineality:
            assert cone.contains(line) and cone.contains(-line)
        # sample small grid points satisfying the H-system; each must be a
        # conic combination of the generators
        samples = 0
        for _ in range(30):
            candidate = RationalVector([rng.choice(grid) for _ in range(dim)])
            if candidate.is_zero() or not cone.contains(candidate):
                continue
            samples += 1
            assert cone.membership_lp(candidate).status is LPStatus.OPTIMAL
            if samples >= 5:
                break


def test_determinism_bit_identical():
    rows = [vector(1, 2, -1), vector(-3, 1, 0), vector(0, -1, 1)]
    first = double_description(3, ineq_rows=rows)
    second = double_description(3, ineq_rows=rows)
    assert first == second


def test_cone_over_square():
    rows = [vector(1, 0, -1), vector(-1, 0, -1), vector(0, 1, -1), vector(0, -1, -1)]
    gens = double_description(3, ineq_rows=rows)
    assert gens.lineality == ()
    assert set(gens.rays) == {
        vector(1, 1, 1),
        vector(1, -1, 1),
        vector(-1, 1, 1),
        vector(-1, -1, 1),
    }


def test_redundant_rows_pruned():
    gens = double_description(2, ineq_rows=[vector(-1, 0), vector(-1, 0), vector(-2, -1)])
    assert set(gens.rays) == {vector(0, 1), vector(1, -2)}


def test_agrees_with_brute_force_face_enumeration():
    """Exact agreement with the independent subset-of-tight-rows oracle."""
    rng = random.Random(271828)
    for _ in range(120):
        dim = rng.randint(1, 5)
        n_in = rng.randint(1, 7)
        n_eq = rng.randint(0, 2)
        ineq = [random_vector(rng, dim) for _ in range(n_in)]
        eqs = [random_vector(rng, dim) for _ in range(n_eq)]
        ineq = [r for r in ineq if not r.is_zero()]
        eqs = [r for r in eqs if not r.is_zero()]
        gens = double_description(dim, eqs, ineq)
        expected_rays, expected_lineality = brute_force_generators(dim, eqs, ineq)
        assert gens.rays == expected_rays, (eqs, ineq)
        assert gens.lineality == expected_lineality, (eqs, ineq)


def test_output_rays_are_extreme():
    """No reported ray may be a conic combination of the other generators."""
    rng = random.Random(5)
    for _ in range(40):
        dim = rng.randint(2, 5)
        rows = [random_vector(rng, dim) for _ in range(rng.randint(2, 8))]
        cone = PolyhedralCone(dim, ineq_rows=RationalMatrix(rows, dim))
        gens = cone.generators()
        rays = list(gens.rays)
        for i, ray in enumerate(rays):
            from cone_audit.dd import GeneratorSet

            sub = PolyhedralCone.from_generators(
                GeneratorSet(
                    dim=dim,
                    rays=tuple(rays[:i] + rays[i + 1:]),
                    lineality=gens.lineality,
                )
            )
            assert sub.membership_lp(ray).status is not LPStatus.OPTIMAL
