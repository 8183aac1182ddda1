import math
from fractions import Fraction

import numpy as np
import pytest

from cone_audit.errors import UnsupportedFamilyError
from cone_audit.linalg import matrix, vector
from cone_audit.objectives import QuadraticObjective, SmoothObjective, fixture
from cone_audit.optimality import Verdict
from cone_audit.ssd import (
    EX41_GRADIENT_FAMILY,
    LogMesh,
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


def ex41_objective():
    return fixture("ex41").objective


def test_log_mesh():
    mesh = LogMesh()
    deltas = mesh.deltas()
    assert len(deltas) == 15
    assert math.isclose(deltas[0], 0.1) and math.isclose(deltas[-1], 1e-8)
    assert len(mesh.tail_deltas()) == 9
    parsed = LogMesh.parse("2:6:1")
    assert len(parsed.deltas()) == 5
    with pytest.raises(ValueError):
        LogMesh.parse("2:6")
    with pytest.raises(ValueError):
        LogMesh(exponent_start=3, exponent_stop=1)


def test_membership_example_values():
    obj = ex41_objective()
    assert ssd_membership(SSDQuery(obj, 0.0, 1.0, -0.5)).member
    verdict = ssd_membership(SSDQuery(obj, 0.0, 1.0, 0.25))
    assert not verdict.member
    assert verdict.worst_quotient > 1e-6
    # the attaining sample reproduces the worst quotient on re-evaluation
    repeat = ssd_membership(SSDQuery(obj, 0.0, 1.0, 0.25))
    assert repeat.worst_quotient == verdict.worst_quotient
    assert repeat.attaining_sample == verdict.attaining_sample


def test_membership_quadratic_hessian_action():
    half_sq = SmoothObjective(
        1,
        value=lambda x: 0.5 * x[0] ** 2,
        gradient=lambda x: np.array([x[0]]),
        hessian=lambda x: np.array([[1.0]]),
    )
    assert ssd_membership(SSDQuery(half_sq, 0.0, 1.0, 1.0)).member
    # a perturbation of 0.5 decisively clears the tolerance
    assert not ssd_membership(SSDQuery(half_sq, 0.0, 1.0, 1.5)).member
    assert not ssd_membership(SSDQuery(half_sq, 0.0, 1.0, 0.5)).member


def test_membership_rejects_high_dimension():
    q = QuadraticObjective(matrix([[1, 0], [0, 1]]), vector(0, 0)).as_smooth()
    with pytest.raises(ValueError):
        ssd_membership(SSDQuery(q, 0.0, 1.0, 1.0))


def test_interval_family():
    assert ssd_interval_1d_example_family(EX41_GRADIENT_FAMILY, 1) == (-1, 0)
    assert ssd_interval_1d_example_family(EX41_GRADIENT_FAMILY, 0) == (0, 0)
    assert ssd_interval_1d_example_family(EX41_GRADIENT_FAMILY, 2) == (-2, 0)
    lo, hi = ssd_interval_1d_example_family(EX41_GRADIENT_FAMILY, Fraction(1, 3))
    assert lo == Fraction(-1, 3) and hi == 0
    with pytest.raises(UnsupportedFamilyError):
        ssd_interval_1d_example_family(PiecewiseGradientDescriptor(left_slope=Fraction(-2)), 1)
    with pytest.raises(UnsupportedFamilyError):
        ssd_interval_1d_example_family(EX41_GRADIENT_FAMILY, -1)


def test_oracle_agrees_with_closed_form_on_grid():
    obj = ex41_objective()
    for v in (0, 1, 2):
        lo, hi = ssd_interval_1d_example_family(EX41_GRADIENT_FAMILY, v)
        for z in (-2.0, -1.5, -1.0, -0.5, 0.0, 0.5):
            member = ssd_membership(SSDQuery(obj, 0.0, float(v), z)).member
            expected = lo <= Fraction(z) <= hi
            assert member == expected, (v, z)


def test_scaling_invariance():
    obj = ex41_objective()
    for v in (0, 1, 2):
        for z in (-2.0, -1.5, -1.0, -0.5, 0.0, 0.5):
            base = ssd_membership(SSDQuery(obj, 0.0, float(v), z)).member
            scaled = ssd_membership(SSDQuery(obj, 0.0, 2.0 * v, 2.0 * z)).member
            assert base == scaled


def test_hessian_closed_form():
    diag = QuadraticObjective(matrix([[2, 0], [0, 3]]), vector(0, 0)).as_smooth()
    assert np.allclose(ssd_hessian_closed_form(diag, (0, 0), (1, 1)), [2.0, 3.0])
    rank_one = SmoothObjective(
        2,
        value=lambda x: 0.5 * (x[0] + x[1]) ** 2,
        gradient=lambda x: np.array([x[0] + x[1], x[0] + x[1]]),
        hessian=lambda x: np.ones((2, 2)),
    )
    assert np.allclose(ssd_hessian_closed_form(rank_one, (0, 0), (1, 0)), [1.0, 1.0])
    ex32 = fixture("ex32").objective
    assert np.allclose(
        ssd_hessian_closed_form(ex32, (-1.0, 0.0), (0.0, 1.0)), [0.0, -2.0]
    )
    with pytest.raises(ValueError):
        ssd_hessian_closed_form(ex41_objective(), (0.0,), (1.0,))


def test_calmness_estimates():
    est = estimate_calmness(ex41_objective(), (0.0,), 0.5, samples=256)
    assert est.modulus <= 1 + 1e-6
    assert est.modulus > 0.9  # the left branch has slope exactly 1
    half_sq = SmoothObjective(
        1, value=lambda x: 0.5 * x[0] ** 2, gradient=lambda x: np.array([x[0]])
    )
    assert abs(estimate_calmness(half_sq, (0.0,), 1.0, samples=256).modulus - 1.0) < 1e-6
    cubic = SmoothObjective(
        1, value=lambda x: x[0] ** 3 / 3, gradient=lambda x: np.array([x[0] ** 2])
    )
    est = estimate_calmness(cubic, (0.0,), 0.1, samples=256)
    assert est.modulus <= 0.1 + 1e-9
    assert est.modulus > 0.09


def test_calmness_monotone_in_samples():
    obj = ex41_objective()
    values = [
        estimate_calmness(obj, (0.0,), 0.5, samples=n).modulus
        for n in (8, 32, 128, 512)
    ]
    assert all(a <= b + 1e-15 for a, b in zip(values, values[1:]))


def test_theorem41_counterexample_fixture():
    fx = fixture("ex41")
    report = theorem41_check(fx.objective, fx.polyhedron, (0.0,), (1.0,), [(-1.0,)])
    assert report.status == "HypothesisViolated"
    assert report.direction.in_tangent_cone
    assert not report.direction.negation_in_tangent_cone
    assert report.direction.gradient_orthogonal
    assert report.pairings[0].pairing == -1.0
    assert not report.pairings[0].holds
    # gradient condition still evaluated and satisfied (gradient is zero)
    assert report.gradient_condition.verdict is Verdict.HOLDS


def test_theorem41_hypothesis_satisfied():
    half_sq = SmoothObjective(
        1,
        value=lambda x: 0.5 * x[0] ** 2,
        gradient=lambda x: np.array([x[0]]),
        hessian=lambda x: np.array([[1.0]]),
    )
    report = unconstrained_check(half_sq, (0.0,), (1.0,), [(1.0,)])
    assert report.status == "Holds"
    assert report.direction.is_bidirectional

    plane = SmoothObjective(
        2,
        value=lambda x: 0.5 * x[0] ** 2,
        gradient=lambda x: np.array([x[0], 0.0]),
        hessian=lambda x: np.array([[1.0, 0.0], [0.0, 0.0]]),
    )
    report = linear_equality_check(
        plane, matrix([[0, 1]]), vector(0), (0.0, 0.0), (1.0, 0.0), [(1.0, 0.0)]
    )
    assert report.status == "Holds"
    assert report.gradient_condition.verdict is Verdict.HOLDS
    assert report.pairings[0].holds


def test_theorem41_fails_on_bad_pairing():
    half_sq = SmoothObjective(
        1,
        value=lambda x: 0.5 * x[0] ** 2,
        gradient=lambda x: np.array([x[0]]),
        hessian=lambda x: np.array([[1.0]]),
    )
    report = unconstrained_check(half_sq, (0.0,), (1.0,), [(-1.0,)])
    assert report.status == "Fails"
