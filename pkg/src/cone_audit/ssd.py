"""Numerical membership oracle for the second-order subdifferential of the
gradient map, calmness estimation, and the combined hypothesis checker.

For a C1 objective f, a candidate z belongs to the generalized second-order
action at a base point in direction v exactly when

    limsup_{x -> base}  [<z, x-base> - <grad f(x), v> + <grad f(base), v>]
                        / (||x-base|| + ||grad f(x) - grad f(base)||)  <=  0.

A true limsup cannot be computed from finitely many samples, so the oracle
approximates it by the maximum quotient over a logarithmic mesh of probe
points and judges the tail (deltas below a threshold) against a verdict
tolerance.  The mesh and tolerance are part of the contract, are
CLI-configurable, and are validated against the shipped closed-form family.
The correction term <grad f(base), v> vanishes at critical base points and
is always included so the oracle stays usable elsewhere.

Only dimension one is supported by the mesh oracle; for twice-differentiable
objectives of any dimension the action is the Hessian product, available in
closed form.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DimensionMismatchError, UnsupportedFamilyError
from .geometry import Polyhedron
from .linalg import RationalMatrix, RationalVector
from .objectives import SmoothObjective
from .optimality import (
    ConditionReport,
    CriticalDirection,
    Verdict,
    assess_direction_polyhedral,
    check_c1,
)

DEFAULT_MEMBERSHIP_TOL = 1e-6


@dataclass(frozen=True)
class LogMesh:
    """Probe offsets 10^-e for e = start, start+step, ..., stop.

    Offsets at or below ``tail_threshold`` form the tail over which the
    limsup surrogate (a maximum) is taken; coarser offsets only document
    the configured range.
    """

    exponent_start: float = 1.0
    exponent_stop: float = 8.0
    exponent_step: float = 0.5
    tail_threshold: float = 1e-4

    def __post_init__(self):
        if self.exponent_step <= 0 or self.exponent_stop < self.exponent_start:
            raise ValueError("mesh exponents must increase with a positive step")

    def deltas(self) -> list[float]:
        out = []
        e = self.exponent_start
        while e <= self.exponent_stop + 1e-12:
            out.append(10.0 ** (-e))
            e += self.exponent_step
        return out

    def tail_deltas(self) -> list[float]:
        return [d for d in self.deltas() if d <= self.tail_threshold * (1 + 1e-12)]

    @classmethod
    def parse(cls, spec: str) -> "LogMesh":
        """Parse "start:stop:step" as used by the CLI --mesh flag."""
        parts = spec.split(":")
        if len(parts) != 3:
            raise ValueError(f"mesh spec must be start:stop:step, got {spec!r}")
        start, stop, step = (float(p) for p in parts)
        return cls(exponent_start=start, exponent_stop=stop, exponent_step=step)


@dataclass(frozen=True)
class SSDQuery:
    """A (objective, base point, direction, candidate) membership query."""

    objective: SmoothObjective
    base_point: float
    direction: float
    candidate: float


@dataclass(frozen=True)
class MembershipVerdict:
    member: bool
    worst_quotient: float
    attaining_sample: float | None

    @property
    def verdict(self) -> str:
        return "Member" if self.member else "NotMember"


def _gradient_1d(objective: SmoothObjective, x: float) -> float:
    return float(objective.gradient_at(np.array([x]))[0])


def ssd_membership(
    query: SSDQuery,
    mesh: LogMesh | None = None,
    tolerance: float = DEFAULT_MEMBERSHIP_TOL,
) -> MembershipVerdict:
    """Mesh oracle for the membership quotient; Member iff the tail maximum
    stays at or below ``tolerance``.

    Probe points with an exactly zero denominator (the base point itself,
    after rounding) are skipped, as the quotient is undefined there.
    """
    if query.objective.dimension != 1:
        raise ValueError(
            "the mesh oracle supports dimension one only; use the Hessian "
            "closed form for higher dimensions"
        )
    mesh = mesh or LogMesh()
    base = float(query.base_point)
    grad_base = _gradient_1d(query.objective, base)
    worst = float("-inf")
    attaining = None
    for delta in mesh.tail_deltas():
        for x in (base + delta, base - delta):
            quotient = _membership_quotient(query, x, base, grad_base)
            if quotient is None:
                continue
            if quotient > worst:
                worst, attaining = quotient, x
    if attaining is None:
        raise ValueError("the mesh produced no usable probe points")
    return MembershipVerdict(
        member=worst <= tolerance,
        worst_quotient=worst,
        attaining_sample=attaining,
    )


def _membership_quotient(
    query: SSDQuery, x: float, base: float, grad_base: float
) -> float | None:
    grad_x = _gradient_1d(query.objective, x)
    denominator = abs(x - base) + abs(grad_x - grad_base)
    if denominator == 0.0:
        return None
    numerator = (
        query.candidate * (x - base)
        - grad_x * query.direction
        + grad_base * query.direction
    )
    return numerator / denominator


@dataclass(frozen=True)
class PiecewiseGradientDescriptor:
    """1-D gradient map: slope * x on the left of 0, x^power on the right."""

    left_slope: Fraction = Fraction(-1)
    right_power: int = 2


EX41_GRADIENT_FAMILY = PiecewiseGradientDescriptor()


def ssd_interval_1d_example_family(
    descriptor: PiecewiseGradientDescriptor, direction: Fraction | int
) -> tuple[Fraction, Fraction]:
    """Closed-form membership interval [-v, 0] for the shipped family.

    Only the shipped descriptor (slope -1 left of the origin, square right
    of it, base point 0) with direction v >= 0 is supported; no general
    closed form is attempted.
    """
    if descriptor != EX41_GRADIENT_FAMILY:
        raise UnsupportedFamilyError(
            "closed-form membership intervals are only available for the "
            "shipped piecewise gradient family"
        )
    v = Fraction(direction)
    if v < 0:
        raise UnsupportedFamilyError(
            "the closed form covers nonnegative directions only"
        )
    return (-v, Fraction(0))


def ssd_hessian_closed_form(objective: SmoothObjective, point, direction) -> np.ndarray:
    """For C2 objectives the action is a singleton: the Hessian product."""
    hessian = objective.hessian_at(point)
    vec = np.asarray(direction, dtype=float).reshape(-1)
    return hessian.T @ vec


@dataclass(frozen=True)
class CalmnessEstimate:
    """Max difference quotient of the gradient over a sampled ball.

    A lower estimate of the true local Lipschitz modulus of the gradient;
    ``modulus`` is nondecreasing in the sample count because the sample
    sequence is nested.
    """

    modulus: float
    radius: float
    sample_count: int


def _van_der_corput(index: int, base: int) -> float:
    value, denom = 0.0, 1.0
    while index:
        index, digit = divmod(index, base)
        denom *= base
        value += digit / denom
    return value


_HALTON_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29)


def estimate_calmness(
    objective: SmoothObjective,
    point,
    radius: float,
    samples: int = 512,
) -> CalmnessEstimate:
    """Estimate the local gradient Lipschitz modulus near ``point``.

    Uses a deterministic Halton sequence mapped into the ball of the given
    radius; candidates outside the ball or equal to the base point are
    skipped until ``samples`` quotients have been evaluated.
    """
    if radius <= 0:
        raise ValueError("radius must be positive")
    if samples < 1:
        raise ValueError("at least one sample is required")
    n = objective.dimension
    base_point = np.asarray(point, dtype=float).reshape(n)
    grad_base = objective.gradient_at(base_point)
    bases = _HALTON_BASES[:n]
    best = 0.0
    accepted = 0
    index = 1
    while accepted < samples:
        offset = np.array(
            [2.0 * _van_der_corput(index, b) - 1.0 for b in bases]
        )
        index += 1
        norm = float(np.linalg.norm(offset))
        if norm == 0.0 or norm > 1.0:
            continue
        probe = base_point + radius * offset
        distance = float(np.linalg.norm(probe - base_point))
        if distance == 0.0:
            continue
        accepted += 1
        quotient = float(
            np.linalg.norm(objective.gradient_at(probe) - grad_base)
        ) / distance
        best = max(best, quotient)
    return CalmnessEstimate(modulus=best, radius=radius, sample_count=accepted)


# ---------------------------------------------------------------------------
# Combined hypothesis + second-order membership condition (CLI: theorem41)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PairingEntry:
    """One candidate z with its pairing <z, v> and the sign verdict."""

    candidate: tuple[float, ...]
    pairing: float
    holds: bool


@dataclass(frozen=True)
class HypothesisReport:
    """Verdict of the bidirectional-critical-direction condition check.

    The hypothesis triple is: v tangent, -v tangent, gradient orthogonal to
    v.  When it fails the report still evaluates both component conditions,
    so near-misses show exactly which inequality breaks; the classification
    then distinguishes merely critical directions from bidirectionally
    critical ones.
    """

    direction: CriticalDirection
    hypothesis_holds: bool
    gradient_condition: ConditionReport | None
    pairings: tuple[PairingEntry, ...]

    @property
    def status(self) -> str:
        if not self.hypothesis_holds:
            return "HypothesisViolated"
        failed = any(not entry.holds for entry in self.pairings)
        if failed or (
            self.gradient_condition is not None
            and self.gradient_condition.verdict is Verdict.FAILS
        ):
            return "Fails"
        return "Holds"


def theorem41_check(
    objective: SmoothObjective,
    constraint_set: Polyhedron,
    point,
    direction,
    candidates,
    tolerance: float = 1e-9,
) -> HypothesisReport:
    """Check the hypothesis triple and both second-order inequalities.

    The gradient condition (<grad f, w> >= 0 on the second-order tangent
    set) is evaluated whenever v is tangent, even if -v is not, so a failed
    hypothesis still yields a fully populated report; the pairing condition
    <z, v> >= 0 is evaluated for every supplied candidate.
    """
    point_r = _as_rational(point, constraint_set.dim)
    direction_r = _as_rational(direction, constraint_set.dim)
    constraint_set.require_member(point_r)
    grad = objective.gradient_at(point)
    vec = np.asarray(direction, dtype=float).reshape(-1)
    pairing = float(grad @ vec)
    critical = assess_direction_polyhedral(
        constraint_set, point_r, direction_r, pairing, tolerance
    )
    gradient_condition = None
    if critical.in_tangent_cone:
        second_order = constraint_set.second_order_tangent_set(point_r, direction_r)
        gradient_condition = check_c1(grad, second_order, tolerance)
    entries = []
    for z in candidates:
        z_vec = np.asarray(z, dtype=float).reshape(-1)
        value = float(z_vec @ vec)
        entries.append(
            PairingEntry(
                candidate=tuple(float(a) for a in z_vec),
                pairing=value,
                holds=value >= -tolerance,
            )
        )
    return HypothesisReport(
        direction=critical,
        hypothesis_holds=critical.is_bidirectional,
        gradient_condition=gradient_condition,
        pairings=tuple(entries),
    )


def unconstrained_check(objective, point, direction, candidates, tolerance=1e-9):
    """Preset: the whole space as constraint set (stationarity plus
    positive-semidefiniteness of the second-order action)."""
    return theorem41_check(
        objective,
        Polyhedron.full_space(objective.dimension),
        point,
        direction,
        candidates,
        tolerance,
    )


def linear_equality_check(
    objective, matrix: RationalMatrix, offset: RationalVector,
    point, direction, candidates, tolerance=1e-9,
):
    """Preset: constraint set {x | matrix x + offset = 0}.

    The Lagrangian's gradient differs from the objective's by a constant
    functional, so its second-order action coincides with the objective's
    and the check delegates unchanged.
    """
    return theorem41_check(
        objective,
        Polyhedron.from_affine_equations(matrix, offset),
        point,
        direction,
        candidates,
        tolerance,
    )


def _as_rational(values, dim: int) -> RationalVector:
    vec = np.asarray(values, dtype=float).reshape(-1)
    if vec.shape != (dim,):
        raise DimensionMismatchError(
            f"expected a point of dimension {dim}, got shape {vec.shape}"
        )
    return RationalVector([Fraction(float(a)) for a in vec])
