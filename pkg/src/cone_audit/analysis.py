"""Command dispatch: run one analysis over a problem file and build the
machine-readable report document.

The report echoes the validated problem, the effective configuration, and
per-condition entries with witnesses and certificates, and is deterministic
byte for byte apart from its timestamp.  :func:`revalidate_report` re-ingests
a report, reproduces it from the echoed problem, and substitutes every
recorded witness back into its defining inequality.
"""

from __future__ import annotations

import datetime
from fractions import Fraction

import numpy as np

from ._version import __version__ as _version
from .errors import AnalysisError
from .geometry import PolyhedralCone
from .linalg import RationalVector
from .objectives import AffineRegion, QuadraticObjective, SmoothObjective
from .optimality import (
    ConditionId,
    ConditionReport,
    CopositivityResult,
    LagrangeCertificate,
    Verdict,
    assess_direction_polyhedral,
    check_c1,
    check_qp,
    classical_second_order_check,
    critical_cone,
    first_order_check,
    theorem33_check,
)
from .optimality import DEFAULT_SUBDIVISION_DEPTH
from .problem import ProblemFile, parse_problem_dict
from .ssd import (
    DEFAULT_MEMBERSHIP_TOL,
    EX41_GRADIENT_FAMILY,
    LogMesh,
    SSDQuery,
    estimate_calmness,
    ssd_hessian_closed_form,
    ssd_interval_1d_example_family,
    ssd_membership,
    theorem41_check,
)

COMMANDS = ("cones", "first-order", "second-order", "qp", "ssd", "theorem41")

CALMNESS_RADIUS = 0.5
CALMNESS_SAMPLES = 512

EXIT_ALL_HOLD = 0
EXIT_SOME_FAIL = 1
EXIT_INCONCLUSIVE = 2
EXIT_ERROR = 3


# ---------------------------------------------------------------------------
# JSON building blocks
# ---------------------------------------------------------------------------


def _rat(value: Fraction) -> str:
    return str(value)


def _value_json(value):
    if value is None:
        return None
    if isinstance(value, Fraction):
        return _rat(value)
    if isinstance(value, float):
        return value
    if isinstance(value, int):
        return value
    raise TypeError(f"cannot serialize {value!r}")


def _vector_json(vec):
    if vec is None:
        return None
    if isinstance(vec, RationalVector):
        return [_rat(a) for a in vec]
    return [float(a) for a in np.asarray(vec, dtype=float).reshape(-1)]


def _cone_json(cone: PolyhedralCone) -> dict:
    gens = cone.generators()
    return {
        "dimension": cone.dim,
        "equalities": [_vector_json(r) for r in cone.eq_rows.rows],
        "inequalities": [_vector_json(r) for r in cone.ineq_rows.rows],
        "row_origins": list(cone.ineq_origins),
        "rays": [_vector_json(r) for r in gens.rays],
        "lineality": [_vector_json(r) for r in gens.lineality],
    }


def _region_json(region: AffineRegion) -> dict:
    return {
        "kind": region.kind.value,
        "normal": _vector_json(region.normal),
        "offset": region.offset,
        "normalized_offset": region.normalized_offset(),
    }


def _certificate_json(cert) -> dict | None:
    if cert is None:
        return None
    if isinstance(cert, LagrangeCertificate):
        return {
            "type": "lagrange",
            "inequality_multipliers": [
                {"position": pos, "origin_row": origin, "value": _rat(lam)}
                for pos, origin, lam in cert.inequality_multipliers
            ],
            "equality_multipliers": _vector_json(cert.equality_multipliers),
        }
    if isinstance(cert, CopositivityResult):
        return {
            "type": "copositivity",
            "status": cert.status.value,
            "witness": _vector_json(cert.witness),
            "witness_value": _value_json(cert.witness_value),
            "depth_reached": cert.depth_reached,
            "cells_certified": cert.cells_certified,
            "method": cert.method,
        }
    raise TypeError(f"cannot serialize certificate {cert!r}")


def _condition_json(report: ConditionReport) -> dict:
    return {
        "condition": report.condition.value,
        "verdict": report.verdict.value,
        "witness": _vector_json(report.witness),
        "witness_direction": _vector_json(report.witness_direction),
        "margin": _value_json(report.margin) if report.margin != float("-inf") else "-inf",
        "boundary": report.boundary,
        "checked_directions": (
            None
            if report.checked_directions is None
            else [_vector_json(v) for v in report.checked_directions]
        ),
        "certificate": _certificate_json(report.certificate),
        "notes": report.notes,
    }


def _flags_json(direction) -> dict:
    return {
        "in_tangent_cone": direction.in_tangent_cone,
        "negation_in_tangent_cone": direction.negation_in_tangent_cone,
        "gradient_orthogonal": direction.gradient_orthogonal,
        "critical": direction.is_critical,
        "bidirectionally_critical": direction.is_bidirectional,
    }


def _exit_of(verdicts: list[Verdict]) -> int:
    if any(v is Verdict.FAILS for v in verdicts):
        return EXIT_SOME_FAIL
    if any(v is Verdict.INCONCLUSIVE for v in verdicts):
        return EXIT_INCONCLUSIVE
    return EXIT_ALL_HOLD


# ---------------------------------------------------------------------------
# Analysis context
# ---------------------------------------------------------------------------


class _Context:
    def __init__(self, problem: ProblemFile, tolerance: float | None,
                 mesh: LogMesh | None, depth: int | None):
        self.problem = problem
        self.regime = problem.query.regime
        self.exact = self.regime == "exact"
        self.tolerance = 0.0 if self.exact else (
            tolerance if tolerance is not None else problem.query.tolerance
        )
        self.ssd_tolerance = tolerance if tolerance is not None else DEFAULT_MEMBERSHIP_TOL
        self.mesh = mesh or LogMesh()
        self.depth = depth if depth is not None else DEFAULT_SUBDIVISION_DEPTH
        self.polyhedron = problem.constraint_polyhedron()
        self.smooth_constraint = (
            problem.fixture.constraint if problem.fixture is not None else None
        )

    # one direction list used by every command; fixture default as fallback
    def directions(self) -> list[tuple]:
        if self.problem.query.directions:
            return list(self.problem.query.directions)
        if self.problem.fixture is not None:
            default = self.problem.fixture.default_direction
            if self.exact:
                return [tuple(Fraction(a) for a in default)]
            return [default]
        return []

    def require_directions(self, command: str) -> list[tuple]:
        dirs = self.directions()
        if not dirs:
            raise AnalysisError(
                f"command {command!r} needs at least one direction",
                hint="add query.directions to the problem file",
            )
        return dirs

    def point_rational(self) -> RationalVector:
        return RationalVector([Fraction(a) for a in self.problem.query.point])

    def point_floats(self) -> tuple[float, ...]:
        return tuple(float(a) for a in self.problem.query.point)

    def smooth_objective(self) -> SmoothObjective:
        obj = self.problem.smooth_objective()
        if obj is None:
            raise AnalysisError(
                "this command needs an objective",
                hint="add an objective block (quadratic data or a fixture name)",
            )
        return obj

    def quadratic_objective(self) -> QuadraticObjective | None:
        return self.problem.quadratic


# ---------------------------------------------------------------------------
# Command handlers
# ---------------------------------------------------------------------------


def _run_cones(ctx: _Context) -> tuple[dict, int]:
    entries = []
    if ctx.polyhedron is not None:
        point = ctx.point_rational()
        tangent = ctx.polyhedron.tangent_cone(point)
        normal = ctx.polyhedron.normal_cone(point)
        for v in ctx.directions():
            direction = RationalVector([Fraction(a) for a in v])
            cone2 = ctx.polyhedron.second_order_tangent_set(point, direction)
            entries.append(
                {
                    "direction": _vector_json(direction),
                    "binding_rows": list(cone2.ineq_origins),
                    "cone": _cone_json(cone2),
                }
            )
        results = {
            "mode": "polyhedral",
            "active_rows": list(ctx.polyhedron.active_set(point).indices),
            "tangent_cone": _cone_json(tangent),
            "normal_cone": _cone_json(normal),
            "second_order_tangent_sets": entries,
        }
        return results, EXIT_ALL_HOLD
    constraint = ctx.smooth_constraint
    point = ctx.point_floats()
    region = constraint.tangent_cone(point, ctx.tolerance)
    for v in ctx.directions():
        entries.append(
            {
                "direction": _vector_json(v),
                "region": _region_json(
                    constraint.second_order_tangent_set(point, v, ctx.tolerance)
                ),
            }
        )
    results = {
        "mode": "smooth",
        "tangent_region": _region_json(region),
        "second_order_tangent_regions": entries,
    }
    return results, EXIT_ALL_HOLD


def _gradient_for(ctx: _Context):
    """Gradient at the query point: exact for quadratic data, float otherwise."""
    quad = ctx.quadratic_objective()
    if quad is not None and ctx.exact:
        return quad.gradient(ctx.point_rational())
    return ctx.smooth_objective().gradient_at(ctx.point_floats())


def _run_first_order(ctx: _Context) -> tuple[dict, int]:
    gradient = _gradient_for(ctx)
    if ctx.polyhedron is not None:
        tangent = ctx.polyhedron.tangent_cone(ctx.point_rational())
        report = first_order_check(gradient, tangent, ctx.tolerance)
        results = {
            "mode": "polyhedral",
            "gradient": _vector_json(gradient),
            "condition": _condition_json(report),
            "tangent_cone": _cone_json(tangent),
        }
    else:
        region = ctx.smooth_constraint.tangent_cone(ctx.point_floats(), ctx.tolerance)
        report = first_order_check(gradient, region, ctx.tolerance)
        results = {
            "mode": "smooth",
            "gradient": _vector_json(gradient),
            "condition": _condition_json(report),
            "tangent_region": _region_json(region),
        }
    return results, _exit_of([report.verdict])


def _run_second_order(ctx: _Context) -> tuple[dict, int]:
    directions = ctx.require_directions("second-order")
    verdicts: list[Verdict] = []
    entries = []
    quad = ctx.quadratic_objective()
    if ctx.polyhedron is not None and quad is not None and ctx.exact:
        point = ctx.point_rational()
        gradient = quad.gradient(point)
        for v in directions:
            direction = RationalVector([Fraction(a) for a in v])
            flags = assess_direction_polyhedral(
                ctx.polyhedron, point, direction, gradient.dot(direction), 0
            )
            second = ctx.polyhedron.second_order_tangent_set(point, direction)
            curvature = quad.quadratic_form(direction)
            c1 = check_c1(gradient, second, 0)
            c2 = ConditionReport(
                condition=ConditionId.C2,
                verdict=Verdict.HOLDS if curvature >= 0 else Verdict.FAILS,
                witness=None if curvature >= 0 else direction,
                margin=curvature,
            )
            classical = classical_second_order_check(gradient, curvature, second, 0)
            verdicts += [c1.verdict, c2.verdict, classical.verdict]
            entries.append(
                {
                    "direction": _vector_json(direction),
                    "critical_flags": _flags_json(flags),
                    "second_order_set": _cone_json(second),
                    "c1": _condition_json(c1),
                    "c2_at_direction": _condition_json(c2),
                    "classical": _condition_json(classical),
                }
            )
        return {"mode": "polyhedral", "directions": entries}, _exit_of(verdicts)

    objective = ctx.smooth_objective()
    if objective.hessian is None:
        raise AnalysisError(
            "second-order analysis needs a Hessian",
            hint="use a quadratic objective or a fixture with second derivatives",
        )
    constraint = ctx.polyhedron if ctx.polyhedron is not None else ctx.smooth_constraint
    point = ctx.point_floats()
    for v in directions:
        bundle = theorem33_check(objective, constraint, point, tuple(float(a) for a in v), ctx.tolerance)
        verdicts += [
            bundle.strengthened_gradient.verdict,
            bundle.curvature_at_direction.verdict,
            bundle.classical.verdict,
        ]
        entry = {
            "direction": _vector_json(v),
            "critical_flags": _flags_json(bundle.direction),
            "c1": _condition_json(bundle.strengthened_gradient),
            "c2_at_direction": _condition_json(bundle.curvature_at_direction),
            "classical": _condition_json(bundle.classical),
        }
        if ctx.polyhedron is None:
            entry["second_order_region"] = _region_json(
                ctx.smooth_constraint.second_order_tangent_set(point, v, ctx.tolerance)
            )
        else:
            entry["second_order_set"] = _cone_json(
                ctx.polyhedron.second_order_tangent_set(
                    ctx.point_rational(), RationalVector([Fraction(float(a)) for a in v])
                )
            )
        entries.append(entry)
    mode = "polyhedral" if ctx.polyhedron is not None else "smooth"
    return {"mode": mode, "directions": entries}, _exit_of(verdicts)


def _run_qp(ctx: _Context) -> tuple[dict, int]:
    quad = ctx.quadratic_objective()
    if quad is None:
        raise AnalysisError(
            "the qp command needs explicit quadratic objective data",
            hint="provide objective.type = 'quadratic' with rational entries",
        )
    if ctx.polyhedron is None:
        raise AnalysisError(
            "the qp command needs a polyhedral constraint set",
            hint="use constraint.type = 'polyhedron'",
        )
    if not ctx.exact:
        raise AnalysisError(
            "the qp command runs in exact arithmetic only",
            hint="set query.regime = 'exact' and use rational entries",
        )
    conditions = check_qp(quad, ctx.polyhedron, ctx.point_rational(), max_depth=ctx.depth)
    results = {
        "c0": _condition_json(conditions.stationarity),
        "c1_prime": _condition_json(conditions.strengthened_gradient),
        "c2_prime": _condition_json(conditions.curvature_on_critical_cone),
        "checked_directions": [_vector_json(v) for v in conditions.checked_directions],
        "tangent_cone": _cone_json(conditions.tangent_cone),
        "critical_cone": _cone_json(conditions.critical_cone),
    }
    verdicts = [
        conditions.stationarity.verdict,
        conditions.strengthened_gradient.verdict,
        conditions.curvature_on_critical_cone.verdict,
    ]
    return results, _exit_of(verdicts)


def _run_ssd(ctx: _Context) -> tuple[dict, int]:
    objective = ctx.smooth_objective()
    point = ctx.point_floats()
    results: dict = {}
    exit_code = EXIT_ALL_HOLD
    if objective.dimension == 1:
        directions = ctx.require_directions("ssd")
        candidates = ctx.problem.query.z_candidates
        if not candidates:
            raise AnalysisError(
                "the ssd command needs candidate z values",
                hint="add query.z_candidates to the problem file",
            )
        queries = []
        for v in directions:
            for z in candidates:
                verdict = ssd_membership(
                    SSDQuery(
                        objective,
                        float(point[0]),
                        float(v[0]),
                        float(z[0]),
                    ),
                    ctx.mesh,
                    ctx.ssd_tolerance,
                )
                queries.append(
                    {
                        "direction": float(v[0]),
                        "candidate": float(z[0]),
                        "verdict": verdict.verdict,
                        "worst_quotient": verdict.worst_quotient,
                        "attaining_sample": verdict.attaining_sample,
                    }
                )
                if not verdict.member:
                    exit_code = EXIT_SOME_FAIL
        results["memberships"] = queries
        if ctx.problem.fixture is not None and ctx.problem.fixture.name == "ex41":
            intervals = []
            for v in directions:
                lo, hi = ssd_interval_1d_example_family(
                    EX41_GRADIENT_FAMILY, Fraction(float(v[0]))
                )
                intervals.append(
                    {"direction": float(v[0]), "interval": [_rat(lo), _rat(hi)]}
                )
            results["closed_form_intervals"] = intervals
        calmness = estimate_calmness(objective, point, CALMNESS_RADIUS, CALMNESS_SAMPLES)
        results["calmness"] = {
            "modulus": calmness.modulus,
            "radius": calmness.radius,
            "sample_count": calmness.sample_count,
        }
        return results, exit_code

    if objective.hessian is None:
        raise AnalysisError(
            "ssd membership in dimension > 1 needs a Hessian (closed form)",
            hint="only 1-D objectives support the mesh oracle",
        )
    directions = ctx.require_directions("ssd")
    actions = []
    for v in directions:
        action = ssd_hessian_closed_form(objective, point, v)
        entry = {"direction": _vector_json(v), "action": _vector_json(action)}
        if ctx.problem.query.z_candidates:
            comparisons = []
            for z in ctx.problem.query.z_candidates:
                z_arr = np.asarray([float(a) for a in z])
                member = bool(
                    np.max(np.abs(z_arr - action)) <= max(ctx.tolerance, 1e-9)
                )
                comparisons.append(
                    {"candidate": _vector_json(z), "member": member}
                )
                if not member:
                    exit_code = EXIT_SOME_FAIL
            entry["candidates"] = comparisons
        actions.append(entry)
    results["hessian_actions"] = actions
    return results, exit_code


def _run_theorem41(ctx: _Context) -> tuple[dict, int]:
    if ctx.polyhedron is None:
        raise AnalysisError(
            "this command needs a polyhedral constraint set",
            hint="use constraint.type = 'polyhedron' or the ex41 fixture",
        )
    objective = ctx.smooth_objective()
    directions = ctx.require_directions("theorem41")
    point = ctx.point_floats()
    tolerance = ctx.tolerance if ctx.tolerance else 1e-9
    entries = []
    exit_code = EXIT_ALL_HOLD
    for v in directions:
        report = theorem41_check(
            objective,
            ctx.polyhedron,
            point,
            tuple(float(a) for a in v),
            [tuple(float(a) for a in z) for z in ctx.problem.query.z_candidates],
            tolerance,
        )
        entries.append(
            {
                "direction": _vector_json(v),
                "flags": _flags_json(report.direction),
                "status": report.status,
                "gradient_condition": (
                    None
                    if report.gradient_condition is None
                    else _condition_json(report.gradient_condition)
                ),
                "pairings": [
                    {
                        "candidate": list(e.candidate),
                        "pairing": e.pairing,
                        "holds": e.holds,
                    }
                    for e in report.pairings
                ],
            }
        )
        if report.status != "Holds":
            exit_code = EXIT_SOME_FAIL
    return {"directions": entries}, exit_code


_HANDLERS = {
    "cones": _run_cones,
    "first-order": _run_first_order,
    "second-order": _run_second_order,
    "qp": _run_qp,
    "ssd": _run_ssd,
    "theorem41": _run_theorem41,
}


def run_analysis(
    problem: ProblemFile,
    command: str,
    *,
    tolerance: float | None = None,
    mesh: LogMesh | None = None,
    depth: int | None = None,
) -> dict:
    """Run one command over a validated problem and return the report document."""
    if command not in _HANDLERS:
        raise AnalysisError(
            f"unknown command {command!r}", hint=f"one of: {', '.join(COMMANDS)}"
        )
    ctx = _Context(problem, tolerance, mesh, depth)
    results, exit_code = _HANDLERS[command](ctx)
    return {
        "tool": {"name": "cone-audit", "version": _version},
        "command": command,
        "configuration": {
            "regime": ctx.regime,
            "tolerance": ctx.tolerance,
            "ssd_tolerance": ctx.ssd_tolerance,
            "tolerance_override": tolerance,
            "mesh": f"{ctx.mesh.exponent_start}:{ctx.mesh.exponent_stop}:{ctx.mesh.exponent_step}",
            "depth": ctx.depth,
        },
        "problem": problem.source,
        "results": results,
        "exit_code": exit_code,
        "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(),
    }


# ---------------------------------------------------------------------------
# Report revalidation (the `verify` subcommand)
# ---------------------------------------------------------------------------


def _rational_vec(values) -> RationalVector:
    return RationalVector([Fraction(a) if isinstance(a, str) else Fraction(float(a)) for a in values])


class _Revalidator:
    def __init__(self, report: dict):
        self.report = report
        self.checks: list[dict] = []
        self.problem = parse_problem_dict(report["problem"])
        config = report.get("configuration", {})
        self.tolerance = float(config.get("tolerance", 1e-9))
        self.tolerance_override = config.get("tolerance_override")
        self.mesh = LogMesh.parse(config.get("mesh", "1.0:8.0:0.5"))
        self.depth = int(config.get("depth", 12))
        self.exact = self.problem.query.regime == "exact"

    def add(self, label: str, ok: bool, detail: str = "") -> None:
        self.checks.append({"check": label, "ok": bool(ok), "detail": detail})

    def run(self) -> list[dict]:
        command = self.report.get("command")
        rerun = run_analysis(
            self.problem,
            command,
            tolerance=self.tolerance_override,
            mesh=self.mesh,
            depth=self.depth,
        )
        old = {k: v for k, v in self.report.items() if k != "timestamp"}
        new = {k: v for k, v in rerun.items() if k != "timestamp"}
        self.add(
            "deterministic reproduction",
            old == new,
            "re-running the echoed problem reproduces the report" if old == new
            else "re-run produced a different report",
        )
        results = self.report.get("results", {})
        handler = getattr(self, "_verify_" + command.replace("-", "_"), None)
        if handler is not None:
            handler(results)
        return self.checks

    # -- helpers ---------------------------------------------------------

    def _tangent_cone(self):
        poly = self.problem.constraint_polyhedron()
        return poly.tangent_cone(self._point())

    def _point(self) -> RationalVector:
        return RationalVector([Fraction(a) if isinstance(a, str) else Fraction(float(a))
                               for a in self.problem.query.point])

    def _gradient_exact(self) -> RationalVector:
        if self.problem.quadratic is not None and self.exact:
            return self.problem.quadratic.gradient(self._point())
        grad = self.problem.smooth_objective().gradient_at(
            [float(a) for a in self.problem.query.point]
        )
        return RationalVector([Fraction(float(a)) for a in grad])

    def _check_linear_condition(self, label: str, entry: dict, cone) -> None:
        """Substitute a Fails witness / verify a Holds Lagrange certificate."""
        if entry is None:
            return
        verdict = entry.get("verdict")
        if verdict == "fails" and entry.get("witness") is not None:
            witness = _rational_vec(entry["witness"])
            grad = self._gradient_exact()
            if isinstance(cone, PolyhedralCone):
                inside = cone.contains(witness)
            elif entry.get("margin") == "-inf":
                # the witness is a recession direction of the region, not a point
                along = float(np.asarray(cone.normal) @ np.asarray(witness.as_floats()))
                scale = max(1.0, float(np.linalg.norm(cone.normal)))
                inside = (
                    abs(along) <= self.tolerance * scale
                    if cone.kind.value == "hyperplane"
                    else along <= self.tolerance * scale
                )
            else:
                inside = cone.contains([float(a) for a in witness.as_floats()], self.tolerance)
            pairing = grad.dot(witness)
            sup = max(abs(a) for a in witness.entries)
            violated = pairing / sup < (0 if self.exact else -self.tolerance)
            self.add(
                label + ": witness violates the inequality",
                inside and violated,
                f"<grad, w> = {float(pairing):.6g}",
            )
        if verdict == "holds" and entry.get("certificate") and entry["certificate"].get("type") == "lagrange":
            cert = entry["certificate"]
            grad = self._gradient_exact()
            total = RationalVector.zero(grad.dim)
            ok = True
            for item in cert["inequality_multipliers"]:
                lam = Fraction(item["value"])
                if lam < 0:
                    ok = False
                total = total + cone.ineq_rows.row(item["position"]).scale(lam)
            for j, mu in enumerate(cert["equality_multipliers"]):
                total = total + cone.eq_rows.row(j).scale(Fraction(mu))
            self.add(
                label + ": Lagrange certificate identity",
                ok and total == -grad,
                "-grad = sum(lambda_i row_i) + A^T mu re-verified exactly",
            )

    # -- per-command verifiers --------------------------------------------

    def _verify_cones(self, results: dict) -> None:
        for name in ("tangent_cone", "normal_cone"):
            cone = results.get(name)
            if cone is None:
                continue
            self.add(
                f"{name}: generators satisfy the H-representation",
                _generators_match(cone),
            )
        for entry in results.get("second_order_tangent_sets", []):
            self.add(
                "second-order set: generators satisfy the H-representation",
                _generators_match(entry["cone"]),
            )

    def _verify_first_order(self, results: dict) -> None:
        if results.get("mode") != "polyhedral":
            return
        self._check_linear_condition("first-order", results.get("condition"), self._tangent_cone())

    def _verify_second_order(self, results: dict) -> None:
        smooth = results.get("mode") == "smooth"
        poly = None if smooth else self.problem.constraint_polyhedron()
        constraint = self.problem.fixture.constraint if smooth else None
        for entry in results.get("directions", []):
            direction = _rational_vec(entry["direction"])
            if smooth:
                point = [float(a) for a in self.problem.query.point]
                second = constraint.second_order_tangent_set(
                    point, direction.as_floats(), self.tolerance
                )
            else:
                second = poly.second_order_tangent_set(self._point(), direction)
            self._check_linear_condition("c1", entry.get("c1"), second)
            self._check_classical(entry.get("classical"), second, direction)
            c2 = entry.get("c2_at_direction")
            if c2 and c2.get("verdict") == "fails":
                self.add(
                    "c2: negative curvature reproduces",
                    self._curvature(direction) < 0,
                    f"<Mv, v> = {float(self._curvature(direction)):.6g}",
                )

    def _curvature(self, direction: RationalVector) -> Fraction:
        quad = self.problem.quadratic
        if quad is not None:
            return quad.quadratic_form(direction)
        hess = self.problem.smooth_objective().hessian_at(
            [float(a) for a in self.problem.query.point]
        )
        vec = np.asarray(direction.as_floats())
        return Fraction(float(vec @ hess @ vec))

    def _check_classical(self, entry, second, direction: RationalVector) -> None:
        """Substitute a failing classical-condition witness.

        A finite-margin failure provides the minimizing point, so the full
        inequality (pairing plus curvature) must come out negative there; an
        unbounded failure provides a recession direction, which must stay
        inside the (translated) set and pair negatively with the gradient.
        """
        if not entry or entry.get("verdict") != "fails" or entry.get("witness") is None:
            return
        curvature = self._curvature(direction)
        unbounded = entry.get("margin") == "-inf"
        if isinstance(second, PolyhedralCone):
            witness = _rational_vec(entry["witness"])
            pairing = self._gradient_exact().dot(witness)
            violation = pairing if unbounded else pairing + curvature
            ok = second.contains(witness) and violation < 0
            detail = f"violation = {float(violation):.6g}"
        else:
            witness = np.asarray([float(a) for a in entry["witness"]])
            grad = self.problem.smooth_objective().gradient_at(
                [float(a) for a in self.problem.query.point]
            )
            pairing = float(grad @ witness)
            if unbounded:
                # a recession direction of a half-space/hyperplane is one the
                # normal does not oppose
                along = float(np.asarray(second.normal) @ witness)
                scale = max(1.0, float(np.linalg.norm(second.normal)))
                recession = (
                    abs(along) <= self.tolerance * scale
                    if second.kind.value == "hyperplane"
                    else along <= self.tolerance * scale
                )
                ok = recession and pairing < 0
                detail = f"<grad, ray> = {pairing:.6g}"
            else:
                violation = pairing + float(curvature)
                ok = second.contains(witness, self.tolerance) and violation < 0
                detail = f"violation = {violation:.6g}"
        self.add("classical: witness reproduces the violation", ok, detail)

    def _verify_qp(self, results: dict) -> None:
        tangent = self._tangent_cone()
        self._check_linear_condition("c0", results.get("c0"), tangent)
        c1p = results.get("c1_prime")
        poly = self.problem.constraint_polyhedron()
        if c1p is not None and c1p.get("verdict") == "fails":
            direction = _rational_vec(c1p["witness_direction"])
            second = poly.second_order_tangent_set(self._point(), direction)
            self._check_linear_condition("c1'", c1p, second)
        elif c1p is not None and c1p.get("checked_directions"):
            direction = _rational_vec(c1p["checked_directions"][0])
            second = poly.second_order_tangent_set(self._point(), direction)
            self._check_linear_condition("c1'", c1p, second)
        c2p = results.get("c2_prime")
        if c2p and c2p.get("verdict") == "fails" and c2p.get("witness"):
            witness = _rational_vec(c2p["witness"])
            crit = critical_cone(self._gradient_exact(), tangent)
            value = self.problem.quadratic.quadratic_form(witness)
            self.add(
                "c2': witness is a critical direction with negative form",
                crit.contains(witness) and value < 0,
                f"<Mv, v> = {float(value):.6g}",
            )

    def _verify_theorem41(self, results: dict) -> None:
        for entry in results.get("directions", []):
            direction = np.asarray(entry["direction"], dtype=float)
            for pairing in entry.get("pairings", []):
                z = np.asarray(pairing["candidate"], dtype=float)
                value = float(z @ direction)
                consistent = abs(value - pairing["pairing"]) <= 1e-12 and (
                    (value >= -self.tolerance) == pairing["holds"]
                )
                self.add(
                    "pairing <z, v> reproduces",
                    consistent,
                    f"<z, v> = {value:.6g}",
                )

    def _verify_ssd(self, results: dict) -> None:
        objective = self.problem.smooth_objective()
        for entry in results.get("memberships", []):
            query = SSDQuery(
                objective,
                float(self.problem.query.point[0]),
                entry["direction"],
                entry["candidate"],
            )
            sample = entry["attaining_sample"]
            base = float(self.problem.query.point[0])
            grad_base = float(objective.gradient_at([base])[0])
            grad_x = float(objective.gradient_at([sample])[0])
            denominator = abs(sample - base) + abs(grad_x - grad_base)
            numerator = (
                query.candidate * (sample - base)
                - grad_x * query.direction
                + grad_base * query.direction
            )
            quotient = numerator / denominator
            self.add(
                "ssd: attaining sample reproduces the worst quotient",
                abs(quotient - entry["worst_quotient"]) <= 1e-12,
                f"quotient = {quotient:.6g}",
            )


def _generators_match(cone_json: dict) -> bool:
    eq = [_rational_vec(r) for r in cone_json["equalities"]]
    ineq = [_rational_vec(r) for r in cone_json["inequalities"]]
    vectors = [_rational_vec(r) for r in cone_json["rays"]]
    for lin in cone_json["lineality"]:
        v = _rational_vec(lin)
        vectors.extend([v, -v])
    for v in vectors:
        if any(row.dot(v) != 0 for row in eq):
            return False
        if any(row.dot(v) > 0 for row in ineq):
            return False
    return True


def revalidate_report(report: dict) -> tuple[bool, list[dict]]:
    """Re-ingest a report: reproduce it from the echoed problem and substitute
    every witness back into its defining inequality.

    Returns (all checks passed, the list of individual check results).
    """
    checks = _Revalidator(report).run()
    return all(c["ok"] for c in checks), checks
