"""Problem-file parsing: a strict, versioned JSON schema.

A problem file describes one analysis: a constraint set (an explicit
polyhedron with rational entries, or a named fixture), an optional
objective (explicit quadratic data, or a fixture), and a query block with
the candidate point, optional directions and candidate z vectors, the
arithmetic regime, and tolerances.

The schema is strict: unknown fields are rejected, rational entries are
strings like "2/3" (or integers), and floats are accepted only inside
query blocks of float-regime files.  Validation reports every error found,
not just the first.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import ProblemFormatError
from .geometry import Polyhedron
from .linalg import RationalMatrix, RationalVector, rational
from .objectives import (
    ExampleFixture,
    FIXTURE_NAMES,
    QuadraticObjective,
    SmoothObjective,
    fixture,
)

SCHEMA_VERSION = "1"

_TOP_KEYS = {"version", "description", "constraint", "objective", "query"}
_CONSTRAINT_KEYS = {"type", "dimension", "equalities", "inequalities", "name"}
_EQ_KEYS = {"matrix", "rhs"}
_INEQ_KEYS = {"rows", "bounds"}
_OBJECTIVE_KEYS = {"type", "matrix", "linear", "constant", "name"}
_QUERY_KEYS = {"point", "directions", "z_candidates", "regime", "tolerance"}


@dataclass(frozen=True)
class Query:
    point: tuple | None
    directions: tuple[tuple, ...]
    z_candidates: tuple[tuple, ...]
    regime: str
    tolerance: float

    def point_floats(self) -> tuple[float, ...]:
        return tuple(float(a) for a in self.point)

    def point_rational(self) -> RationalVector:
        return RationalVector([Fraction(a) for a in self.point])


@dataclass(frozen=True)
class ProblemFile:
    """A validated problem description, ready to analyze."""

    version: str
    description: str
    constraint_kind: str  # "polyhedron" or "fixture"
    polyhedron: Polyhedron | None
    fixture: ExampleFixture | None
    objective_kind: str | None  # "quadratic", "fixture", or None
    quadratic: QuadraticObjective | None
    query: Query
    source: dict = field(repr=False, default_factory=dict)

    @property
    def dimension(self) -> int:
        if self.polyhedron is not None:
            return self.polyhedron.dim
        return self.fixture.dimension

    def constraint_polyhedron(self) -> Polyhedron | None:
        """The exact polyhedron, from either representation (None for the
        smooth level-set fixtures)."""
        if self.polyhedron is not None:
            return self.polyhedron
        return self.fixture.polyhedron

    def smooth_objective(self) -> SmoothObjective | None:
        if self.quadratic is not None:
            return self.quadratic.as_smooth()
        if self.objective_kind == "fixture" or self.constraint_kind == "fixture":
            return self.fixture.objective
        return None


class _Validator:
    def __init__(self):
        self.errors: list[str] = []

    def error(self, path: str, message: str) -> None:
        self.errors.append(f"{path}: {message}")

    def require_keys(self, obj: dict, allowed: set[str], path: str) -> None:
        for key in obj:
            if key not in allowed:
                self.error(path, f"unknown field {key!r}")

    def rational_entry(self, value, path: str) -> Fraction | None:
        if isinstance(value, float):
            self.error(path, "floats are not allowed in exact rational data")
            return None
        try:
            return rational(value)
        except ValueError as exc:
            self.error(path, str(exc))
            return None

    def numeric_entry(self, value, path: str, regime: str):
        """A query-block number: rational in exact regime, float otherwise."""
        if regime == "exact":
            return self.rational_entry(value, path)
        if isinstance(value, bool):
            self.error(path, f"invalid number: {value!r}")
            return None
        if isinstance(value, (int, float)):
            # the stdlib JSON parser admits NaN/Infinity literals
            if not math.isfinite(value):
                self.error(path, "numbers must be finite")
                return None
            return float(value)
        if isinstance(value, str):
            try:
                return float(rational(value))
            except ValueError as exc:
                self.error(path, str(exc))
                return None
        self.error(path, f"invalid number: {value!r}")
        return None

    def rational_vector(self, values, path: str, expected_len: int | None = None):
        if not isinstance(values, list):
            self.error(path, "expected a list")
            return None
        if expected_len is not None and len(values) != expected_len:
            self.error(path, f"expected {expected_len} entries, got {len(values)}")
            return None
        entries = [self.rational_entry(v, f"{path}[{i}]") for i, v in enumerate(values)]
        if any(e is None for e in entries):
            return None
        return RationalVector(entries)

    def rational_matrix(self, values, path: str, width: int | None = None):
        if not isinstance(values, list):
            self.error(path, "expected a list of rows")
            return None
        rows = []
        for i, row in enumerate(values):
            vec = self.rational_vector(row, f"{path}[{i}]", width)
            if vec is None:
                return None
            rows.append(vec)
            if width is None:
                width = vec.dim
        if width is None:
            self.error(path, "cannot infer row width from an empty matrix")
            return None
        return RationalMatrix(rows, width)


def parse_problem(text: str) -> ProblemFile:
    """Parse and validate a problem file; raises :class:`ProblemFormatError`
    carrying every schema error found."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProblemFormatError([f"not valid JSON: {exc}"]) from None
    return parse_problem_dict(data)


def parse_problem_dict(data) -> ProblemFile:
    v = _Validator()
    if not isinstance(data, dict):
        raise ProblemFormatError(["top level must be a JSON object"])
    v.require_keys(data, _TOP_KEYS, "$")

    version = data.get("version")
    if version != SCHEMA_VERSION:
        v.error("$.version", f"expected {SCHEMA_VERSION!r}, got {version!r}")
    description = data.get("description", "")
    if not isinstance(description, str):
        v.error("$.description", "expected a string")
        description = ""

    # ---- query block (parsed first: the regime gates number parsing) ----
    query_data = data.get("query")
    regime = "exact"
    tolerance = 1e-9
    point = None
    directions: list[tuple] = []
    z_candidates: list[tuple] = []
    if not isinstance(query_data, dict):
        v.error("$.query", "required object is missing")
    else:
        v.require_keys(query_data, _QUERY_KEYS, "$.query")
        regime = query_data.get("regime")
        if regime not in ("exact", "float"):
            v.error("$.query.regime", f"expected 'exact' or 'float', got {regime!r}")
            regime = "exact"
        raw_tol = query_data.get("tolerance", 1e-9)
        if not isinstance(raw_tol, (int, float)) or isinstance(raw_tol, bool) or raw_tol <= 0:
            v.error("$.query.tolerance", "expected a positive number")
        else:
            tolerance = float(raw_tol)
        if "point" in query_data:
            point = _numeric_tuple(v, query_data["point"], "$.query.point", regime)
        for i, direction in enumerate(query_data.get("directions", []) or []):
            parsed = _numeric_tuple(v, direction, f"$.query.directions[{i}]", regime)
            if parsed is not None:
                directions.append(parsed)
        for i, z in enumerate(query_data.get("z_candidates", []) or []):
            if isinstance(z, (int, float, str)) and not isinstance(z, bool):
                z = [z]
            parsed = _numeric_tuple(v, z, f"$.query.z_candidates[{i}]", regime)
            if parsed is not None:
                z_candidates.append(parsed)

    # ---- constraint block ----
    constraint = data.get("constraint")
    constraint_kind = None
    polyhedron = None
    fixture_obj = None
    if not isinstance(constraint, dict):
        v.error("$.constraint", "required object is missing")
    else:
        v.require_keys(constraint, _CONSTRAINT_KEYS, "$.constraint")
        constraint_kind = constraint.get("type")
        if constraint_kind == "polyhedron":
            polyhedron = _parse_polyhedron(v, constraint)
        elif constraint_kind == "fixture":
            fixture_obj = _parse_fixture(v, constraint.get("name"), "$.constraint.name")
            for key in ("dimension", "equalities", "inequalities"):
                if key in constraint:
                    v.error(f"$.constraint.{key}", "not allowed for a fixture constraint")
        else:
            v.error("$.constraint.type", f"expected 'polyhedron' or 'fixture', got {constraint_kind!r}")

    # ---- objective block ----
    objective = data.get("objective")
    objective_kind = None
    quadratic = None
    if objective is not None:
        if not isinstance(objective, dict):
            v.error("$.objective", "expected an object")
        else:
            v.require_keys(objective, _OBJECTIVE_KEYS, "$.objective")
            objective_kind = objective.get("type")
            if objective_kind == "quadratic":
                quadratic = _parse_quadratic(v, objective)
            elif objective_kind == "fixture":
                fx = _parse_fixture(v, objective.get("name"), "$.objective.name")
                if fx is not None:
                    if fixture_obj is not None and fx.name != fixture_obj.name:
                        v.error("$.objective.name", "objective fixture differs from constraint fixture")
                    fixture_obj = fixture_obj or fx
            else:
                v.error("$.objective.type", f"expected 'quadratic' or 'fixture', got {objective_kind!r}")

    # ---- cross-field consistency ----
    dimension = None
    if polyhedron is not None:
        dimension = polyhedron.dim
        if fixture_obj is not None and fixture_obj.dimension != dimension:
            v.error(
                "$.objective.name",
                f"fixture dimension {fixture_obj.dimension} does not match "
                f"constraint dimension {dimension}",
            )
    elif fixture_obj is not None:
        dimension = fixture_obj.dimension
    if quadratic is not None and dimension is not None and quadratic.dim != dimension:
        v.error("$.objective.matrix", f"objective dimension {quadratic.dim} does not match constraint dimension {dimension}")
    if point is not None and dimension is not None and len(point) != dimension:
        v.error("$.query.point", f"point has {len(point)} entries, expected {dimension}")
    if dimension is not None:
        for i, d in enumerate(directions):
            if len(d) != dimension:
                v.error(f"$.query.directions[{i}]", f"direction has {len(d)} entries, expected {dimension}")
    if point is None and fixture_obj is not None:
        point = tuple(
            fixture_obj.candidate_point
            if regime == "float"
            else (Fraction(a) for a in fixture_obj.candidate_point)
        )
    if point is None:
        v.error("$.query.point", "required (no fixture default available)")

    if v.errors:
        raise ProblemFormatError(v.errors)

    return ProblemFile(
        version=version,
        description=description,
        constraint_kind=constraint_kind,
        polyhedron=polyhedron,
        fixture=fixture_obj,
        objective_kind=objective_kind,
        quadratic=quadratic,
        query=Query(
            point=point,
            directions=tuple(directions),
            z_candidates=tuple(z_candidates),
            regime=regime,
            tolerance=tolerance,
        ),
        source=data,
    )


def _numeric_tuple(v: _Validator, values, path: str, regime: str):
    if not isinstance(values, list):
        v.error(path, "expected a list of numbers")
        return None
    parsed = [v.numeric_entry(a, f"{path}[{i}]", regime) for i, a in enumerate(values)]
    if any(p is None for p in parsed):
        return None
    return tuple(parsed)


def _parse_polyhedron(v: _Validator, block: dict) -> Polyhedron | None:
    dimension = block.get("dimension")
    if not isinstance(dimension, int) or isinstance(dimension, bool) or dimension < 1:
        v.error("$.constraint.dimension", "expected a positive integer")
        return None
    eq_matrix = RationalMatrix([], dimension)
    eq_rhs = RationalVector([])
    if "equalities" in block:
        eq = block["equalities"]
        if not isinstance(eq, dict):
            v.error("$.constraint.equalities", "expected an object")
            return None
        v.require_keys(eq, _EQ_KEYS, "$.constraint.equalities")
        eq_matrix = v.rational_matrix(eq.get("matrix", []), "$.constraint.equalities.matrix", dimension)
        eq_rhs = v.rational_vector(eq.get("rhs", []), "$.constraint.equalities.rhs")
        if eq_matrix is None or eq_rhs is None:
            return None
        if eq_matrix.nrows != eq_rhs.dim:
            v.error("$.constraint.equalities", f"{eq_matrix.nrows} rows but {eq_rhs.dim} right-hand sides")
            return None
    ineq_matrix = RationalMatrix([], dimension)
    ineq_rhs = RationalVector([])
    if "inequalities" in block:
        ineq = block["inequalities"]
        if not isinstance(ineq, dict):
            v.error("$.constraint.inequalities", "expected an object")
            return None
        v.require_keys(ineq, _INEQ_KEYS, "$.constraint.inequalities")
        ineq_matrix = v.rational_matrix(ineq.get("rows", []), "$.constraint.inequalities.rows", dimension)
        ineq_rhs = v.rational_vector(ineq.get("bounds", []), "$.constraint.inequalities.bounds")
        if ineq_matrix is None or ineq_rhs is None:
            return None
        if ineq_matrix.nrows != ineq_rhs.dim:
            v.error("$.constraint.inequalities", f"{ineq_matrix.nrows} rows but {ineq_rhs.dim} bounds")
            return None
    return Polyhedron(dimension, eq_matrix, eq_rhs, ineq_matrix, ineq_rhs)


def _parse_fixture(v: _Validator, name, path: str) -> ExampleFixture | None:
    if not isinstance(name, str) or name not in FIXTURE_NAMES:
        v.error(path, f"unknown fixture name {name!r}; available: {', '.join(FIXTURE_NAMES)}")
        return None
    return fixture(name)


def _parse_quadratic(v: _Validator, block: dict) -> QuadraticObjective | None:
    mat = v.rational_matrix(block.get("matrix"), "$.objective.matrix")
    if mat is None:
        return None
    linear = v.rational_vector(block.get("linear", [0] * mat.ncols), "$.objective.linear", mat.ncols)
    constant = v.rational_entry(block.get("constant", 0), "$.objective.constant")
    if linear is None or constant is None:
        return None
    if mat.nrows != mat.ncols:
        v.error("$.objective.matrix", "must be square")
        return None
    if not mat.is_symmetric():
        v.error("$.objective.matrix", "must be exactly symmetric")
        return None
    return QuadraticObjective(mat, linear, constant)
