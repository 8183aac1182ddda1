"""Exact dense linear algebra over arbitrary-precision rationals.

Every polyhedral computation in this package runs on `fractions.Fraction`
scalars, so memberships, active sets and cone equalities are decided without
tolerances.  The containers here are deliberately dense and small: problem
sizes are desk scale (dimension <= 10, a few dozen rows), and clarity beats
scalability.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .errors import DimensionMismatchError

# Scalars are plain stdlib Fractions: always in lowest terms, positive
# denominator, exact arithmetic.
Rational = Fraction

_RATIONAL_RE = re.compile(r"^[+-]?\d+(/\d+)?$")


def rational(value: int | str | Fraction) -> Fraction:
    """Coerce an int, Fraction, or a string like ``"-3/4"`` to an exact Fraction.

    Floats are rejected on purpose: exact-regime data must never pass through
    binary64.  Convert floats explicitly with ``Fraction(x)`` where that is
    actually intended.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ValueError(f"invalid rational: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if not _RATIONAL_RE.match(text):
            raise ValueError(f"invalid rational: {value!r}")
        if "/" in text:
            num, den = text.split("/")
            if int(den) == 0:
                raise ValueError(f"invalid rational (zero denominator): {value!r}")
            return Fraction(int(num), int(den))
        return Fraction(int(text))
    raise ValueError(f"invalid rational: {value!r}")


def _coerce_entries(values: Iterable) -> tuple[Fraction, ...]:
    return tuple(rational(v) for v in values)


@dataclass(frozen=True)
class RationalVector:
    """Immutable dense vector of exact rationals."""

    entries: tuple[Fraction, ...]

    def __init__(self, entries: Iterable):
        object.__setattr__(self, "entries", _coerce_entries(entries))

    @classmethod
    def zero(cls, dim: int) -> "RationalVector":
        return cls([Fraction(0)] * dim)

    @classmethod
    def unit(cls, dim: int, index: int) -> "RationalVector":
        entries = [Fraction(0)] * dim
        entries[index] = Fraction(1)
        return cls(entries)

    @property
    def dim(self) -> int:
        return len(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[Fraction]:
        return iter(self.entries)

    def __getitem__(self, index: int) -> Fraction:
        return self.entries[index]

    def _check_dim(self, other: "RationalVector") -> None:
        if self.dim != other.dim:
            raise DimensionMismatchError(
                f"vector dimensions differ: {self.dim} vs {other.dim}"
            )

    def __add__(self, other: "RationalVector") -> "RationalVector":
        self._check_dim(other)
        return RationalVector(a + b for a, b in zip(self.entries, other.entries))

    def __sub__(self, other: "RationalVector") -> "RationalVector":
        self._check_dim(other)
        return RationalVector(a - b for a, b in zip(self.entries, other.entries))

    def __neg__(self) -> "RationalVector":
        return RationalVector(-a for a in self.entries)

    def scale(self, factor) -> "RationalVector":
        f = rational(factor)
        return RationalVector(f * a for a in self.entries)

    def dot(self, other: "RationalVector") -> Fraction:
        self._check_dim(other)
        return sum((a * b for a, b in zip(self.entries, other.entries)), Fraction(0))

    def is_zero(self) -> bool:
        return all(a == 0 for a in self.entries)

    def primitive(self) -> "RationalVector":
        """Scale to a coprime integer vector with the same direction.

        The zero vector is returned unchanged.  Used to canonicalize rays,
        where only the direction matters.
        """
        if self.is_zero():
            return self
        denom_lcm = 1
        for a in self.entries:
            denom_lcm = denom_lcm * a.denominator // math.gcd(denom_lcm, a.denominator)
        ints = [int(a * denom_lcm) for a in self.entries]
        g = 0
        for k in ints:
            g = math.gcd(g, abs(k))
        return RationalVector(Fraction(k, g) for k in ints)

    def as_floats(self) -> tuple[float, ...]:
        return tuple(float(a) for a in self.entries)

    def __repr__(self) -> str:
        return "(" + ", ".join(str(a) for a in self.entries) + ")"


@dataclass(frozen=True)
class RationalMatrix:
    """Immutable dense row-major matrix of exact rationals.

    ``ncols`` is stored explicitly so zero-row matrices keep their width,
    which equality blocks of polyhedra routinely need.
    """

    rows: tuple[RationalVector, ...]
    ncols: int

    def __init__(self, rows: Iterable, ncols: int | None = None):
        vecs = tuple(r if isinstance(r, RationalVector) else RationalVector(r) for r in rows)
        if ncols is None:
            if not vecs:
                raise ValueError("ncols is required for a matrix with no rows")
            ncols = vecs[0].dim
        for r in vecs:
            if r.dim != ncols:
                raise DimensionMismatchError(
                    f"row width {r.dim} differs from declared ncols {ncols}"
                )
        object.__setattr__(self, "rows", vecs)
        object.__setattr__(self, "ncols", ncols)

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls([RationalVector.unit(n, i) for i in range(n)], n)

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "RationalMatrix":
        return cls([RationalVector.zero(ncols) for _ in range(nrows)], ncols)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def row(self, i: int) -> RationalVector:
        return self.rows[i]

    def column(self, j: int) -> RationalVector:
        return RationalVector(r[j] for r in self.rows)

    def entry(self, i: int, j: int) -> Fraction:
        return self.rows[i][j]

    def matvec(self, v: RationalVector) -> RationalVector:
        if v.dim != self.ncols:
            raise DimensionMismatchError(
                f"matrix has {self.ncols} columns but vector has dimension {v.dim}"
            )
        return RationalVector(r.dot(v) for r in self.rows)

    def transpose(self) -> "RationalMatrix":
        return RationalMatrix(
            [RationalVector(r[j] for r in self.rows) for j in range(self.ncols)],
            self.nrows,
        )

    def stack(self, other: "RationalMatrix") -> "RationalMatrix":
        if other.ncols != self.ncols:
            raise DimensionMismatchError("cannot stack matrices of different widths")
        return RationalMatrix(self.rows + other.rows, self.ncols)

    def is_symmetric(self) -> bool:
        if self.nrows != self.ncols:
            return False
        return all(
            self.rows[i][j] == self.rows[j][i]
            for i in range(self.nrows)
            for j in range(i + 1, self.ncols)
        )

    def as_float_rows(self) -> list[list[float]]:
        return [[float(a) for a in r] for r in self.rows]

    def __iter__(self) -> Iterator[RationalVector]:
        return iter(self.rows)

    def __repr__(self) -> str:
        return "[" + "; ".join(repr(r) for r in self.rows) + "]"


def vector(*values) -> RationalVector:
    """Convenience builder: ``vector(1, "-2/3")``."""
    return RationalVector(values)


def matrix(rows: Sequence[Sequence], ncols: int | None = None) -> RationalMatrix:
    """Convenience builder for a matrix from nested sequences."""
    return RationalMatrix(rows, ncols)


def rref(mat: RationalMatrix) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form; returns (rows, pivot column indices).

    Deterministic: pivots are chosen as the first nonzero entry scanning rows
    top to bottom, columns left to right.
    """
    rows = [list(r.entries) for r in mat.rows]
    nrows, ncols = len(rows), mat.ncols
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot_row = next((i for i in range(r, nrows) if rows[i][c] != 0), None)
        if pivot_row is None:
            continue
        rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
        pv = rows[r][c]
        rows[r] = [a / pv for a in rows[r]]
        for i in range(nrows):
            if i != r and rows[i][c] != 0:
                factor = rows[i][c]
                rows[i] = [a - factor * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return rows, pivots


def row_space_basis(mat: RationalMatrix) -> tuple[RationalVector, ...]:
    """Canonical basis (RREF rows) of the row space."""
    rows, pivots = rref(mat)
    return tuple(RationalVector(rows[i]) for i in range(len(pivots)))


def kernel_basis(mat: RationalMatrix) -> tuple[RationalVector, ...]:
    """Canonical basis of the null space {v | mat v = 0}."""
    rows, pivots = rref(mat)
    ncols = mat.ncols
    pivot_set = set(pivots)
    free_cols = [c for c in range(ncols) if c not in pivot_set]
    basis = []
    for fc in free_cols:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -rows[i][fc]
        basis.append(RationalVector(v))
    return tuple(basis)


def solve_linear(mat: RationalMatrix, rhs: RationalVector) -> RationalVector | None:
    """One exact solution of ``mat x = rhs``, or None if inconsistent."""
    if rhs.dim != mat.nrows:
        raise DimensionMismatchError(
            f"matrix has {mat.nrows} rows but rhs has dimension {rhs.dim}"
        )
    augmented = RationalMatrix(
        [RationalVector(tuple(row.entries) + (rhs[i],)) for i, row in enumerate(mat.rows)]
        or [],
        mat.ncols + 1,
    )
    rows, pivots = rref(augmented)
    if mat.ncols in pivots:
        return None  # a row reduced to 0 = 1
    solution = [Fraction(0)] * mat.ncols
    for i, pc in enumerate(pivots):
        solution[pc] = rows[i][mat.ncols]
    return RationalVector(solution)
