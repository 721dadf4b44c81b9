# klyachko/services/linalg.py
"""
Exact rational linear algebra over Q on top of sympy matrices.
Subspaces are kept in reduced row-echelon form with unit pivots, so two equal
subspaces always carry identical basis matrices. Values cross the module
boundary as Fractions.
"""
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from sympy import Matrix, Rational

from ..errors import DimensionMismatchError

Vector = Tuple[Fraction, ...]


def as_rational(x) -> Rational:
    x = Fraction(x)
    return Rational(x.numerator, x.denominator)


def as_fraction(x) -> Fraction:
    r = Rational(x)
    return Fraction(int(r.p), int(r.q))


def to_matrix(rows: Sequence[Sequence], ncols: int) -> Matrix:
    return Matrix(len(rows), ncols, [as_rational(x) for row in rows for x in row])


def from_column(column: Matrix) -> Vector:
    return tuple(as_fraction(x) for x in column)


def to_vector(values: Iterable) -> Vector:
    return tuple(Fraction(v) for v in values)


def dot(a: Sequence, b: Sequence) -> Fraction:
    return sum((Fraction(x) * y for x, y in zip(a, b)), Fraction(0))


def is_zero(v: Sequence) -> bool:
    return not any(v)


def rref(rows: Iterable[Sequence], ncols: int) -> Tuple[List[List[Fraction]], List[int]]:
    """
    Reduced row-echelon form with pivots normalized to 1.

    Returns:
        (nonzero rows, pivot columns)
    """
    rows = list(rows)
    if not rows:
        return [], []
    reduced, pivots = to_matrix(rows, ncols).rref()
    return [[as_fraction(x) for x in reduced.row(i)] for i in range(len(pivots))], list(pivots)


def nullspace(rows: Sequence[Sequence], ncols: int) -> List[Vector]:
    """Basis of {x : row . x = 0 for every row}, one vector per free column"""
    if not rows:
        return [unit_vector(ncols, i) for i in range(ncols)]
    return [from_column(v) for v in to_matrix(rows, ncols).nullspace()]


def solve(rows: Sequence[Sequence], rhs: Sequence, ncols: int) -> Optional[Vector]:
    """
    Particular solution of rows . x = rhs with free variables set to 0.

    Returns:
        The solution, or None when the system is inconsistent
    """
    if not rows:
        return (Fraction(0),) * ncols
    target = Matrix([as_rational(b) for b in rhs])
    try:
        solution, params = to_matrix(rows, ncols).gauss_jordan_solve(target)
    except ValueError:
        return None
    return from_column(solution.xreplace({t: 0 for t in params}))


class EchelonBuilder:
    """
    Incremental echelon basis keyed by pivot. add() reports whether a vector
    was independent of everything added so far.
    """

    def __init__(self, ambient_dim: int):
        self.ambient_dim = ambient_dim
        self.rows: Dict[int, List[Fraction]] = {}

    def reduce(self, v: Sequence) -> List[Fraction]:
        w = [Fraction(x) for x in v]
        for p in sorted(self.rows):
            f = w[p]
            if f != 0:
                row = self.rows[p]
                w = [a - f * b if b else a for a, b in zip(w, row)]
        return w

    def add(self, v: Sequence) -> bool:
        w = self.reduce(v)
        lead = next((i for i, x in enumerate(w) if x != 0), None)
        if lead is None:
            return False
        c = w[lead]
        self.rows[lead] = [x / c for x in w]
        return True

    def contains(self, v: Sequence) -> bool:
        return is_zero(self.reduce(v))

    @property
    def rank(self) -> int:
        return len(self.rows)

    def to_subspace(self) -> "Subspace":
        return Subspace.span(self.rows.values(), self.ambient_dim)


@dataclass(frozen=True)
class Subspace:
    """A subspace of Q^n stored by its canonical echelon basis"""
    ambient_dim: int
    basis: Tuple[Vector, ...]

    @classmethod
    def span(cls, vectors: Iterable[Sequence], ambient_dim: int) -> "Subspace":
        rows = [v for v in vectors]
        for v in rows:
            if len(v) != ambient_dim:
                raise DimensionMismatchError(
                    f"vector of length {len(v)} in Q^{ambient_dim}",
                    expected=ambient_dim, got=len(v),
                )
        reduced, _ = rref(rows, ambient_dim)
        return cls(ambient_dim, tuple(tuple(r) for r in reduced))

    @classmethod
    def zero(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, ())

    @classmethod
    def full(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, tuple(unit_vector(ambient_dim, i) for i in range(ambient_dim)))

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def pivots(self) -> Tuple[int, ...]:
        return tuple(next(i for i, x in enumerate(row) if x != 0) for row in self.basis)

    def is_zero(self) -> bool:
        return not self.basis

    def is_full(self) -> bool:
        return self.dim == self.ambient_dim

    def _check(self, other: "Subspace") -> None:
        if self.ambient_dim != other.ambient_dim:
            raise DimensionMismatchError(
                f"ambient dimensions differ: {self.ambient_dim} vs {other.ambient_dim}",
                left=self.ambient_dim, right=other.ambient_dim,
            )

    def coordinates(self, v: Sequence) -> Optional[Vector]:
        """Coefficients of v in the echelon basis, or None if v is not in the span"""
        if len(v) != self.ambient_dim:
            raise DimensionMismatchError(
                f"vector of length {len(v)} in Q^{self.ambient_dim}",
                expected=self.ambient_dim, got=len(v),
            )
        coeffs = tuple(Fraction(v[p]) for p in self.pivots)
        rebuilt = [Fraction(0)] * self.ambient_dim
        for c, row in zip(coeffs, self.basis):
            if c:
                rebuilt = [a + c * b for a, b in zip(rebuilt, row)]
        if any(a != b for a, b in zip(rebuilt, v)):
            return None
        return coeffs

    def contains(self, v: Sequence) -> bool:
        return self.coordinates(v) is not None

    def contains_subspace(self, other: "Subspace") -> bool:
        self._check(other)
        return all(self.contains(b) for b in other.basis)

    def perp(self) -> "Subspace":
        """Orthogonal complement for the standard pairing"""
        return Subspace.span(nullspace(self.basis, self.ambient_dim), self.ambient_dim)

    def sum(self, other: "Subspace") -> "Subspace":
        self._check(other)
        return Subspace.span(self.basis + other.basis, self.ambient_dim)

    def intersect(self, other: "Subspace") -> "Subspace":
        self._check(other)
        if self.is_zero() or other.is_zero():
            return Subspace.zero(self.ambient_dim)
        if self.is_full():
            return other
        if other.is_full():
            return self
        return self.perp().sum(other.perp()).perp()

    __add__ = sum
    __and__ = intersect

    def embed(self, offset: int, ambient_dim: int) -> "Subspace":
        """Image under the block inclusion Q^n -> Q^ambient_dim starting at offset"""
        pad_left = (Fraction(0),) * offset
        pad_right = (Fraction(0),) * (ambient_dim - offset - self.ambient_dim)
        return Subspace(ambient_dim, tuple(pad_left + row + pad_right for row in self.basis))


def unit_vector(n: int, i: int) -> Vector:
    return tuple(Fraction(1) if k == i else Fraction(0) for k in range(n))


def subspace_intersect(a: Subspace, b: Subspace) -> Subspace:
    return a.intersect(b)


def subspace_sum(a: Subspace, b: Subspace) -> Subspace:
    return a.sum(b)


def intersect_all(spaces: Iterable[Subspace], ambient_dim: int) -> Subspace:
    result = Subspace.full(ambient_dim)
    for space in spaces:
        result = result.intersect(space)
        if result.is_zero():
            break
    return result
