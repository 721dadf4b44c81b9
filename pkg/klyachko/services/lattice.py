# klyachko/services/lattice.py
"""
Integer lattice helpers built on sympy's Hermite normal form: integral
solving, integer kernels and quotient forms.
"""
from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import List, Optional, Sequence, Tuple

from sympy import Matrix, eye, zeros
from sympy.matrices.normalforms import hermite_normal_form

from .linalg import Subspace, as_rational

IntVector = Tuple[int, ...]


def is_primitive(v: Sequence[int]) -> bool:
    return any(v) and reduce(gcd, (abs(int(x)) for x in v), 0) == 1


def clear_denominators(v: Sequence[Fraction]) -> IntVector:
    """Smallest positive integer multiple of v with integer entries, made primitive"""
    den = reduce(lcm, (Fraction(x).denominator for x in v), 1)
    ints = [int(Fraction(x) * den) for x in v]
    g = reduce(gcd, (abs(x) for x in ints), 0)
    if g > 1:
        ints = [x // g for x in ints]
    return tuple(ints)


def _int_matrix(rows: Sequence[Sequence[int]], ncols: int) -> Matrix:
    return Matrix(len(rows), ncols, [int(x) for row in rows for x in row])


def _independent_rows(rows: Sequence[Sequence[int]], ncols: int) -> List[int]:
    """Indices of a maximal independent subset of rows, earliest first"""
    if not rows:
        return []
    _, pivots = _int_matrix(rows, ncols).T.rref()
    return list(pivots)


def hermite_transform(matrix: Sequence[Sequence[int]], ncols: int) -> Tuple[Matrix, Matrix]:
    """
    Unimodular U with A' U = [0 | T], where A' are the independent rows of A
    and T is square, lower triangular and nonsingular.

    sympy reduces only the bottom n rows of a matrix, so A' is completed by
    unit vectors to a nonsingular n x n block and stacked under the identity.
    The normal form of that stack keeps all n columns and its top block is U.

    Returns:
        (U, A' U)
    """
    rows = [matrix[i] for i in _independent_rows(matrix, ncols)]
    if not rows:
        return eye(ncols), zeros(0, ncols)
    _, pivots = _int_matrix(rows, ncols).rref()
    completion = [[int(j == c) for j in range(ncols)] for c in range(ncols) if c not in pivots]
    stacked = eye(ncols).col_join(_int_matrix(completion + rows, ncols))
    H = hermite_normal_form(stacked)
    return H[:ncols, :], H[H.rows - len(rows):, :]


def _split_columns(image: Matrix) -> Tuple[List[int], List[int]]:
    live = [k for k in range(image.cols) if any(image[:, k])]
    dead = [k for k in range(image.cols) if k not in live]
    return live, dead


def integer_solve(matrix: Sequence[Sequence[int]], rhs: Sequence, ncols: int) -> Optional[IntVector]:
    """
    An integer solution x of matrix . x = rhs, or None if there is none.
    The kernel coordinates of the Hermite transform are set to zero, so the
    solution is deterministic.
    """
    keep = _independent_rows(matrix, ncols)
    U, image = hermite_transform(matrix, ncols)
    live, _ = _split_columns(image)
    if live:
        target = Matrix([as_rational(rhs[i]) for i in keep])
        y = image[:, live].LUsolve(target)
        if not all(v.is_integer for v in y):
            return None
        x = tuple(int(v) for v in U[:, live] * y)
    else:
        x = (0,) * ncols
    # dependent rows only constrain consistency
    for row, b in zip(matrix, rhs):
        if sum(int(a) * v for a, v in zip(row, x)) != Fraction(b):
            return None
    return x


def integer_kernel(matrix: Sequence[Sequence[int]], ncols: int) -> List[IntVector]:
    """Z-basis of {x in Z^n : matrix . x = 0}"""
    U, image = hermite_transform(matrix, ncols)
    _, dead = _split_columns(image)
    return [tuple(int(v) for v in U[:, k]) for k in dead]


def row_hermite(rows: Sequence[Sequence[int]], ncols: int) -> List[IntVector]:
    """
    Hermite basis of the lattice spanned by rows. The pivot coordinates of
    the row space are moved to the bottom of the transposed matrix so that
    every generator survives the reduction.
    """
    keep = [rows[i] for i in _independent_rows(rows, ncols)]
    if not keep:
        return []
    _, pivots = _int_matrix(keep, ncols).rref()
    order = [c for c in range(ncols) if c not in pivots] + list(pivots)
    H = hermite_normal_form(Matrix([[int(row[c]) for row in keep] for c in order]))
    position = {c: i for i, c in enumerate(order)}
    return [tuple(int(H[position[c], k]) for c in range(ncols)) for k in range(H.cols)]


def quotient_forms(space: Subspace) -> List[IntVector]:
    """
    Integer linear forms a_1..a_s (s = n - dim space) forming a Z-basis of
    the integer points of the orthogonal complement. u -> (a_i . u) identifies
    M / (saturation of space ∩ M) with Z^s.
    """
    n = space.ambient_dim
    if space.is_zero():
        return [tuple(1 if i == j else 0 for j in range(n)) for i in range(n)]
    generators = [clear_denominators(row) for row in space.basis]
    kernel = integer_kernel(generators, n)
    return row_hermite(kernel, n)
