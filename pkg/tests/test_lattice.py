# tests/test_lattice.py
import random
from fractions import Fraction

from klyachko.services.lattice import (
    clear_denominators,
    hermite_transform,
    integer_kernel,
    integer_solve,
    is_primitive,
    quotient_forms,
    row_hermite,
)
from klyachko.services.linalg import Subspace


def test_is_primitive():
    assert is_primitive((2, 3))
    assert not is_primitive((2, 4))
    assert not is_primitive((0, 0))


def test_clear_denominators_is_primitive_multiple():
    assert clear_denominators([Fraction(1, 2), Fraction(1, 3)]) == (3, 2)
    assert clear_denominators([Fraction(2), Fraction(4)]) == (1, 2)
    assert clear_denominators([Fraction(0), Fraction(1, 4)]) == (0, 1)


def test_hermite_transform_is_unimodular():
    matrix = [[2, 4, 6], [1, 3, 5]]
    U, image = hermite_transform(matrix, 3)
    assert U.det() in (1, -1)
    for i, row in enumerate(matrix):
        for k in range(3):
            assert image[i, k] == sum(row[t] * U[t, k] for t in range(3))
    # one kernel column, then a nonsingular block
    assert not any(image[:, 0])
    assert image[:, 1:].det() != 0


def test_hermite_transform_of_rank_deficient_rows():
    # a repeated row and a row lying in the span of e_1
    for matrix in ([[1, 2, 3], [2, 4, 6]], [[0, 1]], [[0, 0, 0]]):
        n = len(matrix[0])
        U, image = hermite_transform(matrix, n)
        assert U.shape == (n, n)
        assert U.det() in (1, -1)
    assert integer_kernel([[0, 1]], 2) in ([(1, 0)], [(-1, 0)])


def test_integer_solve_finds_integral_characters():
    # <chi, (1, 0)> = 1, <chi, (0, 1)> = -2
    assert integer_solve([[1, 0], [0, 1]], [1, -2], 2) == (1, -2)
    # <chi, (1, 1)> = 1, <chi, (1, -1)> = 0 needs chi = (1/2, 1/2)
    assert integer_solve([[1, 1], [1, -1]], [1, 0], 2) is None


def test_integer_solve_with_dependent_rows():
    # four rays of a non-simplicial cone in Z^3: (1,0,0), (0,1,0), (1,0,1), (0,1,1)
    rays = [[1, 0, 0], [0, 1, 0], [1, 0, 1], [0, 1, 1]]
    assert integer_solve(rays, [1, 2, 4, 5], 3) == (1, 2, 3)
    # consistent on three rays, not on the fourth
    assert integer_solve(rays, [1, 2, 4, 6], 3) is None
    assert integer_solve([[0, 0]], [0], 2) == (0, 0)
    assert integer_solve([[0, 0]], [1], 2) is None


def test_integer_kernel():
    kernel = integer_kernel([[1, 2, 3]], 3)
    assert len(kernel) == 2
    assert all(v[0] + 2 * v[1] + 3 * v[2] == 0 for v in kernel)
    assert len(integer_kernel([[1, 2, 3], [2, 4, 6]], 3)) == 2
    assert integer_kernel([[0, 0, 0]], 3) == [(1, 0, 0), (0, 1, 0), (0, 0, 1)]


def test_integer_kernel_is_saturated():
    # x = 2y has kernel Z(2, 1), not a multiple of it
    assert integer_kernel([[1, -2]], 2) in ([(2, 1)], [(-2, -1)])
    rng = random.Random(20240611)
    for _ in range(40):
        n = rng.randint(2, 4)
        rows = [[rng.randint(-3, 3) for _ in range(n)] for _ in range(rng.randint(1, 3))]
        kernel = integer_kernel(rows, n)
        assert all(sum(a * x for a, x in zip(row, v)) == 0 for row in rows for v in kernel)
        assert len(kernel) == n - Subspace.span(rows, n).dim
        # columns of a unimodular matrix
        for v in kernel:
            assert is_primitive(v)


def test_row_hermite_keeps_the_lattice():
    rows = [(1, 0, 0), (0, 2, 0)]
    basis = row_hermite(rows, 3)
    assert len(basis) == 2
    assert Subspace.span(basis, 3) == Subspace.span(rows, 3)
    # the bottom coordinates of the generators need not be independent
    assert row_hermite([(1, 0)], 2) == [(1, 0)]


def test_quotient_forms_vanish_on_space():
    space = Subspace.span([[1, 1, 0]], 3)
    forms = quotient_forms(space)
    assert len(forms) == 2
    assert all(f[0] + f[1] == 0 for f in forms)
    assert quotient_forms(Subspace.zero(2)) == [(1, 0), (0, 1)]
    assert quotient_forms(Subspace.full(2)) == []
