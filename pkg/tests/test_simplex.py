# tests/test_simplex.py
from fractions import Fraction

from klyachko.services.simplex import INFEASIBLE, OPTIMAL, UNBOUNDED, linprog


def test_bounded_maximum():
    # max x + y, x + 2y <= 4, 3x + y <= 6, x, y >= 0
    result = linprog([1, 1], [[1, 2], [3, 1]], [4, 6], nonneg=[0, 1])
    assert result.status == OPTIMAL
    assert result.value == Fraction(14, 5)
    assert result.x == (Fraction(8, 5), Fraction(6, 5))


def test_free_variables_and_equalities():
    # max -x over x = -3 with x free
    result = linprog([-1], A_eq=[[1]], b_eq=[-3])
    assert result.status == OPTIMAL
    assert result.value == 3


def test_infeasible():
    result = linprog([0], [[1], [-1]], [-1, -1])
    assert result.status == INFEASIBLE


def test_unbounded():
    result = linprog([1, 0], [[0, 1]], [1])
    assert result.status == UNBOUNDED


def test_degenerate_problem_terminates():
    # a classic cycling example for the largest-coefficient rule
    c = [Fraction(3, 4), -150, Fraction(1, 50), -6]
    a = [
        [Fraction(1, 4), -60, Fraction(-1, 25), 9],
        [Fraction(1, 2), -90, Fraction(-1, 50), 3],
        [0, 0, 1, 0],
    ]
    result = linprog(c, a, [0, 0, 1], nonneg=range(4))
    assert result.status == OPTIMAL
    assert result.value == Fraction(1, 20)
