# klyachko/services/simplex.py
"""
Exact two-phase simplex over Q with Bland's rule (no cycling), pivoting a
sympy Rational tableau.

    maximize    c . x
    subject to  A_ub x <= b_ub
                A_eq x  = b_eq
                x_i >= 0 for i in nonneg, other variables free
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence

from sympy import Matrix, Rational, zeros

from .linalg import Vector, as_fraction, as_rational

logger = logging.getLogger(__name__)

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LPResult:
    status: str
    value: Optional[Fraction] = None
    x: Optional[Vector] = None

    @property
    def is_optimal(self) -> bool:
        return self.status == OPTIMAL


class _Tableau:
    """Dense tableau; the last column holds the right-hand side"""

    def __init__(self, matrix: Matrix, basis: List[int], ncols: int):
        self.matrix = matrix
        self.basis = basis
        self.ncols = ncols

    def pivot(self, r: int, c: int) -> None:
        M = self.matrix
        M[r, :] = M[r, :] / M[r, c]
        for i in range(M.rows):
            if i != r and M[i, c] != 0:
                M[i, :] = M[i, :] - M[i, c] * M[r, :]
        self.basis[r] = c

    def drop_row(self, r: int) -> None:
        self.matrix.row_del(r)
        del self.basis[r]

    def optimize(self, cost: Sequence[Rational], allowed: Sequence[bool]) -> str:
        M = self.matrix
        while True:
            z = Matrix([[cost[b] for b in self.basis]]) * M if M.rows else zeros(1, M.cols)
            entering = next(
                (j for j in range(self.ncols)
                 if allowed[j] and j not in self.basis and z[j] - cost[j] < 0),
                None,
            )
            if entering is None:
                return OPTIMAL
            candidates = [
                (M[i, -1] / M[i, entering], self.basis[i], i)
                for i in range(M.rows) if M[i, entering] > 0
            ]
            if not candidates:
                return UNBOUNDED
            self.pivot(min(candidates)[2], entering)


def linprog(c: Sequence, A_ub: Sequence[Sequence] = (), b_ub: Sequence = (),
            A_eq: Sequence[Sequence] = (), b_eq: Sequence = (),
            nonneg: Iterable[int] = ()) -> LPResult:
    """Solve the LP exactly; see module docstring for the form"""
    n = len(c)
    nonneg_set = set(nonneg)
    # column layout: one column per nonneg variable, two (plus/minus) per free one
    columns: List[tuple] = []
    for i in range(n):
        columns.append((i, 1))
        if i not in nonneg_set:
            columns.append((i, -1))
    n_struct = len(columns)
    n_slack = len(A_ub)
    m = len(A_ub) + len(A_eq)
    n_total = n_struct + n_slack + m

    M = zeros(m, n_total + 1)
    for k, (a, b) in enumerate(list(zip(A_ub, b_ub)) + list(zip(A_eq, b_eq))):
        for col, (i, sign) in enumerate(columns):
            M[k, col] = sign * as_rational(a[i])
        if k < n_slack:
            M[k, n_struct + k] = 1
        M[k, n_total] = as_rational(b)
        if M[k, n_total] < 0:
            M[k, :] = -M[k, :]
        M[k, n_struct + n_slack + k] = 1

    artificial_start = n_struct + n_slack
    tableau = _Tableau(M, [artificial_start + k for k in range(m)], n_total)

    # Phase I: drive the artificial variables to zero
    phase1_cost = [Rational(0)] * artificial_start + [Rational(-1)] * m
    tableau.optimize(phase1_cost, [True] * n_total)
    infeasibility = sum(
        (tableau.matrix[i, -1] for i, b in enumerate(tableau.basis) if b >= artificial_start),
        Rational(0),
    )
    if infeasibility > 0:
        return LPResult(INFEASIBLE)

    r = 0
    while r < len(tableau.basis):
        if tableau.basis[r] >= artificial_start:
            j = next((j for j in range(artificial_start) if tableau.matrix[r, j] != 0), None)
            if j is None:
                # redundant equality
                tableau.drop_row(r)
                continue
            tableau.pivot(r, j)
        r += 1

    # Phase II
    cost = [Rational(0)] * n_total
    for col, (i, sign) in enumerate(columns):
        cost[col] = sign * as_rational(c[i])
    allowed = [j < artificial_start for j in range(n_total)]
    if tableau.optimize(cost, allowed) == UNBOUNDED:
        return LPResult(UNBOUNDED)

    values = [Fraction(0)] * n_total
    for i, b in enumerate(tableau.basis):
        values[b] = as_fraction(tableau.matrix[i, -1])
    x = [Fraction(0)] * n
    for col, (i, sign) in enumerate(columns):
        x[i] += sign * values[col]
    value = sum((Fraction(ci) * xi for ci, xi in zip(c, x)), Fraction(0))
    return LPResult(OPTIMAL, value, tuple(x))
