# klyachko/services/symmetric.py
"""
Coordinates on Sym^p(Q^r): vectors are coefficient tuples over the degree-p
monomials in x_0..x_(r-1), listed in descending lexicographic order of their
exponents (so Sym^1 coordinates coincide with Q^r coordinates). Products are
taken as sympy polynomials over QQ.
"""
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Dict, Iterable, Sequence, Tuple

from sympy import QQ, Poly, symbols

from ..errors import BudgetExceededError, DimensionMismatchError
from .linalg import Vector, as_fraction, as_rational

Exponent = Tuple[int, ...]
Polynomial = Poly


def sym_dim(rank: int, p: int) -> int:
    """dim Sym^p(Q^rank)"""
    if p < 0:
        return 0
    if rank == 0:
        return 1 if p == 0 else 0
    return comb(rank + p - 1, p)


def check_budget(rank: int, p: int, budget: int) -> None:
    """
    Raises:
        BudgetExceededError: if dim Sym^p(Q^rank) is over budget
    """
    requested = sym_dim(rank, p)
    if requested > budget:
        raise BudgetExceededError(
            f"Sym^{p} of a rank {rank} fiber has dimension {requested}, over the budget of {budget}",
            requested=requested, budget=budget, rank=rank, p=p,
        )


@lru_cache(maxsize=1024)
def monomials(rank: int, p: int) -> Tuple[Exponent, ...]:
    if rank == 0:
        return ((),) if p == 0 else ()

    def build(k: int, left: int):
        if k == rank - 1:
            yield (left,)
            return
        for a in range(left, -1, -1):
            for rest in build(k + 1, left - a):
                yield (a,) + rest

    return tuple(build(0, p))


@lru_cache(maxsize=1024)
def monomial_index(rank: int, p: int) -> Dict[Exponent, int]:
    return {m: i for i, m in enumerate(monomials(rank, p))}


@lru_cache(maxsize=None)
def generators(rank: int) -> tuple:
    return symbols(f"x0:{rank}")


def _constant(c, rank: int) -> Polynomial:
    return Poly(as_rational(c), *generators(rank), domain=QQ)


def to_polynomial(v: Sequence, rank: int, p: int) -> Polynomial:
    basis = monomials(rank, p)
    if len(v) != len(basis):
        raise DimensionMismatchError(
            f"vector of length {len(v)} is not in Sym^{p}(Q^{rank})",
            expected=len(basis), got=len(v),
        )
    terms = {m: as_rational(c) for m, c in zip(basis, v) if c}
    if not terms:
        return _constant(0, rank)
    return Poly.from_dict(terms, *generators(rank), domain=QQ)


def from_polynomial(poly: Polynomial, rank: int, p: int) -> Vector:
    index = monomial_index(rank, p)
    out = [Fraction(0)] * len(index)
    for m, c in poly.terms():
        if c:
            out[index[m]] = as_fraction(c)
    return tuple(out)


def sym_multiply(f: Sequence, g: Sequence, rank: int, a: int, b: int) -> Vector:
    """Product of f ∈ Sym^a and g ∈ Sym^b in Sym^(a+b)"""
    if rank == 0:
        return (Fraction(f[0]) * Fraction(g[0]),) if a + b == 0 else ()
    product = to_polynomial(f, rank, a) * to_polynomial(g, rank, b)
    return from_polynomial(product, rank, a + b)


def product_of_linear_forms(vectors: Iterable[Sequence], rank: int) -> Vector:
    """v_1 · v_2 ··· v_k in Sym^k for vectors of Q^rank"""
    vectors = list(vectors)
    if rank == 0:
        return (Fraction(1),) if not vectors else ()
    poly = _constant(1, rank)
    for v in vectors:
        poly = poly * to_polynomial(v, rank, 1)
    return from_polynomial(poly, rank, len(vectors))


def sym_power_of(v: Sequence, rank: int, k: int) -> Vector:
    """v^k in Sym^k"""
    if rank == 0:
        return (Fraction(1),) if k == 0 else ()
    return from_polynomial(to_polynomial(v, rank, 1) ** k, rank, k)
