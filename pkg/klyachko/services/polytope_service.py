# klyachko/services/polytope_service.py
"""
Polytope Service - H-representation polytopes and the exact LP queries on them
(support values, strict feasibility slack, affine hulls, lattice points,
Minkowski sums over a fixed normal set).
"""
import itertools
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple

from ..errors import DimensionMismatchError, EmptyOperandError, UnboundedPolytopeError
from .lattice import IntVector, is_primitive
from .linalg import Subspace, Vector, nullspace, to_vector
from .simplex import INFEASIBLE, UNBOUNDED, linprog

logger = logging.getLogger(__name__)

BOUNDED = "bounded"
EMPTY = "empty"


@dataclass(frozen=True)
class HPolytope:
    """{u in Q^n : <u, normal_i> <= offset_i for all i}"""
    ambient_dim: int
    normals: Tuple[IntVector, ...]
    offsets: Tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.normals) != len(self.offsets):
            raise DimensionMismatchError(
                "normals and offsets differ in length",
                normals=len(self.normals), offsets=len(self.offsets),
            )
        for i, normal in enumerate(self.normals):
            if len(normal) != self.ambient_dim:
                raise DimensionMismatchError(
                    f"normal {i} has length {len(normal)}, expected {self.ambient_dim}",
                    index=i,
                )
            if not is_primitive(normal):
                raise ValueError(f"normal {i} = {normal} is not a primitive nonzero vector")

    @classmethod
    def from_rows(cls, normals: Sequence[Sequence[int]], offsets: Sequence) -> "HPolytope":
        ambient = len(normals[0]) if normals else 0
        return cls(
            ambient,
            tuple(tuple(int(x) for x in n) for n in normals),
            tuple(Fraction(c) for c in offsets),
        )

    def contains_point(self, u: Sequence) -> bool:
        return all(
            sum(Fraction(a) * b for a, b in zip(u, normal)) <= c
            for normal, c in zip(self.normals, self.offsets)
        )


@dataclass(frozen=True)
class SupportValue:
    """Outcome of maximizing a linear form over a polytope"""
    status: str
    value: Optional[Fraction] = None
    point: Optional[Vector] = None

    @property
    def is_bounded(self) -> bool:
        return self.status == BOUNDED


@dataclass(frozen=True)
class SlackResult:
    status: str
    value: Optional[Fraction] = None
    point: Optional[Vector] = None

    @property
    def is_positive(self) -> bool:
        return self.status == UNBOUNDED or (self.value is not None and self.value > 0)


@dataclass(frozen=True)
class AffineHull:
    dim: Optional[int]
    span: Subspace

    @property
    def is_empty(self) -> bool:
        return self.dim is None


@lru_cache(maxsize=4096)
def _support(polytope: HPolytope, direction: Tuple[Fraction, ...]) -> SupportValue:
    result = linprog(direction, polytope.normals, polytope.offsets)
    if result.status == INFEASIBLE:
        return SupportValue(EMPTY)
    if result.status == UNBOUNDED:
        return SupportValue(UNBOUNDED)
    return SupportValue(BOUNDED, result.value, result.x)


@lru_cache(maxsize=4096)
def _slack(polytope: HPolytope, bounded: bool) -> SlackResult:
    n = polytope.ambient_dim
    rows = [tuple(normal) + (sum(abs(x) for x in normal),) for normal in polytope.normals]
    offsets = list(polytope.offsets)
    if bounded:
        rows.append((0,) * n + (1,))
        offsets.append(Fraction(1))
    result = linprog((0,) * n + (1,), rows, offsets)
    if result.status == UNBOUNDED:
        return SlackResult(UNBOUNDED)
    return SlackResult(BOUNDED, result.value, result.x[:n])


class PolytopeService:
    """Service for exact polyhedral queries on H-polytopes"""

    def lp_support(self, polytope: HPolytope, direction: Tuple[Fraction, ...]) -> SupportValue:
        """
        Exact max of <u, direction> over the polytope.

        Returns:
            SupportValue with status bounded / unbounded / empty
        """
        if len(direction) != polytope.ambient_dim:
            raise DimensionMismatchError(
                f"direction of length {len(direction)} for polytope in Q^{polytope.ambient_dim}",
            )
        return _support(polytope, tuple(Fraction(x) for x in direction))

    def support(self, polytope: HPolytope, direction: Sequence) -> SupportValue:
        return self.lp_support(polytope, to_vector(direction))

    def is_empty(self, polytope: HPolytope) -> bool:
        return self.support(polytope, [0] * polytope.ambient_dim).status == EMPTY

    def feasible_point(self, polytope: HPolytope) -> Optional[Vector]:
        return self.support(polytope, [0] * polytope.ambient_dim).point

    def strict_feasibility_slack(self, polytope: HPolytope, bounded: bool = False) -> SlackResult:
        """
        max s such that <u, n_i> + s * |n_i|_1 <= c_i for all i.
        The polytope is full-dimensional iff the slack is positive; it is
        empty iff the slack is negative. With bounded=True, s is capped at 1
        so normals that do not positively span still give a finite value.
        """
        return _slack(polytope, bounded)

    def is_full_dimensional(self, polytope: HPolytope) -> bool:
        return self.strict_feasibility_slack(polytope).is_positive

    def affine_hull(self, polytope: HPolytope) -> AffineHull:
        """
        Linear span of differences of points of the polytope, from its
        implicit equalities (constraints tight on every point).
        """
        n = polytope.ambient_dim
        if self.is_empty(polytope):
            return AffineHull(None, Subspace.zero(n))
        if self.is_full_dimensional(polytope):
            return AffineHull(n, Subspace.full(n))
        equalities = []
        for normal, c in zip(polytope.normals, polytope.offsets):
            lowest = self.support(polytope, [-x for x in normal])
            if lowest.is_bounded and -lowest.value == c:
                equalities.append(normal)
        span = Subspace.span(nullspace(equalities, n), n) if equalities else Subspace.full(n)
        return AffineHull(span.dim, span)

    def dimension(self, polytope: HPolytope) -> Optional[int]:
        return self.affine_hull(polytope).dim

    def bounding_box(self, polytope: HPolytope) -> Optional[List[Tuple[int, int]]]:
        """Integer coordinate ranges, or None for an empty polytope"""
        box = []
        for k in range(polytope.ambient_dim):
            unit = [0] * polytope.ambient_dim
            unit[k] = 1
            upper = self.support(polytope, unit)
            if upper.status == EMPTY:
                return None
            unit[k] = -1
            lower = self.support(polytope, unit)
            if upper.status == UNBOUNDED or lower.status == UNBOUNDED:
                raise UnboundedPolytopeError(
                    f"polytope is unbounded along coordinate {k}", coordinate=k,
                )
            box.append((math.ceil(-lower.value), math.floor(upper.value)))
        return box

    def lattice_points(self, polytope: HPolytope) -> List[IntVector]:
        """All integer points, sorted lexicographically"""
        box = self.bounding_box(polytope)
        if box is None:
            return []
        ranges = [range(lo, hi + 1) for lo, hi in box]
        return [u for u in itertools.product(*ranges) if polytope.contains_point(u)]

    def has_lattice_point(self, polytope: HPolytope) -> bool:
        box = self.bounding_box(polytope)
        if box is None:
            return False
        ranges = [range(lo, hi + 1) for lo, hi in box]
        return any(polytope.contains_point(u) for u in itertools.product(*ranges))

    def minkowski_sum(self, p: HPolytope, q: HPolytope,
                      normal_set: Sequence[Sequence[int]]) -> HPolytope:
        """
        Offsets h_P(n) + h_Q(n) for n in the normal set. Exact whenever both
        operands only use normals from the set.
        """
        return self.minkowski_combination([p, q], [1, 1], normal_set)

    def minkowski_combination(self, polytopes: Sequence[HPolytope], coefficients: Sequence[int],
                              normal_set: Sequence[Sequence[int]]) -> HPolytope:
        """c_1 P_1 + ... + c_q P_q for nonnegative integers c_i"""
        ambient = polytopes[0].ambient_dim
        for i, (polytope, c) in enumerate(zip(polytopes, coefficients)):
            if c < 0:
                raise ValueError(f"coefficient {c} is negative")
            if c and self.is_empty(polytope):
                raise EmptyOperandError(f"operand {i} is empty", operand=i)
        normals, offsets = [], []
        for normal in normal_set:
            total = Fraction(0)
            bounded = True
            for polytope, c in zip(polytopes, coefficients):
                if not c:
                    continue
                h = self.support(polytope, normal)
                if not h.is_bounded:
                    bounded = False
                    break
                total += c * h.value
            if bounded:
                normals.append(tuple(int(x) for x in normal))
                offsets.append(total)
        return HPolytope(ambient, tuple(normals), tuple(offsets))

    def contains_polytope(self, outer: HPolytope, inner: HPolytope) -> bool:
        """inner ⊆ outer, decided by support values along outer's normals"""
        if self.is_empty(inner):
            return True
        for normal, c in zip(outer.normals, outer.offsets):
            h = self.support(inner, normal)
            if not h.is_bounded or h.value > c:
                return False
        return True

    def extreme_points(self, points: Sequence[Sequence[Fraction]]) -> List[Vector]:
        """Points of a finite set that are not convex combinations of the others"""
        distinct = sorted(set(to_vector(p) for p in points))
        if len(distinct) <= 1:
            return distinct
        extreme = []
        for i, p in enumerate(distinct):
            others = [q for j, q in enumerate(distinct) if j != i]
            dim = len(p)
            # lambda >= 0, sum lambda = 1, sum lambda_j q_j = p
            a_eq = [[q[k] for q in others] for k in range(dim)] + [[1] * len(others)]
            b_eq = list(p) + [1]
            result = linprog([0] * len(others), A_eq=a_eq, b_eq=b_eq, nonneg=range(len(others)))
            if result.status == INFEASIBLE:
                extreme.append(p)
        return extreme


# Create a single instance to use across the toolkit
polytope_service = PolytopeService()
