# klyachko/services/fan_service.py
"""
Fan Service - validation, completeness and cone membership queries.
Completeness and the face-intersection check are implemented up to rank 3.
"""
import logging
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import FrozenSet, List, Optional, Sequence, Tuple

from ..errors import NoConeFoundError, UnsupportedRankError
from ..models.fan import Cone, Fan
from .lattice import is_primitive
from .linalg import Subspace, Vector, dot, nullspace, solve
from .polytope_service import HPolytope, polytope_service
from .simplex import linprog

logger = logging.getLogger(__name__)

MAX_CHECKED_RANK = 3


@dataclass(frozen=True)
class FanViolation:
    kind: str
    message: str
    indices: Tuple[int, ...] = ()

    def to_dict(self) -> dict:
        return {"kind": self.kind, "message": self.message, "indices": list(self.indices)}


def _rank(vectors: Sequence[Sequence[int]], n: int) -> int:
    return Subspace.span(vectors, n).dim if vectors else 0


class FanService:
    """Service for combinatorial queries on fans"""

    def validate_fan(self, fan: Fan) -> List[FanViolation]:
        """
        Check the fan's invariants. Never raises; an empty list means ok.
        """
        violations: List[FanViolation] = []
        r = fan.lattice_rank
        if r < 1:
            return [FanViolation("bad rank", f"lattice rank {r} must be positive")]

        well_formed = True
        for i, ray in enumerate(fan.rays):
            if len(ray) != r:
                violations.append(FanViolation("wrong length", f"ray {i} has {len(ray)} entries, expected {r}", (i,)))
                well_formed = False
            elif not is_primitive(ray):
                violations.append(FanViolation("non-primitive", f"ray {i} = {list(ray)} is not primitive", (i,)))
        seen = {}
        for i, ray in enumerate(fan.rays):
            if ray in seen:
                violations.append(FanViolation("duplicate ray", f"ray {i} repeats ray {seen[ray]}", (seen[ray], i)))
            else:
                seen[ray] = i

        used = set()
        for k, cone in enumerate(fan.max_cones):
            if not cone:
                violations.append(FanViolation("empty cone", f"maximal cone {k} has no rays", (k,)))
                continue
            if len(set(cone)) != len(cone):
                violations.append(FanViolation("repeated index", f"maximal cone {k} lists a ray twice", (k,)))
            bad = [i for i in cone if not 0 <= i < fan.n_rays]
            if bad:
                violations.append(FanViolation("bad ray index", f"maximal cone {k} refers to missing rays {bad}", (k,)))
                well_formed = False
                continue
            used.update(cone)
        for i in range(fan.n_rays):
            if i not in used:
                violations.append(FanViolation("unused ray", f"ray {i} lies in no maximal cone", (i,)))
        repeated = [c for c, n in Counter(tuple(sorted(c)) for c in fan.max_cones).items() if n > 1]
        for cone in repeated:
            violations.append(FanViolation("duplicate cone", f"maximal cone {list(cone)} is listed twice"))
        if not well_formed:
            return violations

        for k, cone in enumerate(fan.max_cones):
            if cone and self.is_simplicial_shape(fan, cone) and not self.is_independent(fan, cone):
                violations.append(FanViolation("dependent rays", f"simplicial cone {k} has linearly dependent rays", (k,)))
        if r <= MAX_CHECKED_RANK and not violations:
            for a, b in combinations(range(len(fan.max_cones)), 2):
                if not self._meet_in_common_face(fan, fan.max_cones[a], fan.max_cones[b]):
                    violations.append(FanViolation(
                        "bad intersection",
                        f"maximal cones {a} and {b} do not meet in a common face", (a, b),
                    ))
        return violations

    def is_simplicial_shape(self, fan: Fan, cone: Sequence[int]) -> bool:
        return len(cone) <= fan.lattice_rank

    def is_independent(self, fan: Fan, cone: Sequence[int]) -> bool:
        return _rank([fan.rays[i] for i in cone], fan.lattice_rank) == len(cone)

    def _meet_in_common_face(self, fan: Fan, sigma: Sequence[int], tau: Sequence[int]) -> bool:
        # only decidable this way when both cones are simplicial
        if not (self.is_independent(fan, sigma) and self.is_independent(fan, tau)):
            return True
        common = set(sigma) & set(tau)
        r = fan.lattice_rank
        na, nb = len(sigma), len(tau)
        a_eq = [
            [fan.rays[i][k] for i in sigma] + [-fan.rays[j][k] for j in tau]
            for k in range(r)
        ]
        cost = [0 if i in common else 1 for i in sigma] + [0 if j in common else 1 for j in tau]
        result = linprog(cost, A_ub=[[1] * (na + nb)], b_ub=[1], A_eq=a_eq, b_eq=[0] * r,
                         nonneg=range(na + nb))
        return result.is_optimal and result.value == 0

    def facets(self, fan: Fan, cone: Sequence[int]) -> List[FrozenSet[int]]:
        """Facets of a full-dimensional cone as sets of ray indices"""
        r = fan.lattice_rank
        found = set()
        for subset in combinations(cone, r - 1):
            vectors = [fan.rays[i] for i in subset]
            kernel = nullspace(vectors, r)
            if len(kernel) != 1:
                continue
            m = kernel[0]
            values = {i: dot(m, fan.rays[i]) for i in cone}
            if all(v >= 0 for v in values.values()) or all(v <= 0 for v in values.values()):
                found.add(frozenset(i for i, v in values.items() if v == 0))
        return sorted(found, key=sorted)

    def is_complete(self, fan: Fan) -> bool:
        """
        True iff the maximal cones cover N ⊗ Q.

        Raises:
            UnsupportedRankError: for lattice rank above 3
        """
        r = fan.lattice_rank
        if r > MAX_CHECKED_RANK:
            raise UnsupportedRankError(
                f"completeness is only checked up to rank {MAX_CHECKED_RANK}", rank=r,
            )
        if r == 1:
            return (1,) in fan.rays and (-1,) in fan.rays
        shared = Counter()
        for cone in fan.max_cones:
            if _rank([fan.rays[i] for i in cone], r) != r:
                return False
            shared.update(self.facets(fan, cone))
        return bool(shared) and all(count == 2 for count in shared.values())

    def cone_coefficients(self, fan: Fan, cone: Cone, n: Sequence) -> Optional[Vector]:
        """Nonnegative a with n = Σ a_i v_i over the cone's rays, or None"""
        rays = fan.cone_rays(cone)
        r = fan.lattice_rank
        columns = [[ray[k] for ray in rays] for k in range(r)]
        if self.is_independent(fan, cone.ray_indices):
            a = solve(columns, n, len(rays))
            if a is None or any(x < 0 for x in a):
                return None
            rebuilt = [sum(x * ray[k] for x, ray in zip(a, rays)) for k in range(r)]
            return a if all(Fraction(v) == w for v, w in zip(n, rebuilt)) else None
        result = linprog([0] * len(rays), A_eq=columns, b_eq=list(n), nonneg=range(len(rays)))
        return result.x if result.is_optimal else None

    def containing_cone(self, fan: Fan, n: Sequence) -> Cone:
        """
        Lowest-index maximal cone whose ray span contains n.

        Raises:
            NoConeFoundError: if no maximal cone contains n
        """
        for cone in fan.cones():
            if self.cone_coefficients(fan, cone, n) is not None:
                return cone
        raise NoConeFoundError(f"no maximal cone contains {list(n)}", vector=[str(x) for x in n])

    @lru_cache(maxsize=256)
    def positively_spans(self, fan: Fan) -> bool:
        """True iff every polytope with the fan's rays as normals is bounded"""
        r = fan.lattice_rank
        recession = HPolytope(r, fan.rays, (Fraction(0),) * fan.n_rays)
        for k in range(r):
            for sign in (1, -1):
                unit = [0] * r
                unit[k] = sign
                if not polytope_service.support(recession, unit).is_bounded:
                    return False
        return True


# Singleton instance
fan_service = FanService()
