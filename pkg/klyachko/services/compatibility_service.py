# klyachko/services/compatibility_service.py
"""
Compatibility Service - decides, cone by cone, whether the ray filtrations of
a maximal cone come from one grading E = ⊕_χ E_χ, and builds that grading.

Steps for a cone σ with rays ρ_1..ρ_k:
  1. count  Σ_j [dim V(j) - dim Σ_i V(j + δ_i)] over all level tuples j,
     where V(j) = ∩_i E^ρ_i(j_i); it equals rank E when a splitting exists
  2. close the step subspaces under + and ∩ (a distributive closure has at
     most 2^rank elements) and test distributivity on triples
  3. pick complements greedily, solve <χ, v_ρ_i> = j_i over Z, verify
"""
import logging
from collections import OrderedDict
from itertools import combinations, product
from typing import Dict, List, Optional, Sequence, Tuple

from ..errors import IncompatibleBundleError, InvariantViolationError
from ..models.bundle import CompatibilityResult, ConeGrading, IncompatibilityWitness, ToricBundle
from ..models.fan import Cone
from .lattice import integer_solve
from .linalg import EchelonBuilder, Subspace, Vector, dot

logger = logging.getLogger(__name__)


def _basis_lists(space: Subspace) -> List[List]:
    return [list(v) for v in space.basis]


class CompatibilityService:
    """Service for the per-cone compatibility condition"""

    def check_compatibility(self, bundle: ToricBundle, cone: Cone) -> CompatibilityResult:
        r = bundle.rank
        if r == 0:
            return CompatibilityResult(grading=ConeGrading(cone, ()))
        filtrations = [bundle.filtrations[i] for i in cone.ray_indices]
        levels = [f.jumps for f in filtrations]
        meets: Dict[Tuple[int, ...], Subspace] = {}

        def meet(index: Tuple[int, ...]) -> Subspace:
            if any(i >= len(lv) for i, lv in zip(index, levels)):
                return Subspace.zero(r)
            if index not in meets:
                result = Subspace.full(r)
                for f, i in zip(filtrations, index):
                    result = result.intersect(f.steps[i][1])
                meets[index] = result
            return meets[index]

        def below(index: Tuple[int, ...]) -> Subspace:
            total = Subspace.zero(r)
            for k in range(len(index)):
                bumped = index[:k] + (index[k] + 1,) + index[k + 1:]
                total = total + meet(bumped)
            return total

        tuples = list(product(*(range(len(lv)) for lv in levels)))
        count = sum(meet(t).dim - below(t).dim for t in tuples)
        if count != r:
            witness = self._distributivity_witness(filtrations, r, cone) or IncompatibilityWitness(
                cone.index, "dimension_count",
                {"expected": r, "counted": count},
            )
            return CompatibilityResult(witness=witness)

        witness = self._distributivity_witness(filtrations, r, cone)
        if witness is not None:
            return CompatibilityResult(witness=witness)

        # greedy splitting, deepest level tuples first
        tuples.sort(key=lambda t: (sum(t), t), reverse=True)
        chosen = EchelonBuilder(r)
        graded: "OrderedDict[Tuple[int, ...], List[Vector]]" = OrderedDict()
        for t in tuples:
            space = meet(t)
            if space.is_zero():
                continue
            guard = EchelonBuilder(r)
            for v in below(t).basis:
                guard.add(v)
            for v in chosen.rows.values():
                guard.add(v)
            for v in space.basis:
                if guard.add(v):
                    chosen.add(v)
                    graded.setdefault(t, []).append(v)

        rays = bundle.fan.cone_rays(cone)
        pieces: Dict[Tuple[int, ...], List[Vector]] = {}
        for t, vectors in graded.items():
            profile = [lv[i] for lv, i in zip(levels, t)]
            chi = integer_solve(rays, profile, bundle.fan.lattice_rank)
            if chi is None:
                return CompatibilityResult(witness=IncompatibilityWitness(
                    cone.index, "non_integral_character",
                    {"profile": profile, "vectors": [list(v) for v in vectors]},
                ))
            pieces.setdefault(chi, []).extend(vectors)

        grading = ConeGrading(cone, tuple(
            (chi, Subspace.span(vectors, r)) for chi, vectors in sorted(pieces.items())
        ))
        if sum(space.dim for _, space in grading.pieces) != r:
            return CompatibilityResult(witness=IncompatibilityWitness(
                cone.index, "reconstruction",
                {"reason": "pieces do not span the fiber"},
            ))
        mismatch = self._first_mismatch(bundle, grading)
        if mismatch is not None:
            ray, level = mismatch
            return CompatibilityResult(witness=IncompatibilityWitness(
                cone.index, "reconstruction", {"ray": ray, "level": level},
            ))
        return CompatibilityResult(grading=grading)

    def _first_mismatch(self, bundle: ToricBundle, grading: ConeGrading) -> Optional[Tuple[int, int]]:
        """(ray, level) where the grading fails to give back E^ρ(level), if any"""
        for i in grading.cone.ray_indices:
            f = bundle.filtrations[i]
            ray = bundle.fan.rays[i]
            for j in f.jumps + (f.max_jump + 1,):
                rebuilt = Subspace.zero(bundle.rank)
                for chi, space in grading.pieces:
                    if dot(chi, ray) >= j:
                        rebuilt = rebuilt + space
                if rebuilt != f.space_at(j):
                    return i, j
        return None

    def _distributivity_witness(self, filtrations, r: int, cone: Cone) -> Optional[IncompatibilityWitness]:
        generators = [Subspace.zero(r), Subspace.full(r)]
        for f in filtrations:
            generators.extend(space for _, space in f.steps)
        elements, exceeded = self._closure(generators, 2 ** r)
        triple = self._non_distributive_triple(elements)
        if triple is not None:
            a, b, c = triple
            return IncompatibilityWitness(cone.index, "distributivity", {
                "A": _basis_lists(a), "B": _basis_lists(b), "C": _basis_lists(c),
            })
        if exceeded:
            return IncompatibilityWitness(cone.index, "closure_bound", {
                "bound": 2 ** r, "reached": len(elements),
            })
        return None

    def _closure(self, generators: Sequence[Subspace], cap: int) -> Tuple[List[Subspace], bool]:
        """Closure under + and ∩, stopping once more than cap elements are found"""
        elements: List[Subspace] = []
        seen = set()
        for g in generators:
            if g not in seen:
                seen.add(g)
                elements.append(g)
        frontier = list(elements)
        while frontier:
            fresh = []
            for a in frontier:
                for b in list(elements):
                    for c in (a + b, a & b):
                        if c not in seen:
                            seen.add(c)
                            elements.append(c)
                            fresh.append(c)
                            if len(elements) > cap:
                                return elements, True
            frontier = fresh
        return elements, False

    def _non_distributive_triple(self, elements: Sequence[Subspace]):
        for a in elements:
            for b, c in combinations(elements, 2):
                if a & (b + c) != (a & b) + (a & c):
                    return a, b, c
        return None

    def gradings(self, bundle: ToricBundle) -> Dict[int, ConeGrading]:
        """
        Gradings of every maximal cone.

        Raises:
            IncompatibleBundleError: carrying a witness for every incompatible cone
        """
        out: Dict[int, ConeGrading] = {}
        witnesses = []
        for cone in bundle.fan.cones():
            result = self.check_compatibility(bundle, cone)
            if not result.is_compatible:
                witnesses.append(result.witness)
                continue
            out[cone.index] = result.grading
            logger.debug("cone %d splits into %d weight pieces", cone.index, len(result.grading.pieces))
        if witnesses:
            raise IncompatibleBundleError(
                f"filtrations are incompatible on maximal cone(s) {[w.cone_index for w in witnesses]}",
                witnesses,
            )
        return out

    def verify_grading(self, bundle: ToricBundle, grading: ConeGrading) -> None:
        """
        Raises:
            InvariantViolationError: if a grading fails to recover a filtration
        """
        mismatch = self._first_mismatch(bundle, grading)
        if mismatch is not None:
            raise InvariantViolationError(
                f"grading of cone {grading.cone.index} does not recover ray {mismatch[0]} "
                f"at level {mismatch[1]}",
                cone=grading.cone.index, ray=mismatch[0], level=mismatch[1],
            )


# Singleton instance
compatibility_service = CompatibilityService()
