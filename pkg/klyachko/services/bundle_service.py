# klyachko/services/bundle_service.py
"""
Bundle Service - constructing toric bundles (split, direct sum, Sym^p) and the
per-vector data derived from their filtrations: φ values, the polytopes Δ_e,
ground sets GS(p) and their lattice-point filtered versions.
"""
import logging
from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement
from typing import Dict, List, Sequence, Set, Tuple

from ..errors import ShapeMismatchError, UnboundedPolytopeError
from ..models.bundle import ConeGrading, Filtration, GroundSet, Provenance, ToricBundle
from ..models.fan import Fan
from .fan_service import fan_service
from .linalg import EchelonBuilder, Subspace, Vector, dot, intersect_all, unit_vector
from .polytope_service import HPolytope, polytope_service
from .symmetric import monomials, product_of_linear_forms, sym_dim, sym_multiply

logger = logging.getLogger(__name__)


class BundleService:
    """Service for building bundles and reading off their polytopes"""

    def from_divisors(self, fan: Fan, coefficients: Sequence[Sequence[int]]) -> ToricBundle:
        """
        ⊕_i O(Σ_ρ a_ρ^(i) D_ρ). Row i of coefficients holds a^(i), one entry per ray.
        At ray ρ, E(j) = span{x_i : a_ρ^(i) >= j}.
        """
        rows = tuple(tuple(int(a) for a in row) for row in coefficients)
        for i, row in enumerate(rows):
            if len(row) != fan.n_rays:
                raise ShapeMismatchError(
                    f"summand {i} has {len(row)} coefficients for {fan.n_rays} rays",
                    summand=i, expected=fan.n_rays, got=len(row),
                )
        rank = len(rows)
        filtrations = []
        for ray in range(fan.n_rays):
            values = [row[ray] for row in rows]

            def space_at(j, values=values):
                return Subspace.span(
                    [unit_vector(rank, i) for i, a in enumerate(values) if a >= j], rank,
                )

            filtrations.append(Filtration.from_levels(rank, values, space_at))
        return ToricBundle(fan, rank, tuple(filtrations), Provenance("split", coefficients=rows))

    def direct_sum(self, first: ToricBundle, second: ToricBundle) -> ToricBundle:
        if first.fan != second.fan:
            raise ShapeMismatchError("direct sum of bundles on different fans")
        if second.rank == 0:
            return first
        if first.rank == 0:
            return second
        rank = first.rank + second.rank
        filtrations = []
        for f, g in zip(first.filtrations, second.filtrations):

            def space_at(j, f=f, g=g):
                return f.space_at(j).embed(0, rank) + g.space_at(j).embed(first.rank, rank)

            filtrations.append(Filtration.from_levels(rank, f.jumps + g.jumps, space_at))
        if first.provenance.is_split and second.provenance.is_split:
            provenance = Provenance(
                "split", coefficients=first.provenance.coefficients + second.provenance.coefficients,
            )
        else:
            provenance = Provenance("explicit")
        return ToricBundle(first.fan, rank, tuple(filtrations), provenance)

    @lru_cache(maxsize=64)
    def sym_power(self, bundle: ToricBundle, p: int) -> ToricBundle:
        """
        Sym^p E with the induced filtrations: if b_1..b_r is a basis of E
        adapted to E^ρ with weights w_k, the monomials Π b_k^(α_k) form an
        adapted basis of Sym^p E with weights Σ α_k w_k.
        """
        if p < 1:
            raise ValueError(f"symmetric power {p} must be at least 1")
        if p == 1:
            return bundle
        r = bundle.rank
        dim = sym_dim(r, p)
        filtrations = []
        for filtration in bundle.filtrations:
            adapted = filtration.adapted_basis()
            weighted: List[Tuple[int, Vector]] = []
            for alpha in monomials(r, p):
                factors = [v for power, (v, _) in zip(alpha, adapted) for k in range(power)]
                weight = sum(power * w for power, (_, w) in zip(alpha, adapted))
                weighted.append((weight, product_of_linear_forms(factors, r)))
            levels = sorted({w for w, _ in weighted}, reverse=True)
            builder = EchelonBuilder(dim)
            steps = []
            for level in levels:
                for w, v in weighted:
                    if w == level:
                        builder.add(v)
                steps.append((level, builder.to_subspace()))
            filtrations.append(Filtration(dim, tuple(reversed(steps))))
        logger.debug("built Sym^%d of a rank %d bundle (dimension %d)", p, r, dim)
        return ToricBundle(bundle.fan, dim, tuple(filtrations), Provenance("sym", p=p, base=bundle))

    def phi_ray(self, bundle: ToricBundle, e: Sequence, ray: int) -> int:
        return bundle.filtrations[ray].phi(e)

    def phi_profile(self, bundle: ToricBundle, e: Sequence) -> Tuple[int, ...]:
        """(φ_e(v_ρ))_ρ over all rays"""
        return tuple(f.phi(e) for f in bundle.filtrations)

    def phi_general(self, bundle: ToricBundle, gradings: Dict[int, ConeGrading],
                    e: Sequence, n: Sequence):
        """
        φ_e(n) for any n in the support of the fan: decompose e in the grading
        of the first maximal cone containing n and take the smallest <χ, n>
        over the pieces where e has a nonzero component.
        """
        if not any(e):
            raise ValueError("phi is only defined for nonzero vectors")
        cone = fan_service.containing_cone(bundle.fan, n)
        grading = gradings[cone.index]
        value = min(dot(n, chi) for chi, nonzero in grading.components(e) if nonzero)
        return int(value) if value.denominator == 1 else value

    def polytope_of(self, bundle: ToricBundle, e: Sequence) -> HPolytope:
        """
        Δ_e = {u : <u, v_ρ> <= φ_e(v_ρ) for all ρ}.

        Raises:
            UnboundedPolytopeError: if the rays do not positively span
        """
        if not fan_service.positively_spans(bundle.fan):
            raise UnboundedPolytopeError("the fan's rays do not positively span N_Q")
        offsets = tuple(Fraction(x) for x in self.phi_profile(bundle, e))
        return HPolytope(bundle.fan.lattice_rank, bundle.fan.rays, offsets)

    @lru_cache(maxsize=64)
    def ground_set(self, bundle: ToricBundle, p: int) -> GroundSet:
        """
        GS(p): echelon bases of every nonzero intersection ∩_ρ E_p^ρ(j_ρ) over
        all tuples of jump levels, deduplicated and sorted (descending lex).
        """
        power = self.sym_power(bundle, p)
        if power.rank == 0:
            return GroundSet((), p)
        steps = [f.steps for f in power.filtrations]
        spaces: Set[Subspace] = set()

        def walk(k: int, current: Subspace) -> None:
            if k == len(steps):
                spaces.add(current)
                return
            for _, space in steps[k]:
                meet = current.intersect(space)
                if meet.is_zero():
                    # deeper steps only shrink further
                    break
                walk(k + 1, meet)

        walk(0, Subspace.full(power.rank))
        # descending, so coordinate vectors come out in the order x_1, x_2, ...
        elements = sorted({v for space in spaces for v in space.basis}, reverse=True)
        logger.debug("GS(%d) has %d elements from %d intersections", p, len(elements), len(spaces))
        return GroundSet(tuple(elements), p)

    @lru_cache(maxsize=64)
    def epsilon_bar(self, bundle: ToricBundle, p: int) -> GroundSet:
        """Elements of GS(p) whose polytope Δ_e contains a lattice point"""
        power = self.sym_power(bundle, p)
        kept = tuple(
            e for e in self.ground_set(bundle, p)
            if polytope_service.has_lattice_point(self.polytope_of(power, e))
        )
        return GroundSet(kept, p)

    def weight_space(self, bundle: ToricBundle, u: Sequence[int]) -> Subspace:
        """E_u = ∩_ρ E^ρ(<u, v_ρ>)"""
        return intersect_all(
            (f.space_at(dot(u, ray)) for f, ray in zip(bundle.filtrations, bundle.fan.rays)),
            bundle.rank,
        )

    def products(self, bundle: ToricBundle, p: int) -> List[Vector]:
        """
        Products f·g with f ∈ GS(a), g ∈ GS(p - a), 1 <= a <= p/2, in Sym^p
        coordinates, without repeats and in a fixed order.
        """
        r = bundle.rank
        seen = set()
        out: List[Vector] = []
        for a in range(1, p // 2 + 1):
            left = self.ground_set(bundle, a).elements
            right = self.ground_set(bundle, p - a).elements
            pairs = (combinations_with_replacement(left, 2) if a == p - a
                     else ((f, g) for f in left for g in right))
            for f, g in pairs:
                product = sym_multiply(f, g, r, a, p - a)
                if product not in seen:
                    seen.add(product)
                    out.append(product)
        return out

    def trivial(self, fan: Fan, rank: int) -> ToricBundle:
        """O^rank, every filtration jumping only at 0"""
        return self.from_divisors(fan, [[0] * fan.n_rays for _ in range(rank)])


# Singleton instance
bundle_service = BundleService()
