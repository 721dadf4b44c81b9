# klyachko/services/sections_service.py
"""
Sections Service - global sections H⁰(X, E) by weight and the image dimensions
of the multiplication maps S^l H⁰(Sym^p E) -> H⁰(Sym^(pl) E).
"""
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from ..config import settings
from ..errors import UnboundedSupportError
from ..models.bundle import ToricBundle
from .bundle_service import bundle_service
from .fan_service import fan_service
from .lattice import IntVector
from .linalg import EchelonBuilder, Subspace, Vector
from .polytope_service import HPolytope, polytope_service
from .symmetric import check_budget, sym_dim, sym_multiply

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SectionSpace:
    """H⁰ = ⊕_u χ^(-u) ⊗ E_u over the weights u with E_u != 0"""
    entries: Tuple[Tuple[IntVector, Subspace], ...]

    @property
    def total_dim(self) -> int:
        return sum(space.dim for _, space in self.entries)

    def weights(self) -> List[IntVector]:
        return [u for u, _ in self.entries]


class SectionsService:
    """Service for global sections and the multiplication maps between them"""

    def weight_space(self, bundle: ToricBundle, u: Sequence[int]) -> Subspace:
        return bundle_service.weight_space(bundle, u)

    def support_polytope(self, bundle: ToricBundle) -> HPolytope:
        """
        {u : <u, v_ρ> <= max jump at ρ}, which contains every weight with E_u != 0.

        Raises:
            UnboundedSupportError: when the rays do not positively span
        """
        fan = bundle.fan
        if not fan_service.positively_spans(fan):
            raise UnboundedSupportError(
                "section weights are unbounded: the fan's rays do not positively span N_Q",
            )
        offsets = tuple(Fraction(f.max_jump) for f in bundle.filtrations)
        return HPolytope(fan.lattice_rank, fan.rays, offsets)

    def h0(self, bundle: ToricBundle) -> SectionSpace:
        if bundle.rank == 0:
            return SectionSpace(())
        entries = []
        for u in polytope_service.lattice_points(self.support_polytope(bundle)):
            space = self.weight_space(bundle, u)
            if not space.is_zero():
                entries.append((u, space))
        return SectionSpace(tuple(entries))

    def h0_sym(self, bundle: ToricBundle, p: int, budget: Optional[int] = None) -> SectionSpace:
        check_budget(bundle.rank, p, settings.sym_budget if budget is None else budget)
        return self.h0(bundle_service.sym_power(bundle, p))

    def h0_spanning_dim(self, bundle: ToricBundle) -> int:
        """
        dim of the span of {χ^(-u) ⊗ e : e ∈ GS(1), u ∈ Δ_e ∩ M}; agrees with
        h0(bundle).total_dim whenever the ground set spans every weight space.
        """
        by_weight: Dict[IntVector, EchelonBuilder] = {}
        for e in bundle_service.ground_set(bundle, 1):
            for u in polytope_service.lattice_points(bundle_service.polytope_of(bundle, e)):
                by_weight.setdefault(u, EchelonBuilder(bundle.rank)).add(e)
        return sum(builder.rank for builder in by_weight.values())

    def image_dims(self, bundle: ToricBundle, p: int, l_max: int,
                   budget: Optional[int] = None) -> List[int]:
        """
        [image_dim(p, l) for l = 1..l_max].

        Products of sections of weights u_1..u_l land in weight u_1 + ... + u_l,
        so the image is computed weight by weight: S_1(u) = E_u of Sym^p E and
        S_(k+1)(u) = span{s·t : s ∈ S_k(u'), t ∈ S_1(u - u')}.

        Raises:
            BudgetExceededError: if dim Sym^(p l_max) E is over budget
        """
        if p < 1 or l_max < 1:
            raise ValueError("p and l_max must be at least 1")
        budget = settings.sym_budget if budget is None else budget
        r = bundle.rank
        check_budget(r, p * l_max, budget)
        base = self.h0(bundle_service.sym_power(bundle, p))
        first = {u: list(space.basis) for u, space in base.entries}
        level: Dict[IntVector, List[Vector]] = dict(first)
        dims = [sum(len(v) for v in level.values())]
        for k in range(1, l_max):
            builders: Dict[IntVector, EchelonBuilder] = {}
            for u_left, left in level.items():
                for u_right, right in first.items():
                    u = tuple(a + b for a, b in zip(u_left, u_right))
                    builder = builders.get(u)
                    if builder is None:
                        builder = builders[u] = EchelonBuilder(sym_dim(r, p * (k + 1)))
                    for s in left:
                        for t in right:
                            builder.add(sym_multiply(s, t, r, p * k, p))
            level = {u: list(b.rows.values()) for u, b in sorted(builders.items()) if b.rank}
            dims.append(sum(len(v) for v in level.values()))
            logger.debug("image_dim(p=%d, l=%d) = %d over %d weights", p, k + 1, dims[-1], len(level))
        return dims

    def image_dim(self, bundle: ToricBundle, p: int, l: int, budget: Optional[int] = None) -> int:
        return self.image_dims(bundle, p, l, budget)[-1]


def log_log_slope(dims: Dict[int, int], start: int, end: int) -> Optional[float]:
    """
    Least-squares slope of log(dim) against log(l) for start <= l <= end.
    Display only; None when fewer than two usable points.
    """
    points = [(math.log(l), math.log(d)) for l, d in sorted(dims.items()) if start <= l <= end and d > 0]
    if len(points) < 2:
        return None
    mean_x = sum(x for x, _ in points) / len(points)
    mean_y = sum(y for _, y in points) / len(points)
    sxx = sum((x - mean_x) ** 2 for x, _ in points)
    if sxx == 0:
        return None
    return sum((x - mean_x) * (y - mean_y) for x, y in points) / sxx


# Singleton instance
sections_service = SectionsService()
