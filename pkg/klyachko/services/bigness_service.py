# klyachko/services/bigness_service.py
"""
Bigness Service - L(X,E), the weight points W_p, the graded algebra A(p,X,E)
generated by ε̄(X, Sym^p E), the α estimator, the exact decision for split
bundles, the full-dimensional Δ_f certificate search, and the combined report.

Only the split LP and a found certificate are exact claims. The α sequence is
an estimator at finite l and is labelled as such wherever it is reported.
"""
import logging
import math
from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Tuple

from ..config import settings
from ..errors import (
    BudgetExceededError,
    InvariantViolationError,
    LUnderestimatedError,
    UnboundedPolytopeError,
    WrongProvenanceError,
)
from ..models.bigness import (
    AlphaEstimate,
    BignessReport,
    CertificateResult,
    GradedDims,
    LSubspace,
    SplitDecision,
    Verdict,
    WeightTable,
)
from ..models.bundle import ToricBundle
from ..models.schemas import BignessParams
from .bundle_service import bundle_service
from .lattice import clear_denominators, quotient_forms
from .linalg import EchelonBuilder, Subspace, Vector, dot
from .polytope_service import HPolytope, polytope_service
from .sections_service import sections_service
from .simplex import UNBOUNDED, linprog
from .symmetric import check_budget, sym_dim, sym_multiply

logger = logging.getLogger(__name__)

# EvidencePositive needs a_(l_max) >= EVIDENCE_RATIO * a_(ceil(l_max / 2))
EVIDENCE_RATIO = Fraction(3, 4)


def _budget(budget: Optional[int]) -> int:
    return settings.sym_budget if budget is None else budget


class BignessService:
    """Service for the bigness analysis of a toric vector bundle"""

    def _candidates(self, bundle: ToricBundle, p: int) -> Iterator[Vector]:
        """GS(p), then products of lower-degree ground-set elements; products are built lazily"""
        yield from bundle_service.ground_set(bundle, p)
        yield from bundle_service.products(bundle, p)

    def l_subspace(self, bundle: ToricBundle, p_max: int, budget: Optional[int] = None) -> LSubspace:
        """
        Accumulate the spans of Δ_e for e ∈ GS(p) and products, p = 1..p_max.
        Stops once two consecutive powers add nothing, or the span is everything.
        """
        n = bundle.fan.lattice_rank
        span = Subspace.zero(n)
        quiet = 0
        p_reached = 0
        stabilized = False
        for p in range(1, p_max + 1):
            check_budget(bundle.rank, p, _budget(budget))
            power = bundle_service.sym_power(bundle, p)
            before = span.dim
            for e in self._candidates(bundle, p):
                if span.is_full():
                    break
                hull = polytope_service.affine_hull(bundle_service.polytope_of(power, e))
                if not hull.is_empty:
                    span = span + hull.span
            p_reached = p
            if span.is_full():
                stabilized = True
                break
            quiet = quiet + 1 if span.dim == before else 0
            if quiet >= 2:
                stabilized = True
                break
        logger.debug("L(X,E) has dim %d after p=%d (stabilized=%s)", span.dim, p_reached, stabilized)
        return LSubspace(span, p_reached, stabilized)

    def weight_table(self, bundle: ToricBundle, p: int, l_space: LSubspace,
                     budget: Optional[int] = None) -> WeightTable:
        """
        Quotient point w_f ∈ M_Q / L of every f ∈ ε̄(X, Sym^p E).

        Raises:
            BudgetExceededError: if dim Sym^p E is over budget
            LUnderestimatedError: if some Δ_f spans a direction outside l_space
        """
        check_budget(bundle.rank, p, _budget(budget))
        power = bundle_service.sym_power(bundle, p)
        generators = bundle_service.epsilon_bar(bundle, p).elements
        forms = tuple(quotient_forms(l_space.span))
        points: List[Tuple[int, Vector]] = []
        for index, f in enumerate(generators):
            polytope = bundle_service.polytope_of(power, f)
            hull = polytope_service.affine_hull(polytope)
            if not l_space.span.contains_subspace(hull.span):
                raise LUnderestimatedError(
                    f"Δ of generator {index} leaves the computed L(X,E) (dim {l_space.dim}); raise p_max",
                    generator=index, p=p, l_dim=l_space.dim, hull_dim=hull.dim,
                )
            point = polytope_service.feasible_point(polytope)
            w = tuple(dot(form, point) for form in forms)
            self._check_single_point(polytope, forms, w, index)
            points.append((index, w))
        vertices = polytope_service.extreme_points([w for _, w in points])
        return WeightTable(p, l_space, forms, generators, tuple(points), tuple(vertices))

    def _check_single_point(self, polytope: HPolytope, forms, w: Vector, index: int) -> None:
        for form, value in zip(forms, w):
            high = polytope_service.support(polytope, form)
            low = polytope_service.support(polytope, [-x for x in form])
            if not (high.is_bounded and low.is_bounded and high.value == value == -low.value):
                raise InvariantViolationError(
                    f"Δ of generator {index} does not project to a single quotient point",
                    generator=index,
                )

    def graded_dims(self, bundle: ToricBundle, table: WeightTable, l_max: int,
                    budget: Optional[int] = None) -> GradedDims:
        """
        dim A_(w,l) for l <= l_max: A_(w,1) is spanned by the generators with
        w_f = w and A_(w,l) = span{a·f : a ∈ A_(w - w_f, l - 1)}, inside Sym^(pl).

        Raises:
            BudgetExceededError: if dim Sym^(p l_max) E is over budget
        """
        p, r = table.p, bundle.rank
        check_budget(r, p * l_max, _budget(budget))
        generators = [(f, w) for f, (_, w) in zip(table.generators, table.points)]
        builders: Dict[Vector, EchelonBuilder] = {}
        for f, w in generators:
            builders.setdefault(w, EchelonBuilder(sym_dim(r, p))).add(f)
        level = {w: list(b.rows.values()) for w, b in sorted(builders.items())}
        dims: Dict[int, Dict[Vector, int]] = {1: {w: len(v) for w, v in level.items()}}
        for l in range(2, l_max + 1):
            builders = {}
            for w_left, left in level.items():
                for f, w in generators:
                    bucket = tuple(a + b for a, b in zip(w_left, w))
                    builder = builders.get(bucket)
                    if builder is None:
                        builder = builders[bucket] = EchelonBuilder(sym_dim(r, p * l))
                    for s in left:
                        builder.add(sym_multiply(s, f, r, p * (l - 1), p))
            level = {w: list(b.rows.values()) for w, b in sorted(builders.items())}
            dims[l] = {w: len(v) for w, v in level.items()}
        return GradedDims(p, dims)

    def alpha_estimate(self, bundle: ToricBundle, graded: GradedDims, l_space: LSubspace) -> AlphaEstimate:
        """
        a_l = Σ_w dim A_(w,l) / l^D with D = dim X - dim L + rk E - 1;
        estimate = max of a_l over the upper half of l.
        """
        exponent = bundle.fan.dim - l_space.dim + bundle.rank - 1
        sequence = {
            l: Fraction(total) / Fraction(l) ** exponent if total else Fraction(0)
            for l, total in sorted(graded.totals().items())
        }
        l_max = max(sequence)
        estimate = max(sequence[l] for l in range(l_max // 2 + 1, l_max + 1))
        last, middle = sequence[l_max], sequence[math.ceil(l_max / 2)]
        positive = last > 0 and last >= EVIDENCE_RATIO * middle
        return AlphaEstimate(graded.p, exponent, sequence, estimate, positive)

    def big_split(self, bundle: ToricBundle) -> SplitDecision:
        """
        For E = ⊕ O(D_i): maximize s over u, s, c >= 0 with Σ c_i = 1 and
        <u, v_ρ> + s |v_ρ|_1 <= Σ_i c_i a_ρ^(i). E is big iff s* > 0.

        Raises:
            WrongProvenanceError: if the bundle was not built from divisors
        """
        provenance = bundle.provenance
        if not provenance.is_split:
            raise WrongProvenanceError(
                f"the split decision needs a split bundle, got provenance {provenance.kind!r}",
                provenance=provenance.kind,
            )
        fan = bundle.fan
        n, rows = fan.lattice_rank, provenance.coefficients
        t = len(rows)
        if t == 0:
            # the zero bundle
            return SplitDecision(False, Fraction(0), (), (), (Fraction(0),) * n)
        a_ub = [
            list(ray) + [sum(abs(x) for x in ray)] + [-row[k] for row in rows]
            for k, ray in enumerate(fan.rays)
        ]
        result = linprog(
            [0] * n + [1] + [0] * t,
            A_ub=a_ub, b_ub=[0] * fan.n_rays,
            A_eq=[[0] * (n + 1) + [1] * t], b_eq=[1],
            nonneg=range(n + 1, n + 1 + t),
        )
        if result.status == UNBOUNDED:
            raise UnboundedPolytopeError("split slack LP is unbounded: the fan's rays do not positively span")
        slack = result.value
        weights = result.x[n + 1:]
        certificate = clear_denominators(weights)
        decision = SplitDecision(slack > 0, slack, weights, certificate, result.x[:n])
        if decision.big:
            offsets = [sum(c * row[k] for c, row in zip(certificate, rows)) for k in range(fan.n_rays)]
            check = polytope_service.strict_feasibility_slack(HPolytope.from_rows(fan.rays, offsets))
            if not check.is_positive:
                raise InvariantViolationError(
                    "split certificate does not give a full-dimensional polytope",
                    certificate=list(certificate),
                )
        return decision

    def big_certificate_search(self, bundle: ToricBundle, degree_bound: int,
                               budget: Optional[int] = None) -> CertificateResult:
        """
        First f (in a fixed order) in GS(a) or among products of lower-degree
        ground-set elements, a <= degree_bound, whose Δ_f is full-dimensional.
        NotFound says nothing about bigness.
        """
        tried = 0
        for a in range(1, degree_bound + 1):
            check_budget(bundle.rank, a, _budget(budget))
            power = bundle_service.sym_power(bundle, a)
            for f in self._candidates(bundle, a):
                tried += 1
                slack = polytope_service.strict_feasibility_slack(bundle_service.polytope_of(power, f))
                if slack.is_positive:
                    logger.debug("certificate found in degree %d after %d candidates", a, tried)
                    return CertificateResult(
                        True, f, a, bundle_service.phi_profile(power, f), slack.value, tried,
                    )
        return CertificateResult(False, candidates_tried=tried)

    def bigness_report(self, bundle: ToricBundle, params: BignessParams) -> BignessReport:
        """
        Split decision when the bundle is split, certificate search, then the
        image and α tables as evidence. A budget breach stops the evidence
        stage and is recorded on the report instead of raised.
        """
        report = BignessReport(d=bundle.fan.dim + bundle.rank - 1)
        if bundle.provenance.is_split:
            report.split = self.big_split(bundle)
        try:
            report.certificate = self.big_certificate_search(bundle, params.degree_bound, params.budget)
            report.l_space = self.l_subspace(bundle, params.p_max, params.budget)
            report.exponent = bundle.fan.dim - report.l_space.dim + bundle.rank - 1
            if not report.l_space.stabilized:
                report.warnings.append(
                    f"L(X,E) did not stabilize by p_max={params.p_max}; its dimension is a lower bound"
                )
            dims = sections_service.image_dims(bundle, params.p, params.l_max, params.budget)
            report.image_dims = {l: dim for l, dim in enumerate(dims, start=1)}
            try:
                table = self.weight_table(bundle, params.p, report.l_space, params.budget)
                graded = self.graded_dims(bundle, table, params.l_max, params.budget)
                report.graded_totals = graded.totals()
                report.alpha = self.alpha_estimate(bundle, graded, report.l_space)
            except LUnderestimatedError as exc:
                report.warnings.append(f"α skipped: {exc.message}")
        except BudgetExceededError as exc:
            logger.warning("budget exceeded: %s", exc.message)
            report.budget_error = exc.to_dict()
            report.warnings.append("budget exceeded; the remaining evidence was not computed")
        report.warnings.append(
            "A(p,X,E) is generated by products of ε̄ generators directly; closure of the "
            "ground sets under multiplication is not assumed"
        )

        certificate, split = report.certificate, report.split
        if certificate is not None and certificate.found and split is not None and not split.big:
            raise InvariantViolationError(
                "certificate search found a full-dimensional Δ_f for a split bundle the LP calls not big",
            )
        if certificate is not None and certificate.found:
            report.verdict, report.verdict_source = Verdict.BIG_CERTIFIED, "certificate_search"
        elif split is not None and split.big:
            report.verdict, report.verdict_source = Verdict.BIG_CERTIFIED, "split_lp"
        elif split is not None:
            report.verdict, report.verdict_source = Verdict.NOT_BIG_SPLIT_CERTIFIED, "split_lp"
        elif report.alpha is not None and report.alpha.evidence_positive:
            report.verdict, report.verdict_source = Verdict.EVIDENCE_POSITIVE, "estimator"
        else:
            report.verdict, report.verdict_source = Verdict.EVIDENCE_INCONCLUSIVE, "estimator"
        return report


# Singleton instance
bigness_service = BignessService()
