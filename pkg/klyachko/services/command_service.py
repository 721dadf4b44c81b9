# klyachko/services/command_service.py
"""
Command Service - runs one named command against a loaded model and turns
the outcome (or the failure) into a Report and an exit code.
"""
import logging
import traceback
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Dict, List, Tuple

from ..config import settings
from ..errors import (
    EXIT_BUDGET,
    EXIT_BUG,
    EXIT_INVALID,
    EXIT_OK,
    BudgetExceededError,
    InvariantViolationError,
    KlyachkoError,
)
from ..models.schemas import BignessParams, Report
from ..storage.model_store import LoadedModel
from .bigness_service import bigness_service
from .bundle_service import bundle_service
from .compatibility_service import compatibility_service
from .polytope_service import polytope_service
from .report_service import display_decimal, report_service
from .sections_service import log_log_slope, sections_service
from .symmetric import check_budget, sym_dim

logger = logging.getLogger(__name__)

ESTIMATOR_LABEL = "estimator, not a decision"


@dataclass
class Outcome:
    results: Dict[str, Any] = field(default_factory=dict)
    verdicts: List[Dict[str, Any]] = field(default_factory=list)
    warnings: List[str] = field(default_factory=list)


def parse_element(text: str) -> Tuple[Fraction, ...]:
    """ "1,0,1/2" -> (1, 0, 1/2) """
    try:
        return tuple(Fraction(part.strip()) for part in text.split(","))
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"cannot read element {text!r}: expected comma-separated integers or a/b")


class CommandService:
    """Service that dispatches CLI commands to the toolkit services"""

    def __init__(self):
        self.handlers: Dict[str, Callable[[LoadedModel, dict], Outcome]] = {
            "validate": self.validate,
            "h0": self.h0,
            "polytope": self.polytope,
            "image-dims": self.image_dims,
            "l-span": self.l_span,
            "weights": self.weights,
            "alpha": self.alpha,
            "big": self.big,
        }

    def run(self, command: str, model: LoadedModel, params: dict) -> Tuple[Report, int]:
        """
        Run a command. Exit codes: 0 computed, 1 invalid input, 2 budget
        exceeded, 3 internal invariant violation or unexpected failure.
        """
        handler = self.handlers[command]
        outcome = Outcome(warnings=list(model.warnings))
        error, code = None, EXIT_OK
        try:
            result = handler(model, params)
            outcome.results.update(result.results)
            outcome.verdicts.extend(result.verdicts)
            outcome.warnings.extend(result.warnings)
            if "budget_error" in outcome.results:
                error = outcome.results.pop("budget_error")
                code = EXIT_BUDGET
        except BudgetExceededError as exc:
            logger.warning("⚠️ %s", exc.message)
            error, code = exc.to_dict(), EXIT_BUDGET
        except InvariantViolationError as exc:
            logger.error("💥 invariant violated: %s", exc.message)
            error, code = exc.to_dict(), EXIT_BUG
        except KlyachkoError as exc:
            logger.error("❌ %s", exc.message)
            error, code = exc.to_dict(), EXIT_INVALID
        except ValueError as exc:
            logger.error("❌ %s", exc)
            error, code = {"type": "ValueError", "message": str(exc)}, EXIT_INVALID
        except Exception as exc:
            logger.error("💥 unexpected failure in %s:\n%s", command, traceback.format_exc())
            error, code = {"type": type(exc).__name__, "message": str(exc)}, EXIT_BUG
        report = report_service.build(
            command, params, model.digest, outcome.results, outcome.verdicts, outcome.warnings, error,
        )
        return report, code

    def validate(self, model: LoadedModel, params: dict) -> Outcome:
        fan, bundle = model.fan, model.bundle
        cones = []
        for index, grading in sorted(model.gradings.items()):
            compatibility_service.verify_grading(bundle, grading)
            cones.append({
                "cone": index,
                "rays": list(grading.cone.ray_indices),
                "characters": [list(chi) for chi in grading.characters()],
                "piece_dims": [space.dim for _, space in grading.pieces],
            })
        results = {
            "fan": {
                "lattice_rank": fan.lattice_rank,
                "rays": len(fan.rays),
                "max_cones": len(fan.max_cones),
                "complete": model.complete,
                "projective_asserted": bool(model.spec.assertions.projective),
            },
            "bundle": {"rank": bundle.rank, "provenance": bundle.provenance.kind},
            "cones": cones,
        }
        verdict = {
            "verdict": "Compatible",
            "certificate": "every maximal-cone grading reconstructs every ray filtration",
        }
        return Outcome(results, [verdict])

    def h0(self, model: LoadedModel, params: dict) -> Outcome:
        p = params.get("sym", 1)
        sections = sections_service.h0_sym(model.bundle, p, params.get("budget"))
        results: Dict[str, Any] = {
            "sym": p,
            "fiber_dim": sym_dim(model.bundle.rank, p),
            "total_dim": sections.total_dim,
            "weights": [{"u": list(u), "dim": space.dim} for u, space in sections.entries],
        }
        verdicts = []
        if params.get("check"):
            power = bundle_service.sym_power(model.bundle, p)
            spanning = sections_service.h0_spanning_dim(power)
            results["spanning_dim"] = spanning
            if spanning != sections.total_dim:
                raise InvariantViolationError(
                    f"H0 by weight spaces ({sections.total_dim}) differs from the ground-set span ({spanning})",
                )
            verdicts.append({"verdict": "H0Consistent", "certificate": "weight-space and ground-set counts agree"})
        return Outcome(results, verdicts)

    def polytope(self, model: LoadedModel, params: dict) -> Outcome:
        p = params.get("sym", 1)
        check_budget(model.bundle.rank, p, params.get("budget") or settings.sym_budget)
        power = bundle_service.sym_power(model.bundle, p)
        element = parse_element(params["element"])
        if len(element) != power.rank:
            raise ValueError(f"element has {len(element)} entries, Sym^{p} E has dimension {power.rank}")
        if not any(element):
            raise ValueError("element must be nonzero")
        polytope = bundle_service.polytope_of(power, element)
        hull = polytope_service.affine_hull(polytope)
        slack = polytope_service.strict_feasibility_slack(polytope)
        points = polytope_service.lattice_points(polytope)
        results = {
            "element": list(element),
            "sym": p,
            "phi": list(bundle_service.phi_profile(power, element)),
            "inequalities": [
                {"normal": list(n), "offset": c} for n, c in zip(polytope.normals, polytope.offsets)
            ],
            "empty": hull.is_empty,
            "dim": hull.dim,
            "slack": slack.value,
            "lattice_count": len(points),
            "lattice_points": [list(u) for u in points],
        }
        return Outcome(results)

    def image_dims(self, model: LoadedModel, params: dict) -> Outcome:
        p, l_max = params["p"], params["l_max"]
        budget = params.get("budget") or settings.sym_budget
        bundle = model.bundle
        check_budget(bundle.rank, p * l_max, budget)
        dims = sections_service.image_dims(bundle, p, l_max, budget)
        table = []
        for l, dim in enumerate(dims, start=1):
            h0 = sections_service.h0_sym(bundle, p * l, budget).total_dim
            table.append({"l": l, "image_dim": dim, "h0_sym_pl": h0, "surjective": dim == h0})
        results: Dict[str, Any] = {"p": p, "l_max": l_max, "d": bundle.fan.dim + bundle.rank - 1, "table": table}
        slope = log_log_slope(dict(enumerate(dims, start=1)), l_max // 2 + 1, l_max)
        results["growth_slope_display"] = None if slope is None else display_decimal(Fraction(slope))
        return Outcome(results)

    def l_span(self, model: LoadedModel, params: dict) -> Outcome:
        l_space = bigness_service.l_subspace(model.bundle, params["p_max"], params.get("budget"))
        results = {
            "dim": l_space.dim,
            "dim_X": model.fan.dim,
            "basis": [list(v) for v in l_space.span.basis],
            "p_reached": l_space.p_reached,
            "stabilized": l_space.stabilized,
        }
        warnings = [] if l_space.stabilized else [
            f"L(X,E) did not stabilize by p_max={params['p_max']}; its dimension is a lower bound",
        ]
        return Outcome(results, warnings=warnings)

    def weights(self, model: LoadedModel, params: dict) -> Outcome:
        bundle = model.bundle
        l_space = bigness_service.l_subspace(bundle, params["p_max"], params.get("budget"))
        table = bigness_service.weight_table(bundle, params["p"], l_space, params.get("budget"))
        results = {
            "p": table.p,
            "l_dim": l_space.dim,
            "l_stabilized": l_space.stabilized,
            "quotient_basis": [list(a) for a in table.quotient_basis],
            "points": [
                {"generator": index, "element": list(table.generators[index]), "w": list(w)}
                for index, w in table.points
            ],
            "hull_vertices": [list(v) for v in table.hull_vertices],
        }
        return Outcome(results)

    def alpha(self, model: LoadedModel, params: dict) -> Outcome:
        bundle = model.bundle
        p, l_max = params["p"], params["l_max"]
        budget = params.get("budget") or settings.sym_budget
        check_budget(bundle.rank, p * l_max, budget)
        l_space = bigness_service.l_subspace(bundle, params["p_max"], budget)
        table = bigness_service.weight_table(bundle, p, l_space, budget)
        graded = bigness_service.graded_dims(bundle, table, l_max, budget)
        alpha = bigness_service.alpha_estimate(bundle, graded, l_space)
        results = {
            "p": p,
            "l_max": l_max,
            "l_dim": l_space.dim,
            "exponent": alpha.exponent,
            "sequence": [
                {"l": l, "graded_dim": graded.totals()[l], "alpha": a, "display": display_decimal(a)}
                for l, a in alpha.sequence.items()
            ],
            "estimate": alpha.estimate,
            "estimate_display": display_decimal(alpha.estimate),
            "label": ESTIMATOR_LABEL,
        }
        verdict = {
            "verdict": "EvidencePositive" if alpha.evidence_positive else "EvidenceInconclusive",
            "source": "estimator",
            "certificate": ESTIMATOR_LABEL,
        }
        warnings = [] if l_space.stabilized else [
            f"L(X,E) did not stabilize by p_max={params['p_max']}; its dimension is a lower bound",
        ]
        return Outcome(results, [verdict], warnings)

    def big(self, model: LoadedModel, params: dict) -> Outcome:
        bundle = model.bundle
        bigness = BignessParams(**{k: v for k, v in params.items() if v is not None})
        report = bigness_service.bigness_report(bundle, bigness)
        results: Dict[str, Any] = {"d": report.d, "exponent": report.exponent}
        if report.l_space is not None:
            results["l_space"] = {
                "dim": report.l_space.dim,
                "p_reached": report.l_space.p_reached,
                "stabilized": report.l_space.stabilized,
            }
        if report.split is not None:
            results["split"] = {
                "big": report.split.big,
                "slack": report.split.slack,
                "weights": list(report.split.weights),
                "certificate": list(report.split.certificate),
                "point": list(report.split.point),
            }
        if report.certificate is not None:
            results["certificate_search"] = {
                "found": report.certificate.found,
                "degree": report.certificate.degree,
                "element": None if report.certificate.element is None else list(report.certificate.element),
                "phi": None if report.certificate.phi is None else list(report.certificate.phi),
                "slack": report.certificate.slack,
                "candidates_tried": report.certificate.candidates_tried,
            }
        results["image_dims"] = [{"l": l, "image_dim": dim} for l, dim in report.image_dims.items()]
        if report.alpha is not None:
            results["alpha"] = {
                "sequence": [
                    {"l": l, "graded_dim": report.graded_totals[l], "alpha": a, "display": display_decimal(a)}
                    for l, a in report.alpha.sequence.items()
                ],
                "estimate": report.alpha.estimate,
                "estimate_display": display_decimal(report.alpha.estimate),
                "evidence_positive": report.alpha.evidence_positive,
                "label": ESTIMATOR_LABEL,
            }
        verdict: Dict[str, Any] = {"verdict": report.verdict, "source": report.verdict_source}
        if report.verdict_source == "certificate_search":
            verdict["certificate"] = {
                "element": list(report.certificate.element),
                "degree": report.certificate.degree,
                "phi": list(report.certificate.phi),
                "slack": report.certificate.slack,
            }
        elif report.verdict_source == "split_lp":
            verdict["certificate"] = {
                "slack": report.split.slack,
                "weights": list(report.split.weights),
                "integer_weights": list(report.split.certificate),
            }
        else:
            verdict["certificate"] = ESTIMATOR_LABEL
        if report.budget_error is not None:
            results["budget_error"] = report.budget_error
        return Outcome(results, [verdict], list(report.warnings))


# Singleton instance
command_service = CommandService()
