# klyachko/models/bigness.py
"""
Result records of the bigness analysis: L(X,E), the weight table W_p, graded
dimensions of A(p,X,E), α, the split decision, certificates and the verdict.
"""
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from ..services.linalg import Subspace, Vector

IntVector = Tuple[int, ...]


class Verdict(str, Enum):
    BIG_CERTIFIED = "BigCertified"
    NOT_BIG_SPLIT_CERTIFIED = "NotBigSplitCertified"
    EVIDENCE_POSITIVE = "EvidencePositive"
    EVIDENCE_INCONCLUSIVE = "EvidenceInconclusive"


@dataclass(frozen=True)
class LSubspace:
    """Lower bound for L(X,E), exact once stabilized"""
    span: Subspace
    p_reached: int
    stabilized: bool

    @property
    def dim(self) -> int:
        return self.span.dim


@dataclass(frozen=True)
class WeightTable:
    """W_p: quotient point w_f of every generator f of ε̄(X, Sym^p E)"""
    p: int
    l_space: LSubspace
    quotient_basis: Tuple[IntVector, ...]
    generators: Tuple[Vector, ...]
    points: Tuple[Tuple[int, Vector], ...]
    hull_vertices: Tuple[Vector, ...]

    @property
    def quotient_rank(self) -> int:
        return len(self.quotient_basis)


@dataclass(frozen=True)
class GradedDims:
    """dim A_(w,l) for l = 1..l_max, keyed by l then by w"""
    p: int
    table: Dict[int, Dict[Vector, int]]

    def totals(self) -> Dict[int, int]:
        return {l: sum(buckets.values()) for l, buckets in self.table.items()}


@dataclass(frozen=True)
class AlphaEstimate:
    """
    Finite-l statistic for α(p,X,E). This is an estimator: the limsup itself
    is never decided from finitely many l.
    """
    p: int
    exponent: int
    sequence: Dict[int, Fraction]
    estimate: Fraction
    evidence_positive: bool


@dataclass(frozen=True)
class SplitDecision:
    """Exact bigness decision for ⊕ O(D_i) from the slack LP over the simplex of c"""
    big: bool
    slack: Fraction
    weights: Tuple[Fraction, ...]
    certificate: Tuple[int, ...]
    point: Tuple[Fraction, ...]


@dataclass(frozen=True)
class CertificateResult:
    """Sufficient certificate: f ∈ Sym^a E with dim Δ_f = dim X"""
    found: bool
    element: Optional[Vector] = None
    degree: Optional[int] = None
    phi: Optional[Tuple[int, ...]] = None
    slack: Optional[Fraction] = None
    candidates_tried: int = 0


@dataclass
class BignessReport:
    """Everything the bigness analysis found, assembled in a fixed order"""
    d: int
    exponent: Optional[int] = None
    l_space: Optional[LSubspace] = None
    split: Optional[SplitDecision] = None
    certificate: Optional[CertificateResult] = None
    image_dims: Dict[int, int] = field(default_factory=dict)
    graded_totals: Dict[int, int] = field(default_factory=dict)
    alpha: Optional[AlphaEstimate] = None
    verdict: Verdict = Verdict.EVIDENCE_INCONCLUSIVE
    verdict_source: str = "estimator"
    warnings: List[str] = field(default_factory=list)
    budget_error: Optional[dict] = None
