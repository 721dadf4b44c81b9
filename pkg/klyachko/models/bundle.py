# klyachko/models/bundle.py
"""
Klyachko data: per-ray Z-filtrations of the fiber E, toric bundles built from
them, per-cone gradings and the witnesses returned when no grading exists.
"""
from bisect import bisect_left
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from ..errors import FiltrationError, ShapeMismatchError
from ..services.linalg import EchelonBuilder, Subspace, Vector, solve
from .fan import Cone, Fan

IntVector = Tuple[int, ...]


@dataclass(frozen=True)
class Filtration:
    """
    Decreasing filtration E = S_0 ⊋ S_1 ⊋ ... ⊋ S_k ⊋ 0.
    E(j) = S_i for the smallest i with j <= jump_i, and E(j) = 0 past the last jump.
    """
    ambient_dim: int
    steps: Tuple[Tuple[int, Subspace], ...]

    def __post_init__(self):
        if self.ambient_dim > 0 and not self.steps:
            raise FiltrationError("a nonzero fiber needs at least one filtration step")
        previous = None
        for k, (jump, space) in enumerate(self.steps):
            if not isinstance(jump, int) or isinstance(jump, bool):
                raise FiltrationError(f"jump {jump!r} of step {k} is not an integer", step=k)
            if space.ambient_dim != self.ambient_dim:
                raise FiltrationError(f"step {k} lives in Q^{space.ambient_dim}, expected Q^{self.ambient_dim}", step=k)
            if space.is_zero():
                raise FiltrationError(f"step {k} is the zero space", step=k)
            if previous is None:
                if not space.is_full():
                    raise FiltrationError("the first step must be the whole fiber", step=k)
            else:
                prev_jump, prev_space = previous
                if jump <= prev_jump:
                    raise FiltrationError(f"jumps must increase strictly (step {k})", step=k)
                if space.dim >= prev_space.dim or not prev_space.contains_subspace(space):
                    raise FiltrationError(f"step {k} is not strictly inside step {k - 1}", step=k)
            previous = (jump, space)

    @classmethod
    def from_levels(cls, ambient_dim: int, levels: Iterable[int],
                    space_at: Callable[[int], Subspace]) -> "Filtration":
        """
        Build the filtration of a step function known to change only at the
        given levels; repeated and zero steps are merged away.
        """
        ordered = sorted(set(levels))
        spaces = [space_at(j) for j in ordered]
        steps = []
        for k, (j, space) in enumerate(zip(ordered, spaces)):
            if space.is_zero():
                break
            if k + 1 < len(spaces) and spaces[k + 1] == space:
                continue
            steps.append((j, space))
        return cls(ambient_dim, tuple(steps))

    @classmethod
    def trivial(cls, ambient_dim: int, jump: int) -> "Filtration":
        if ambient_dim == 0:
            return cls(0, ())
        return cls(ambient_dim, ((jump, Subspace.full(ambient_dim)),))

    @property
    def jumps(self) -> Tuple[int, ...]:
        return tuple(j for j, _ in self.steps)

    @property
    def min_jump(self) -> int:
        return self.steps[0][0]

    @property
    def max_jump(self) -> int:
        return self.steps[-1][0]

    def space_at(self, j) -> Subspace:
        """E(j)"""
        k = bisect_left(self.jumps, j)
        if k == len(self.steps):
            return Subspace.zero(self.ambient_dim)
        return self.steps[k][1]

    def phi(self, e: Sequence) -> int:
        """max { j : e ∈ E(j) } for e != 0"""
        if not any(e):
            raise ValueError("phi is only defined for nonzero vectors")
        for jump, space in reversed(self.steps):
            if space.contains(e):
                return jump
        raise ValueError("vector is not in the fiber")

    def adapted_basis(self) -> List[Tuple[Vector, int]]:
        """
        Basis of E with weights such that every step is spanned by the basis
        vectors of weight >= its jump: echelon basis of the deepest step,
        extended step by step outward.
        """
        builder = EchelonBuilder(self.ambient_dim)
        basis: List[Tuple[Vector, int]] = []
        for jump, space in reversed(self.steps):
            for v in space.basis:
                if builder.add(v):
                    basis.append((v, jump))
        return basis


@dataclass(frozen=True)
class Provenance:
    """Where a bundle came from: explicit data, a sum of line bundles, or Sym^p"""
    kind: str = "explicit"
    coefficients: Optional[Tuple[Tuple[int, ...], ...]] = None
    p: Optional[int] = None
    base: Optional["ToricBundle"] = None

    @property
    def is_split(self) -> bool:
        return self.kind == "split"


@dataclass(frozen=True)
class ToricBundle:
    """A toric vector bundle given by one filtration of E = Q^rank per ray"""
    fan: Fan
    rank: int
    filtrations: Tuple[Filtration, ...]
    provenance: Provenance = field(default_factory=Provenance)

    def __post_init__(self):
        if len(self.filtrations) != self.fan.n_rays:
            raise ShapeMismatchError(
                f"{len(self.filtrations)} filtrations for {self.fan.n_rays} rays",
                filtrations=len(self.filtrations), rays=self.fan.n_rays,
            )
        for i, filtration in enumerate(self.filtrations):
            if filtration.ambient_dim != self.rank:
                raise ShapeMismatchError(
                    f"filtration {i} lives in Q^{filtration.ambient_dim}, expected Q^{self.rank}",
                    ray=i,
                )

    @cached_property
    def _hash(self) -> int:
        return hash((self.fan, self.rank, self.filtrations, self.provenance))

    def __hash__(self) -> int:
        return self._hash


@dataclass(frozen=True)
class ConeGrading:
    """E = ⊕ pieces, one character χ per piece, recovering every ray filtration of the cone"""
    cone: Cone
    pieces: Tuple[Tuple[IntVector, Subspace], ...]

    def characters(self) -> Tuple[IntVector, ...]:
        return tuple(chi for chi, _ in self.pieces)

    def components(self, e: Sequence) -> List[Tuple[IntVector, bool]]:
        """(χ, component of e in piece χ is nonzero) for every piece"""
        columns = [v for _, space in self.pieces for v in space.basis]
        n = len(e)
        rows = [[v[i] for v in columns] for i in range(n)]
        coeffs = solve(rows, e, len(columns))
        if coeffs is None:
            raise ValueError("vector is not in the graded space")
        out, start = [], 0
        for chi, space in self.pieces:
            chunk = coeffs[start:start + space.dim]
            out.append((chi, any(chunk)))
            start += space.dim
        return out


@dataclass(frozen=True)
class IncompatibilityWitness:
    """Why a cone admits no compatible grading"""
    cone_index: Optional[int]
    kind: str
    detail: Dict[str, Any]

    def to_dict(self) -> Dict[str, Any]:
        return {"cone": self.cone_index, "kind": self.kind, "detail": self.detail}


@dataclass(frozen=True)
class CompatibilityResult:
    grading: Optional[ConeGrading] = None
    witness: Optional[IncompatibilityWitness] = None

    @property
    def is_compatible(self) -> bool:
        return self.grading is not None


@dataclass(frozen=True)
class GroundSet:
    """Finite spanning set of fiber vectors in Sym^degree coordinates"""
    elements: Tuple[Vector, ...]
    degree: int

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)
