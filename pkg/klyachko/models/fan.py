# klyachko/models/fan.py
"""
Fans in N = Z^r: primitive ray generators and maximal cones given by ray indices.
"""
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

IntVector = Tuple[int, ...]


@dataclass(frozen=True)
class Cone:
    """A cone spanned by some rays of a fan; index is the maximal-cone index when known"""
    ray_indices: Tuple[int, ...]
    index: Optional[int] = None


@dataclass(frozen=True)
class Fan:
    """A fan given by its rays v_ρ and its maximal cones"""
    lattice_rank: int
    rays: Tuple[IntVector, ...]
    max_cones: Tuple[Tuple[int, ...], ...]

    @classmethod
    def from_lists(cls, lattice_rank: int, rays: Sequence[Sequence[int]],
                   max_cones: Sequence[Sequence[int]]) -> "Fan":
        return cls(
            lattice_rank,
            tuple(tuple(int(x) for x in ray) for ray in rays),
            tuple(tuple(int(i) for i in cone) for cone in max_cones),
        )

    @property
    def dim(self) -> int:
        """Dimension of the toric variety"""
        return self.lattice_rank

    @property
    def n_rays(self) -> int:
        return len(self.rays)

    def cone(self, index: int) -> Cone:
        return Cone(self.max_cones[index], index)

    def cones(self) -> Tuple[Cone, ...]:
        return tuple(self.cone(k) for k in range(len(self.max_cones)))

    def cone_rays(self, cone: Cone) -> Tuple[IntVector, ...]:
        return tuple(self.rays[i] for i in cone.ray_indices)
