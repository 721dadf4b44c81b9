# tests/conftest.py
"""
Shared fans and bundles: P¹, P², P³, the Hirzebruch surface F₁, the tangent
bundle of P² and a rank 2 bundle with three lines in one cone.
"""
from pathlib import Path

import pytest

from klyachko.models.bundle import Filtration, ToricBundle
from klyachko.models.fan import Fan
from klyachko.services.bundle_service import bundle_service
from klyachko.services.linalg import Subspace

FIXTURES = Path(__file__).parent / "fixtures"

P1_RAYS = [[1], [-1]]
P1_CONES = [[0], [1]]
P2_RAYS = [[1, 0], [0, 1], [-1, -1]]
P2_CONES = [[0, 1], [1, 2], [2, 0]]
F1_RAYS = [[1, 0], [0, 1], [-1, 1], [0, -1]]
F1_CONES = [[0, 1], [1, 2], [2, 3], [3, 0]]
P3_RAYS = [[1, 0, 0], [0, 1, 0], [0, 0, 1], [-1, -1, -1]]
P3_CONES = [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]]


def line_filtration(line, rank=2) -> Filtration:
    """E ⊃ <line> ⊃ 0 with jumps 0 and 1"""
    return Filtration(rank, ((0, Subspace.full(rank)), (1, Subspace.span([line], rank))))


@pytest.fixture
def p1() -> Fan:
    return Fan.from_lists(1, P1_RAYS, P1_CONES)


@pytest.fixture
def p2() -> Fan:
    return Fan.from_lists(2, P2_RAYS, P2_CONES)


@pytest.fixture
def f1() -> Fan:
    return Fan.from_lists(2, F1_RAYS, F1_CONES)


@pytest.fixture
def p3() -> Fan:
    return Fan.from_lists(3, P3_RAYS, P3_CONES)


@pytest.fixture
def tangent_p2(p2) -> ToricBundle:
    """T_P²: at ray ρ the filtration jumps from E to the line through v_ρ"""
    return ToricBundle(p2, 2, tuple(line_filtration(ray) for ray in P2_RAYS))


@pytest.fixture
def three_lines(p3) -> ToricBundle:
    """Rays 0, 1, 2 carry three distinct lines of Q², which no grading can split"""
    lines = [[1, 0], [0, 1], [1, 1], [1, 2]]
    return ToricBundle(p3, 2, tuple(line_filtration(line) for line in lines))


@pytest.fixture
def split_p1():
    """split_p1([[-1, 0], [2, 0]]) is O(-D_0) ⊕ O(2 D_0) on P¹"""
    fan = Fan.from_lists(1, P1_RAYS, P1_CONES)
    return lambda coefficients: bundle_service.from_divisors(fan, coefficients)


@pytest.fixture
def split_p2():
    fan = Fan.from_lists(2, P2_RAYS, P2_CONES)
    return lambda coefficients: bundle_service.from_divisors(fan, coefficients)


@pytest.fixture
def fixture_path():
    return lambda name: str(FIXTURES / name)
