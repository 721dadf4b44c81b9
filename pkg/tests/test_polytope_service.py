# tests/test_polytope_service.py
import itertools
import random
from fractions import Fraction

import pytest

from klyachko.errors import EmptyOperandError, UnboundedPolytopeError
from klyachko.services.polytope_service import BOUNDED, EMPTY, HPolytope, _support, polytope_service
from klyachko.services.simplex import UNBOUNDED

SQUARE_NORMALS = [[1, 0], [0, 1], [-1, 0], [0, -1]]
P2_NORMALS = [[1, 0], [0, 1], [-1, -1]]


def box(a, b):
    """[-a, a] x [-b, b]"""
    return HPolytope.from_rows(SQUARE_NORMALS, [a, b, a, b])


def test_support_of_box():
    h = polytope_service.support(box(2, 1), [1, 1])
    assert h.status == BOUNDED
    assert h.value == 3


def test_support_statuses():
    half_plane = HPolytope.from_rows([[1, 0]], [0])
    assert polytope_service.support(half_plane, [-1, 0]).status == UNBOUNDED
    empty = HPolytope.from_rows([[1], [-1]], [-1, -1])
    assert polytope_service.support(empty, [1]).status == EMPTY
    assert polytope_service.is_empty(empty)


def test_normals_must_be_primitive():
    with pytest.raises(ValueError):
        HPolytope.from_rows([[2, 0]], [1])


def test_slack_detects_dimension():
    full = HPolytope.from_rows(P2_NORMALS, [0, 0, 2])
    segment = HPolytope.from_rows(SQUARE_NORMALS, [1, 0, 0, 0])
    point = HPolytope.from_rows(P2_NORMALS, [0, 0, 0])
    empty = HPolytope.from_rows(P2_NORMALS, [0, 0, -1])
    assert polytope_service.strict_feasibility_slack(full).is_positive
    assert polytope_service.strict_feasibility_slack(segment).value == 0
    assert polytope_service.strict_feasibility_slack(point).value == 0
    assert polytope_service.strict_feasibility_slack(empty).value < 0


def test_affine_hull_dimensions():
    assert polytope_service.dimension(HPolytope.from_rows(P2_NORMALS, [0, 0, 2])) == 2
    segment = polytope_service.affine_hull(HPolytope.from_rows(SQUARE_NORMALS, [1, 0, 0, 0]))
    assert segment.dim == 1
    assert segment.span.contains([1, 0])
    assert polytope_service.dimension(HPolytope.from_rows(P2_NORMALS, [0, 0, 0])) == 0
    assert polytope_service.affine_hull(HPolytope.from_rows(P2_NORMALS, [0, 0, -1])).is_empty


def test_lattice_points_of_triangle():
    triangle = HPolytope.from_rows(P2_NORMALS, [0, 0, 2])
    points = polytope_service.lattice_points(triangle)
    assert len(points) == 6
    assert points == sorted(points)
    assert (0, 0) in points and (-2, 0) in points


def test_lattice_points_need_bounded_polytope():
    with pytest.raises(UnboundedPolytopeError):
        polytope_service.lattice_points(HPolytope.from_rows([[1, 0], [0, 1]], [0, 0]))


def test_rational_polytope_without_lattice_points():
    sliver = HPolytope.from_rows([[1], [-1]], [Fraction(2, 3), Fraction(-1, 3)])
    assert not polytope_service.is_empty(sliver)
    assert not polytope_service.has_lattice_point(sliver)


def test_minkowski_combination_and_containment():
    triangle = HPolytope.from_rows(P2_NORMALS, [0, 0, 1])
    doubled = polytope_service.minkowski_combination([triangle], [2], P2_NORMALS)
    assert doubled.offsets == (0, 0, 2)
    assert polytope_service.contains_polytope(doubled, triangle)
    assert not polytope_service.contains_polytope(triangle, doubled)


def test_minkowski_of_empty_operand_fails():
    empty = HPolytope.from_rows(P2_NORMALS, [0, 0, -1])
    with pytest.raises(EmptyOperandError):
        polytope_service.minkowski_sum(empty, empty, P2_NORMALS)


def test_extreme_points():
    points = [(0, 0), (2, 0), (0, 2), (1, 1), (Fraction(1, 2), Fraction(1, 2))]
    assert polytope_service.extreme_points(points) == [(0, 0), (0, 2), (2, 0)]


def _box_scan(polytope, radius):
    ranges = [range(-radius, radius + 1)] * polytope.ambient_dim
    return [u for u in itertools.product(*ranges) if polytope.contains_point(u)]


def _vertices(polytope):
    """Vertex enumeration in the plane: feasible meets of two independent facet lines"""
    found = set()
    for (n1, c1), (n2, c2) in itertools.combinations(zip(polytope.normals, polytope.offsets), 2):
        det = n1[0] * n2[1] - n1[1] * n2[0]
        if det == 0:
            continue
        u = ((c1 * n2[1] - n1[1] * c2) / det, (n1[0] * c2 - c1 * n2[0]) / det)
        if polytope.contains_point(u):
            found.add(u)
    return sorted(found)


@pytest.mark.parametrize("normals", [SQUARE_NORMALS, P2_NORMALS], ids=["square", "triangle"])
def test_random_polytopes_against_vertex_enumeration(normals):
    rng = random.Random(20240611)
    for _ in range(100):
        p = HPolytope.from_rows(normals, [rng.randint(-2, 3) for _ in normals])
        q = HPolytope.from_rows(normals, [rng.randint(-2, 3) for _ in normals])

        # full-dimensional exactly when the slack is positive, empty exactly when it is negative
        slack = polytope_service.strict_feasibility_slack(p)
        dim = polytope_service.dimension(p)
        assert (slack.value > 0) == (dim == 2)
        assert (slack.value < 0) == (dim is None)

        # lattice points agree with a box scan
        assert polytope_service.lattice_points(p) == _box_scan(p, 7)

        vertices = _vertices(p)
        assert (not vertices) == polytope_service.is_empty(p)
        if not vertices:
            continue
        assert polytope_service.extreme_points(vertices) == vertices
        direction = [rng.randint(-3, 3), rng.randint(-3, 3)]
        assert polytope_service.support(p, direction).value == max(
            u[0] * direction[0] + u[1] * direction[1] for u in vertices
        )

        if polytope_service.is_empty(q):
            continue
        total = polytope_service.minkowski_sum(p, q, normals)
        sums = [(v[0] + w[0], v[1] + w[1]) for v in vertices for w in _vertices(q)]
        assert _vertices(total) == polytope_service.extreme_points(sums)
        assert (
            polytope_service.support(total, direction).value
            == polytope_service.support(p, direction).value + polytope_service.support(q, direction).value
        )


def test_support_values_are_memoised():
    polytope = box(3, 2)
    before = _support.cache_info()
    assert before.maxsize == 4096
    first = polytope_service.support(polytope, [1, -1])
    second = polytope_service.lp_support(polytope, (Fraction(1), Fraction(-1)))
    assert first == second
    assert _support.cache_info().hits > before.hits
