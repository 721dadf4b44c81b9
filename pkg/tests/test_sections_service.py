# tests/test_sections_service.py
import pytest

from klyachko.errors import BudgetExceededError, UnboundedSupportError
from klyachko.models.fan import Fan
from klyachko.services.bundle_service import bundle_service
from klyachko.services.polytope_service import polytope_service
from klyachko.services.sections_service import log_log_slope, sections_service
from klyachko.storage.model_store import parse_model


def test_line_bundles_on_p1(split_p1):
    for d in range(0, 11):
        assert sections_service.h0(split_p1([[d, 0]])).total_dim == d + 1
    assert sections_service.h0(split_p1([[-1, 0]])).total_dim == 0


def test_line_bundles_on_p2(split_p2):
    for d in range(0, 6):
        bundle = split_p2([[d, 0, 0]])
        h0 = sections_service.h0(bundle).total_dim
        assert h0 == (d + 1) * (d + 2) // 2
        # the weights are exactly the lattice points of the divisor polytope
        polytope = bundle_service.polytope_of(bundle, (1,))
        assert sections_service.h0(bundle).weights() == polytope_service.lattice_points(polytope)


def test_tangent_bundle_of_p2(tangent_p2):
    sections = sections_service.h0(tangent_p2)
    assert sections.total_dim == 8
    by_weight = {u: space.dim for u, space in sections.entries}
    assert by_weight[(0, 0)] == 2
    assert sorted(u for u, dim in by_weight.items() if dim == 1) == [
        (-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0),
    ]
    assert sections_service.h0_spanning_dim(tangent_p2) == 8


def test_h0_of_symmetric_power(split_p1):
    # Sym² (O(1) ⊕ O(1)) = O(2)^3
    assert sections_service.h0_sym(split_p1([[1, 0], [1, 0]]), 2).total_dim == 9


def test_unbounded_support_needs_a_spanning_fan():
    quadrant = Fan.from_lists(2, [[1, 0], [0, 1]], [[0, 1]])
    bundle = bundle_service.from_divisors(quadrant, [[0, 0]])
    with pytest.raises(UnboundedSupportError):
        sections_service.h0(bundle)


def test_image_dims_of_line_bundles(split_p1, split_p2):
    assert sections_service.image_dims(split_p1([[1, 0]]), 1, 10) == [l + 1 for l in range(1, 11)]
    assert sections_service.image_dims(split_p2([[1, 0, 0]]), 1, 4) == [3, 6, 10, 15]


def test_image_dims_of_tangent_bundle(tangent_p2):
    dims = sections_service.image_dims(tangent_p2, 1, 5)
    # multiplication is surjective here, so the image is all of H0(Sym^l) = (l+1)^3
    assert dims == [8, 27, 64, 125, 216]
    assert dims == sorted(dims)
    for l, dim in enumerate(dims, start=1):
        assert dim == sections_service.h0_sym(tangent_p2, l).total_dim
    assert sections_service.image_dim(tangent_p2, 1, 2) == dims[1]
    slope = log_log_slope(dict(enumerate(dims, start=1)), 3, 5)
    assert 2.3 < slope < 2.5


def test_image_dims_against_symmetric_powers(split_p1, split_p2, tangent_p2):
    bundles = [
        split_p1([[1, 0], [-1, 0]]),
        split_p1([[0, 0], [0, 0]]),
        split_p2([[1, 0, 0], [0, 0, -1]]),
        tangent_p2,
    ]
    for bundle in bundles:
        for p in (1, 2):
            dims = sections_service.image_dims(bundle, p, 3)
            assert dims[0] == sections_service.h0_sym(bundle, p).total_dim
            for l, dim in enumerate(dims, start=1):
                assert dim <= sections_service.h0_sym(bundle, p * l).total_dim
            if sections_service.h0_sym(bundle, p).weights().count((0,) * bundle.fan.dim):
                assert dims == sorted(dims)


@pytest.mark.parametrize("name", [
    "p1_o2.json", "p2_o2.json", "tp2.json", "p1_split_big.json", "p1_split_not_big.json", "p1_trivial_rank2.json",
])
def test_both_descriptions_of_sections_agree(fixture_path, name):
    bundle = parse_model(fixture_path(name)).bundle
    assert sections_service.h0(bundle).total_dim == sections_service.h0_spanning_dim(bundle)


def test_image_dims_respect_budget(tangent_p2):
    with pytest.raises(BudgetExceededError):
        sections_service.image_dims(tangent_p2, 1, 50, budget=10)


def test_log_log_slope():
    assert abs(log_log_slope({l: l ** 3 for l in range(1, 8)}, 3, 7) - 3.0) < 1e-9
    assert log_log_slope({1: 4}, 1, 1) is None
