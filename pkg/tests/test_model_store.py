# tests/test_model_store.py
import pytest

from klyachko.errors import ModelInvalidError
from klyachko.services.compatibility_service import compatibility_service
from klyachko.storage.model_store import ModelStore, parse_model


def paths(exc):
    return [d.path for d in exc.diagnostics]


def test_split_model_loads(fixture_path):
    model = parse_model(fixture_path("p1_o2.json"))
    assert model.bundle.rank == 1
    assert model.bundle.provenance.is_split
    assert model.complete
    assert len(model.digest) == 64
    assert sorted(model.gradings) == [0, 1]


def test_klyachko_model_accepts_rational_strings(fixture_path):
    model = parse_model(fixture_path("tp2.json"))
    assert model.bundle.rank == 2
    assert model.bundle.filtrations[2].steps[1][1].basis == ((1, 1),)
    assert any("projectivity asserted" in w for w in model.warnings)


def test_models_are_memoised_by_digest(fixture_path):
    store = ModelStore()
    first = store.load(fixture_path("p2_o2.json"))
    assert store.load(fixture_path("p2_o2.json")) is first
    assert list(store.local_storage) == [first.digest]


def test_missing_filtration(fixture_path):
    with pytest.raises(ModelInvalidError) as info:
        parse_model(fixture_path("missing_filtration.json"))
    assert paths(info.value) == ["/bundle/filtrations"]
    assert len(info.value.context["digest"]) == 64


def test_syntax_error_has_position(fixture_path):
    with pytest.raises(ModelInvalidError) as info:
        parse_model(fixture_path("syntax_error.json"))
    diagnostic = info.value.diagnostics[0]
    assert diagnostic.line == 4
    assert diagnostic.column is not None


def test_three_lines_are_rejected_per_cone(fixture_path):
    with pytest.raises(ModelInvalidError) as info:
        parse_model(fixture_path("three_lines_octant.json"))
    assert "/max_cones/0" in paths(info.value)
    first = info.value.diagnostics[0]
    assert first.detail["kind"] == "distributivity"


def test_incomplete_fan_is_rejected(fixture_path):
    with pytest.raises(ModelInvalidError) as info:
        parse_model(fixture_path("incomplete_fan.json"))
    assert paths(info.value) == ["/max_cones"]


def test_schema_errors_use_pointers():
    store = ModelStore()
    raw = (
        b'{"lattice_rank": 1, "rays": [[1], [-1]], "max_cones": [[0], [1]],'
        b' "bundle": {"type": "klyachko", "rank": 1,'
        b' "filtrations": [[{"jump": 0, "basis": [["x"]]}], [{"jump": 0, "basis": [[1]]}]]}}'
    )
    with pytest.raises(ModelInvalidError) as info:
        store.parse(raw, "0" * 64)
    assert paths(info.value) == ["/bundle/filtrations/0/0/basis/0/0"]


def test_bad_filtration_step_is_located():
    store = ModelStore()
    raw = (
        b'{"lattice_rank": 1, "rays": [[1], [-1]], "max_cones": [[0], [1]],'
        b' "bundle": {"type": "klyachko", "rank": 2, "filtrations": ['
        b'[{"jump": 0, "basis": [[1, 0], [0, 1]]}, {"jump": 1, "basis": [[1, 0]]}, {"jump": 2, "basis": [[0, 1]]}],'
        b' [{"jump": 0, "basis": [[1, 0], [0, 1]]}]]}}'
    )
    with pytest.raises(ModelInvalidError) as info:
        store.parse(raw, "0" * 64)
    assert paths(info.value) == ["/bundle/filtrations/0/2"]


def test_unknown_fields_are_rejected():
    store = ModelStore()
    raw = (
        b'{"lattice_rank": 1, "rays": [[1], [-1]], "max_cones": [[0], [1]], "colour": "red",'
        b' "bundle": {"type": "split", "coefficients": [[1, 0]]}}'
    )
    with pytest.raises(ModelInvalidError) as info:
        store.parse(raw, "0" * 64)
    assert paths(info.value) == ["/colour"]


def test_unreadable_file(tmp_path):
    with pytest.raises(ModelInvalidError):
        parse_model(tmp_path / "nope.json")


def test_loaded_gradings_come_from_the_compatibility_check(fixture_path):
    model = parse_model(fixture_path("tp2.json"))
    assert model.gradings == compatibility_service.gradings(model.bundle)


def test_every_incompatible_cone_gets_a_diagnostic(fixture_path):
    with pytest.raises(ModelInvalidError) as info:
        parse_model(fixture_path("three_lines_octant.json"))
    model_paths = paths(info.value)
    assert model_paths == [f"/max_cones/{d.detail['cone']}" for d in info.value.diagnostics]
    assert len(set(model_paths)) == len(model_paths) > 1


@pytest.mark.parametrize("jump", [b"1.0", b'"1"', b"true"])
def test_jumps_must_be_integers(jump):
    store = ModelStore()
    raw = (
        b'{"lattice_rank": 1, "rays": [[1], [-1]], "max_cones": [[0], [1]],'
        b' "bundle": {"type": "klyachko", "rank": 1,'
        b' "filtrations": [[{"jump": ' + jump + b', "basis": [[1]]}], [{"jump": 0, "basis": [[1]]}]]}}'
    )
    with pytest.raises(ModelInvalidError) as info:
        store.parse(raw, "0" * 64)
    assert paths(info.value) == ["/bundle/filtrations/0/0/jump"]


def test_divisor_coefficients_must_be_integers():
    store = ModelStore()
    raw = (
        b'{"lattice_rank": 1, "rays": [[1], [-1]], "max_cones": [[0], [1]],'
        b' "bundle": {"type": "split", "coefficients": [[2.0, 0]]}}'
    )
    with pytest.raises(ModelInvalidError) as info:
        store.parse(raw, "0" * 64)
    assert paths(info.value) == ["/bundle/coefficients/0/0"]
