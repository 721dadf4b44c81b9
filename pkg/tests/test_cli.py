# tests/test_cli.py
import json

import pytest
from click.testing import CliRunner

from klyachko.errors import EXIT_BUDGET, EXIT_INVALID, EXIT_OK
from klyachko.main import cli


@pytest.fixture
def run():
    runner = CliRunner(mix_stderr=False)

    def invoke(*args, env=None):
        return runner.invoke(cli, list(args), env=env)

    return invoke


def report_of(result):
    return json.loads(result.stdout)


def test_validate_accepts_tangent_bundle(run, fixture_path):
    result = run("validate", fixture_path("tp2.json"), "--format", "json")
    assert result.exit_code == EXIT_OK
    report = report_of(result)
    assert report["results"]["fan"]["complete"] is True
    assert [cone["cone"] for cone in report["results"]["cones"]] == [0, 1, 2]
    assert report["verdicts"][0]["verdict"] == "Compatible"


def test_validate_reports_incompatible_cone(run, fixture_path):
    result = run("validate", fixture_path("three_lines_octant.json"), "--format", "json")
    assert result.exit_code == EXIT_INVALID
    error = report_of(result)["error"]
    assert error["type"] == "ModelInvalidError"
    assert "/max_cones/0" in [d["path"] for d in error["diagnostics"]]


def test_h0_of_o2_on_p2(run, fixture_path):
    result = run("h0", fixture_path("p2_o2.json"), "--format", "json")
    assert result.exit_code == EXIT_OK
    assert report_of(result)["results"]["total_dim"] == 6


def test_h0_check_compares_both_descriptions(run, fixture_path):
    result = run("h0", fixture_path("tp2.json"), "--check", "--format", "json")
    assert result.exit_code == EXIT_OK
    results = report_of(result)["results"]
    assert results["total_dim"] == results["spanning_dim"] == 8


def test_polytope_of_an_element(run, fixture_path):
    result = run("polytope", fixture_path("p1_split_big.json"), "--element", "0,1", "--format", "json")
    assert result.exit_code == EXIT_OK
    results = report_of(result)["results"]
    assert results["phi"] == [2, 0]
    assert results["dim"] == 1
    assert results["lattice_count"] == 3


def test_polytope_rejects_bad_element(run, fixture_path):
    result = run("polytope", fixture_path("p1_split_big.json"), "--element", "1,2,3", "--format", "json")
    assert result.exit_code == EXIT_INVALID
    assert report_of(result)["error"]["type"] == "ValueError"


def test_image_dims(run, fixture_path):
    result = run("image-dims", fixture_path("p1_o2.json"), "--p", "1", "--lmax", "4", "--format", "json")
    assert result.exit_code == EXIT_OK
    table = report_of(result)["results"]["table"]
    assert [row["image_dim"] for row in table] == [3, 5, 7, 9]
    assert all(row["surjective"] for row in table)


def test_l_span_and_weights(run, fixture_path):
    result = run("l-span", fixture_path("tp2.json"), "--pmax", "2", "--format", "json")
    assert result.exit_code == EXIT_OK
    assert report_of(result)["results"]["dim"] == 2

    result = run("weights", fixture_path("tp2.json"), "--p", "1", "--format", "json")
    assert result.exit_code == EXIT_OK
    assert len(report_of(result)["results"]["points"]) == 3


def test_alpha_is_labelled_an_estimator(run, fixture_path):
    result = run("alpha", fixture_path("p1_trivial_rank2.json"), "--p", "1", "--lmax", "4", "--format", "json")
    assert result.exit_code == EXIT_OK
    report = report_of(result)
    assert report["verdicts"][0]["source"] == "estimator"
    assert report["results"]["sequence"][0]["display"] == "2.00000"


def test_big_on_split_bundles(run, fixture_path):
    result = run("big", fixture_path("p1_split_not_big.json"), "--format", "json")
    assert result.exit_code == EXIT_OK
    verdict = report_of(result)["verdicts"][0]
    assert verdict["verdict"] == "NotBigSplitCertified"
    assert verdict["source"] == "split_lp"

    result = run("big", fixture_path("p1_split_big.json"), "--format", "json")
    assert result.exit_code == EXIT_OK
    verdict = report_of(result)["verdicts"][0]
    assert verdict["verdict"] == "BigCertified"
    assert verdict["certificate"]["phi"] == [2, 0]


def test_budget_breach_exits_with_report(run, fixture_path):
    result = run("alpha", fixture_path("tp2.json"), "--p", "1", "--lmax", "50", "--format", "json",
                 env={"KLY_BUDGET": "10"})
    assert result.exit_code == EXIT_BUDGET
    assert report_of(result)["error"]["type"] == "BudgetExceededError"

    result = run("alpha", fixture_path("tp2.json"), "--p", "1", "--lmax", "50", "--budget", "10")
    assert result.exit_code == EXIT_BUDGET
    assert "BudgetExceededError" in result.stdout


def test_invalid_input_exit_codes(run, fixture_path):
    assert run("h0", fixture_path("syntax_error.json")).exit_code == EXIT_INVALID
    assert run("h0", fixture_path("does_not_exist.json")).exit_code == EXIT_INVALID
    assert run("h0", fixture_path("p1_o2.json"), "--no-such-flag").exit_code == EXIT_INVALID
    assert run("h0", fixture_path("p1_o2.json"), "--sym", "0").exit_code == EXIT_INVALID


# a nonzero element of E for each valid fixture
ELEMENTS = {
    "p1_o2.json": "1",
    "p2_o2.json": "1",
    "tp2.json": "1,0",
    "p1_split_big.json": "0,1",
    "p1_split_not_big.json": "0,1",
    "p1_trivial_rank2.json": "1,0",
}

COMMANDS = [
    ("validate",),
    ("h0", "--check"),
    ("polytope", "--element", None),
    ("image-dims", "--p", "1", "--lmax", "3"),
    ("l-span", "--pmax", "2"),
    ("weights", "--p", "1", "--pmax", "2"),
    ("alpha", "--p", "1", "--lmax", "3", "--pmax", "2"),
    ("big", "--degree-bound", "2", "--lmax", "3", "--pmax", "2"),
]


@pytest.mark.parametrize("name", sorted(ELEMENTS))
def test_reports_are_deterministic(run, fixture_path, name):
    for command in COMMANDS:
        args = [ELEMENTS[name] if a is None else a for a in command]
        for fmt in ("text", "json"):
            first = run(args[0], fixture_path(name), *args[1:], "--format", fmt)
            second = run(args[0], fixture_path(name), *args[1:], "--format", fmt)
            assert first.exit_code in (EXIT_OK, EXIT_INVALID), (command, first.stdout)
            assert first.exit_code == second.exit_code
            assert first.stdout == second.stdout


def test_weights_respects_budget(run, fixture_path):
    result = run("weights", fixture_path("tp2.json"), "--p", "30", "--pmax", "1", "--budget", "10",
                 "--format", "json")
    assert result.exit_code == EXIT_BUDGET
    assert report_of(result)["error"]["type"] == "BudgetExceededError"


def test_logs_stay_off_stdout(run, fixture_path):
    result = run("--log-level", "debug", "h0", fixture_path("p1_o2.json"), "--format", "json")
    assert result.exit_code == EXIT_OK
    report_of(result)
    assert "loaded" in result.stderr or "report emitted" in result.stderr
