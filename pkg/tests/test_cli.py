"""Tests for CLI commands using Typer CliRunner."""

import json

from typer.testing import CliRunner

from stonekernels.cli import app
from stonekernels.dsl.loader import load_program

runner = CliRunner()


def test_main_with_no_args_shows_help():
    """Test that no arguments shows the usage text."""
    result = runner.invoke(app, [])
    assert result.exit_code == 2
    assert "Usage:" in result.output


def test_version():
    result = runner.invoke(app, ["--version"])
    assert result.exit_code == 0
    assert "stonekernels version" in result.stdout


class TestEval:
    """Test the eval command."""

    def test_counit_law(self, coins_yaml):
        result = runner.invoke(app, ["eval", str(coins_yaml), "--term", "law", "--depth", "0"])
        assert result.exit_code == 0
        assert result.stdout.strip() == "1 0\n0 1"

    def test_term_source(self, coins_yaml):
        result = runner.invoke(app, ["eval", str(coins_yaml), "-t", "coin", "-d", "2"])
        assert result.exit_code == 0
        assert result.stdout.strip() == "1/4 1/4 1/4 1/4"

    def test_json(self, coins_yaml):
        result = runner.invoke(app, ["eval", str(coins_yaml), "--term", "fg", "--json"])
        assert result.exit_code == 0
        data = json.loads(result.stdout)
        assert data["status"] == "success"
        assert data["term"] == "f ; g"
        assert data["dom"] == "X"
        assert data["cod"] == "Y"
        assert data["matrix"] == [["2/3", "1/6", "1/6"], ["1", "0", "0"]]

    def test_depth_from_environment(self, coins_yaml, monkeypatch):
        monkeypatch.setenv("STONEKERNELS_DEPTH", "1")
        result = runner.invoke(app, ["eval", str(coins_yaml), "--term", "coin"])
        assert result.exit_code == 0
        assert result.stdout.strip() == "1/2 1/2"

    def test_missing_file(self, temp_output_dir):
        result = runner.invoke(app, ["eval", str(temp_output_dir / "absent.yaml"), "-t", "f"])
        assert result.exit_code == 2

    def test_syntax_error(self, coins_yaml):
        result = runner.invoke(app, ["eval", str(coins_yaml), "--term", "f ; ; g"])
        assert result.exit_code == 2
        assert "syntax error at line 1, column 5" in result.stdout

    def test_type_mismatch(self, coins_yaml):
        result = runner.invoke(app, ["eval", str(coins_yaml), "--term", "g ; f"])
        assert result.exit_code == 2
        assert "type-mismatch error" in result.stdout

    def test_unknown_kernel(self, coins_yaml):
        result = runner.invoke(app, ["eval", str(coins_yaml), "--term", "h"])
        assert result.exit_code == 2
        assert "kernel 'h' is not declared" in result.stdout

    def test_invalid_program(self, temp_output_dir):
        path = temp_output_dir / "bad.yaml"
        path.write_text("objects:\n  X: 2\nkernels:\n  f: {dom: X, cod: X, matrix: [[0.5, 0.5]]}\n")
        result = runner.invoke(app, ["eval", str(path), "--term", "f"])
        assert result.exit_code == 2
        assert "floating-point" in result.stdout

    def test_json_error(self, coins_yaml):
        result = runner.invoke(app, ["eval", str(coins_yaml), "--term", "h", "--json"])
        assert result.exit_code == 2
        assert '"status": "error"' in result.stdout

    def test_log_options(self, coins_yaml):
        result = runner.invoke(
            app,
            ["--log-level", "DEBUG", "--log-format", "json", "eval", str(coins_yaml), "-t", "neg"],
        )
        assert result.exit_code == 0

    def test_bad_log_level(self, coins_yaml):
        result = runner.invoke(app, ["--log-level", "LOUD", "eval", str(coins_yaml), "-t", "f"])
        assert result.exit_code == 2


class TestChecks:
    """Test the check-eq and check-det commands."""

    def test_equal_terms(self, coins_yaml):
        result = runner.invoke(
            app, ["check-eq", str(coins_yaml), "--left", "law", "--right", "id[X]"]
        )
        assert result.exit_code == 0
        assert "equal up to depth 3" in result.stdout

    def test_different_states(self, coins_yaml):
        result = runner.invoke(
            app, ["check-eq", str(coins_yaml), "-l", "coin", "-r", "biased", "--depth", "2"]
        )
        assert result.exit_code == 1
        assert "✗" in result.stdout

    def test_different_states_json(self, coins_yaml):
        result = runner.invoke(
            app, ["check-eq", str(coins_yaml), "-l", "coin", "-r", "biased", "--json"]
        )
        assert result.exit_code == 1
        data = json.loads(result.stdout)
        assert data["holds"] is False
        assert data["witness"]["level"] == 1
        assert (data["witness"]["left"], data["witness"]["right"]) == ("1/2", "2/3")

    def test_copy_does_not_commute_with_a_coin(self, coins_yaml):
        result = runner.invoke(
            app,
            [
                "check-eq",
                str(coins_yaml),
                "--left",
                "flip ; copy[X]",
                "--right",
                "copy[unit] ; (flip (x) flip)",
                "--depth",
                "0",
            ],
        )
        assert result.exit_code == 1

    def test_deterministic_map(self, coins_yaml):
        result = runner.invoke(app, ["check-det", str(coins_yaml), "--term", "neg"])
        assert result.exit_code == 0
        assert "deterministic up to depth 3" in result.stdout

    def test_point_state_is_deterministic(self, coins_yaml):
        result = runner.invoke(app, ["check-det", str(coins_yaml), "--term", "one ; copy[X]"])
        assert result.exit_code == 0

    def test_coin_is_not_deterministic(self, coins_yaml):
        result = runner.invoke(app, ["check-det", str(coins_yaml), "--term", "flip", "-d", "0"])
        assert result.exit_code == 1
        assert "level 0, entry (0, 0) = 1/2 is neither 0 nor 1" in result.stdout

    def test_type_error_is_invalid_input(self, coins_yaml):
        result = runner.invoke(app, ["check-det", str(coins_yaml), "--term", "g ; g"])
        assert result.exit_code == 2


class TestConditional:
    """Test the conditional command."""

    def test_prints_levels(self, coins_yaml):
        result = runner.invoke(app, ["conditional", str(coins_yaml), "--term", "joint", "-d", "1"])
        assert result.exit_code == 0
        assert "level 0" in result.stdout
        assert "level 1" in result.stdout
        assert "1/2 1/2\n0 1" in result.stdout

    def test_writes_program(self, coins_yaml, temp_output_dir):
        out = temp_output_dir / "cond.yaml"
        result = runner.invoke(
            app,
            [
                "conditional",
                str(coins_yaml),
                "--term",
                "lopsided",
                "--depth",
                "2",
                "--out",
                str(out),
                "--name",
                "k",
            ],
        )
        assert result.exit_code == 0
        assert "Conditional written" in result.stdout
        program = load_program(out)
        assert program.kernels["k"].level(0).render() == "1/4 3/4\n1 0"

    def test_json(self, coins_yaml):
        result = runner.invoke(
            app, ["conditional", str(coins_yaml), "--term", "mixed", "-d", "1", "--json"]
        )
        assert result.exit_code == 0
        data = json.loads(result.stdout)
        assert data["reconstructs"] is True
        assert data["given"] == "X"
        assert data["target"] == "B"
        assert data["levels"][1] == [["1", "0"], ["1/2", "1/2"]]

    def test_codomain_must_be_a_product(self, coins_yaml):
        result = runner.invoke(app, ["conditional", str(coins_yaml), "--term", "coin"])
        assert result.exit_code == 2
        assert "Y × L" in result.stdout


class TestMeasure:
    """Test the measure command."""

    def test_fair_coin(self, coins_yaml):
        result = runner.invoke(
            app, ["measure", str(coins_yaml), "--state", "coin", "--clopen", "3:5"]
        )
        assert result.exit_code == 0
        assert result.stdout.strip() == "1/8"

    def test_biased_coin(self, coins_yaml):
        result = runner.invoke(app, ["measure", str(coins_yaml), "-s", "biased", "-c", "3:5"])
        assert result.exit_code == 0
        assert result.stdout.strip() == "2/27"

    def test_union_of_cylinders(self, coins_yaml):
        result = runner.invoke(
            app, ["measure", str(coins_yaml), "-s", "biased", "-c", "1:0,1", "--json"]
        )
        assert result.exit_code == 0
        assert json.loads(result.stdout)["measure"] == "1"

    def test_bad_literal(self, coins_yaml):
        result = runner.invoke(app, ["measure", str(coins_yaml), "-s", "coin", "-c", "three"])
        assert result.exit_code == 2
        assert "not a clopen literal" in result.stdout

    def test_not_a_state(self, coins_yaml):
        result = runner.invoke(app, ["measure", str(coins_yaml), "-s", "f", "-c", "0:0"])
        assert result.exit_code == 2


class TestSample:
    """Test the sample command."""

    def test_seed_is_reproducible(self, coins_yaml):
        args = ["sample", str(coins_yaml), "-s", "coin", "-d", "3", "--seed", "7", "-n", "200"]
        first = runner.invoke(app, [*args, "--json"])
        second = runner.invoke(app, [*args, "--json"])
        assert first.exit_code == 0
        assert json.loads(first.stdout) == json.loads(second.stdout)
        assert sum(json.loads(first.stdout)["counts"].values()) == 200

    def test_cylinder_report(self, coins_yaml):
        result = runner.invoke(
            app,
            ["sample", str(coins_yaml), "-s", "coin", "-d", "3", "-n", "500", "-c", "3:5"],
        )
        assert result.exit_code == 0
        assert "cylinder 3:5:" in result.stdout
        assert "exact measure 1/8" in result.stdout

    def test_cylinder_json(self, coins_yaml):
        result = runner.invoke(
            app,
            ["sample", str(coins_yaml), "-s", "biased", "-d", "3", "-n", "300", "-c", "3:5"]
            + ["--json"],
        )
        assert result.exit_code == 0
        data = json.loads(result.stdout)
        assert data["exact"] == "2/27"
        assert data["hits"] == data["counts"].get("5", 0)
        assert data["frequency"] == data["hits"] / 300

    def test_cylinder_finer_than_depth(self, coins_yaml):
        result = runner.invoke(
            app, ["sample", str(coins_yaml), "-s", "coin", "-d", "1", "-c", "3:5"]
        )
        assert result.exit_code == 2


class TestAxioms:
    """Test the axioms command."""

    def test_finite_suites_pass(self):
        result = runner.invoke(
            app,
            ["axioms", "--only", "finker", "--cases", "5", "--max-size", "2", "--depth", "2"],
        )
        assert result.exit_code == 0
        assert "all laws hold" in result.stdout

    def test_json_report(self):
        result = runner.invoke(
            app,
            ["axioms", "--only", "stone", "--cases", "3", "--max-size", "2", "--depth", "2"]
            + ["--json"],
        )
        assert result.exit_code == 0
        data = json.loads(result.stdout)
        assert data["status"] == "success"
        assert data["cases"] == 3
        assert {s["name"] for s in data["suites"]} == {"stone.projections", "stone.clopens"}
        assert all(s["passed"] for s in data["suites"])

    def test_unknown_prefix(self):
        result = runner.invoke(app, ["axioms", "--only", "nope", "--cases", "1"])
        assert result.exit_code == 2
        assert "No suite name starts with 'nope'" in result.stdout

    def test_max_size_is_bounded(self):
        result = runner.invoke(app, ["axioms", "--max-size", "9"])
        assert result.exit_code == 2
