"""Tests for structured logging functionality."""

import json
import logging
from fractions import Fraction

from typer.testing import CliRunner

from stonekernels import laws
from stonekernels.cli import app
from stonekernels.laws import LawReport, SuiteParameters, run_suite
from stonekernels.logging_config import (
    configure_logging,
    get_logger,
    log_duration,
    render_exact_values,
)

runner = CliRunner()


class TestLoggingConfiguration:
    """Test logging configuration setup."""

    def test_configure_logging_default(self):
        """Test that the default level comes from the settings."""
        configure_logging()
        assert logging.getLogger("stonekernels").level == logging.ERROR

    def test_level_from_environment(self, monkeypatch):
        monkeypatch.setenv("STONEKERNELS_LOG_LEVEL", "DEBUG")
        configure_logging()
        assert logging.getLogger("stonekernels").level == logging.DEBUG

    def test_configure_logging_levels(self):
        """Test different log levels."""
        for level in ["DEBUG", "INFO", "WARNING", "ERROR"]:
            configure_logging(level=level, format="json")
            assert logging.getLogger("stonekernels").level == getattr(logging, level)

    def test_json_format(self, caplog):
        """Test that JSON events carry the event name and bound fields."""
        configure_logging(level="INFO", format="json")
        log = get_logger("stonekernels.tests")

        with caplog.at_level(logging.INFO):
            log.info("law_suite_started", suite="finker.category", cases=5)

        event = json.loads(caplog.records[-1].getMessage())
        assert event["event"] == "law_suite_started"
        assert event["suite"] == "finker.category"
        assert event["level"] == "info"
        assert "func_name" in event

    def test_console_format(self, caplog):
        """Test console format configuration."""
        configure_logging(level="INFO", format="console")
        log = get_logger("stonekernels.tests")

        with caplog.at_level(logging.INFO):
            log.info("program_loaded", kernels=4)

        assert "program_loaded" in caplog.records[-1].getMessage()


class TestLogDuration:
    """Test the timing context manager."""

    def test_extra_fields_are_logged(self, caplog):
        configure_logging(level="INFO", format="json")
        log = get_logger("stonekernels.tests")

        with caplog.at_level(logging.INFO):
            with log_duration(log, "sampling_finished", seed=3) as extra:
                extra["hits"] = 12

        event = json.loads(caplog.records[-1].getMessage())
        assert event["event"] == "sampling_finished"
        assert event["seed"] == 3
        assert event["hits"] == 12
        assert event["elapsed_ms"] >= 0

    def test_suite_context_reaches_nested_events(self, caplog, monkeypatch):
        configure_logging(level="DEBUG", format="json")
        inner = get_logger("stonekernels.tests")

        def demo_suite(params):
            inner.debug("demo_case_checked", case=0)
            report = LawReport("demo")
            report.check(True, "unused")
            return report

        monkeypatch.setitem(laws.SUITES, "demo", demo_suite)
        with caplog.at_level(logging.DEBUG):
            run_suite("demo", SuiteParameters(seed=5, cases=1, max_size=2, depth=1))

        nested = [r for r in caplog.records if r.name == "stonekernels.tests"]
        event = json.loads(nested[-1].getMessage())
        assert event["event"] == "demo_case_checked"
        assert (event["suite"], event["seed"]) == ("demo", 5)


class TestExactValues:
    """Test that rationals in event fields are logged exactly."""

    def test_processor_formats_nested_fractions(self):
        event = render_exact_values(
            None, "info", {"mass": Fraction(1, 8), "row": (Fraction(1, 2), 1), "n": 3}
        )
        assert event == {"mass": "1/8", "row": ("1/2", 1), "n": 3}

    def test_json_events_carry_rationals_as_strings(self, caplog):
        configure_logging(level="INFO", format="json")
        log = get_logger("stonekernels.tests")

        with caplog.at_level(logging.INFO):
            log.info("cylinder_measured", measure=Fraction(2, 27), masses=[Fraction(1, 3)])

        event = json.loads(caplog.records[-1].getMessage())
        assert event["measure"] == "2/27"
        assert event["masses"] == ["1/3"]


class TestCliLogging:
    """Test the global logging options."""

    def test_json_logs_do_not_touch_stdout(self, coins_yaml):
        result = runner.invoke(
            app,
            ["--log-level", "INFO", "--log-format", "json", "measure", str(coins_yaml),
             "-s", "coin", "-c", "3:5"],
        )
        assert result.exit_code == 0
        assert result.stdout.strip() == "1/8"
