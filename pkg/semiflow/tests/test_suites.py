"""
Tests for the verification suites.

The full-size suites take minutes; they are marked slow and run with the
default configuration so their thresholds are exercised as shipped.
"""

import numpy as np
import pytest

import semiflow.suites as suites
from semiflow.config import ExperimentConfig
from semiflow.errors import ConfigError, UsageError
from semiflow.flow import closed_form
from semiflow.suites import SUITES, CheckResult, Suite, SuiteReport, run_suite, suite


class TestSuiteReport:
    """Check bookkeeping."""

    def test_empty_report_passes(self):
        assert SuiteReport("empty").passed is True

    def test_check_records_measurements(self):
        report = SuiteReport("demo")
        assert report.check("ok", True, value=1.5) is True
        assert report.check("bad", 0, value=2.0) is False
        assert report.checks[0] == CheckResult("ok", True, {"value": 1.5})
        assert report.checks[1].passed is False
        assert report.passed is False
        assert report.failed_checks == ["bad"]

    def test_to_dict(self):
        report = SuiteReport("demo", details={"n": 3})
        report.check("ok", True, x=1)
        assert report.to_dict() == {
            "suite": "demo",
            "passed": True,
            "checks": [{"name": "ok", "passed": True, "measured": {"x": 1}}],
            "details": {"n": 3},
        }


class TestRegistry:
    """Suite registration and lookup."""

    def test_known_suites(self):
        expected = {
            "thm1.1",
            "thm4.7",
            "thm5.1",
            "ex4.8",
            "ex5.4",
            "lavrentiev",
            "envelope",
            "subordination",
            "calibration",
            "semigroup",
            "invariants",
        }
        assert expected <= set(SUITES)
        assert all(isinstance(entry, Suite) and entry.description for entry in SUITES.values())

    def test_unknown_suite(self):
        with pytest.raises(UsageError, match="Unknown suite 'nope'"):
            run_suite("nope", ExperimentConfig())

    def test_decorator_registers(self, monkeypatch):
        monkeypatch.setattr("semiflow.suites.SUITES", dict(SUITES))

        @suite("toy", "always passes")
        def toy(config):
            report = SuiteReport("toy")
            report.check("seed seen", config.seed == 5)
            return report

        report = run_suite("toy", ExperimentConfig(seed=5))
        assert report.passed
        assert report.checks[0].name == "seed seen"

    def test_disc_suite_rejects_halfplane_generator(self):
        with pytest.raises(ConfigError, match="not a disc generator"):
            run_suite("thm1.1", ExperimentConfig(generator="hp:sqrt"))

    def test_halfplane_suite_rejects_disc_generator(self):
        with pytest.raises(ConfigError, match="not a half-plane generator"):
            run_suite("thm4.7", ExperimentConfig(generator="ex5.4"))


class TestEnvelopeSuite:
    """The envelope suite is cheap enough to run in the unit tests."""

    def test_passes(self, small_config):
        report = run_suite("envelope", small_config)
        assert report.passed, report.failed_checks
        names = [check.name for check in report.checks]
        assert "suffix-min oracle agreement" in names
        assert "proof-domain length <= 4a" in names

    def test_deterministic(self, small_config):
        first = run_suite("envelope", small_config).to_dict()
        second = run_suite("envelope", small_config).to_dict()
        assert first["checks"] == second["checks"]


class TestSemigroupThresholds:
    """Defects and oracle errors are compared with 1e-8 as absolute numbers."""

    @pytest.fixture
    def stub_errors(self, monkeypatch):
        def install(error):
            def defect(spec, z, s, t, cfg):
                return error(np.abs(z))

            def shifted(spec, z, times, cfg):
                form, c = spec.closed_form
                exact = closed_form(form, z[:, None], times[None, :], c)
                return exact + error(np.abs(z[:, None]))

            monkeypatch.setattr(suites, "semigroup_defect", defect)
            monkeypatch.setattr(suites, "advance", shifted)

        return install

    def test_errors_growing_with_modulus_fail(self, stub_errors, small_config):
        stub_errors(lambda r: 0.6e-8 * (1.0 + r))
        report = run_suite("semigroup", small_config)
        assert report.failed_checks == [
            "Phi_t o Phi_s = Phi_(s+t)",
            "advance matches closed forms",
        ]
        law, oracle = report.checks
        assert law.measured["worst"] > 1e-8
        assert law.measured["failures"] > 0
        assert max(oracle.measured["max_errors"].values()) > 1e-8

    def test_small_absolute_errors_pass(self, stub_errors, small_config):
        stub_errors(lambda r: 5e-9 + 0.0 * r)
        report = run_suite("semigroup", small_config)
        assert report.passed, report.failed_checks
        law, oracle = report.checks
        assert law.measured["worst"] == pytest.approx(5e-9, rel=1e-3)
        errors = oracle.measured["max_errors"].values()
        assert all(e == pytest.approx(5e-9, rel=1e-3) for e in errors)


@pytest.mark.slow
class TestFullSuites:
    """Every suite passes at its default configuration."""

    @pytest.mark.parametrize(
        "name",
        [
            "thm1.1",
            "thm4.7",
            "thm5.1",
            "ex4.8",
            "ex5.4",
            "semigroup",
            "invariants",
            "calibration",
            "lavrentiev",
            "subordination",
        ],
    )
    def test_suite_passes(self, name):
        report = run_suite(name, ExperimentConfig())
        assert report.passed, report.failed_checks
