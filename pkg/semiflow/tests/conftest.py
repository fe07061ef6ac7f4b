"""
Pytest configuration and fixtures for semiflow tests.
"""

import io
from unittest.mock import Mock

import pytest

from semiflow.actions import create_registry
from semiflow.config import ExperimentConfig
from semiflow.flow import IntegratorConfig
from semiflow.geometry import JordanDomain


@pytest.fixture(autouse=True)
def single_thread(monkeypatch):
    """Run every test with one worker unless the test overrides it."""
    monkeypatch.setenv("SEMIFLOW_THREADS", "1")


@pytest.fixture
def unit_square():
    """Unit square with corner at the origin."""
    return JordanDomain.square(0, 1)


@pytest.fixture
def fast_integrator():
    """Loose tolerances for tests that only need a few digits."""
    return IntegratorConfig(rel_tol=1e-8, abs_tol=1e-10)


@pytest.fixture
def small_config():
    """Experiment configuration small enough for unit tests."""
    return ExperimentConfig(walks=2000, family_size=3, seed=7)


@pytest.fixture
def mock_printer():
    """Printer that records every call."""
    return Mock()


@pytest.fixture
def registry(mock_printer, small_config):
    """Command registry wired to a mock printer."""
    return create_registry(printer=mock_printer, config=small_config)


@pytest.fixture
def stdout():
    """In-memory stdout for commands that write data."""
    return io.StringIO()
