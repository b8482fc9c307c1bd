"""Pytest configuration and fixtures."""
import numpy as np
import pytest
from click.testing import CliRunner
from hypothesis import settings

from python_super_quantum.bounds import umbrella_projectors
from python_super_quantum.boxes import CANONICAL_PR_BOX
from python_super_quantum.logic_core import pentagon_logic, pentagon_state

settings.register_profile("superq", max_examples=50, deadline=None, derandomize=True)
settings.load_profile("superq")

MASTER_SEED = 20240917


@pytest.fixture
def master_seed():
    """Seed shared by every randomized property suite."""
    return MASTER_SEED


@pytest.fixture
def rng(master_seed):
    return np.random.default_rng(master_seed)


@pytest.fixture
def pentagon():
    return pentagon_logic()


@pytest.fixture
def wright_state(pentagon):
    return pentagon_state(pentagon)


@pytest.fixture
def umbrella():
    return umbrella_projectors()


@pytest.fixture
def pr_box():
    return CANONICAL_PR_BOX


@pytest.fixture
def runner():
    """Click test runner for the superq command."""
    return CliRunner()


@pytest.fixture
def mock_env(monkeypatch):
    """Mock environment variables for testing."""
    monkeypatch.delenv("SUPERQ_CONFIG", raising=False)
    monkeypatch.setenv("SUPERQ_LOG_LEVEL", "WARNING")
    return monkeypatch
