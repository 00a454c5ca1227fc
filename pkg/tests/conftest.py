import os
import tempfile
from unittest.mock import Mock

import pytest

from cnf.core import Cnf
from encoders.layout import VarLayout
from lab.restriction import RandomRestriction, RhoParams, sample_rho
from proofs.resolution import InputWeakening, ResolutionProof, ResStep, Resolvent


@pytest.fixture
def contradiction():
    """{x1}, {¬x1} over one variable"""
    return Cnf(({1}, {-1}), 1)


@pytest.fixture
def contradiction_refutation(contradiction):
    """Three-step refutation of {x1}, {¬x1}"""
    return ResolutionProof((
        ResStep(frozenset({1}), InputWeakening(0)),
        ResStep(frozenset({-1}), InputWeakening(1)),
        ResStep(frozenset(), Resolvent(0, 1, 1)),
    ), contradiction)


@pytest.fixture
def full_two_cnf():
    """All four clauses of width two over x1, x2"""
    return Cnf(({1, 2}, {1, -2}, {-1, 2}, {-1, -2}), 2)


@pytest.fixture
def full_two_refutation(full_two_cnf):
    """Refutation of full_two_cnf of height 3"""
    return ResolutionProof((
        ResStep(frozenset({1, 2}), InputWeakening(0)),
        ResStep(frozenset({1, -2}), InputWeakening(1)),
        ResStep(frozenset({1}), Resolvent(0, 1, 2)),
        ResStep(frozenset({-1, 2}), InputWeakening(2)),
        ResStep(frozenset({-1, -2}), InputWeakening(3)),
        ResStep(frozenset({-1}), Resolvent(3, 4, 2)),
        ResStep(frozenset(), Resolvent(2, 5, 1)),
    ), full_two_cnf)


@pytest.fixture
def lab_formula():
    """{x1}, {¬x1} declared over two variables, the restriction lab's F"""
    return Cnf(({1}, {-1}), 2)


@pytest.fixture
def lab_layout():
    """REF^F_{3,30} layout for n = r = 2"""
    return VarLayout(2, 2, 3, 30)


@pytest.fixture
def empty_restriction():
    """Restriction at n = r = 2, s = 3, t = 30 that fixes nothing"""
    return RandomRestriction(2, 2, 3, 30, 0.1)


@pytest.fixture
def sampled_restriction(lab_layout):
    """Factory for seeded restrictions at the lab parameters"""
    def sample(seed: int, **overrides):
        params = RhoParams(epsilon=1.0, seed=seed, **overrides)
        return sample_rho(params, 2, 2, 3, 30, lab_layout)
    return sample


@pytest.fixture
def sample_config_yaml():
    """Sample YAML configuration content"""
    return """
settings:
  log_level: INFO

lab:
  epsilon: 0.5
  variant: level-scaled
  workers: 2
  trials: 200

regime:
  delta: 0.01
"""


@pytest.fixture
def temp_config_file(sample_config_yaml):
    """Create a temporary config file for testing"""
    with tempfile.NamedTemporaryFile(mode='w', suffix='.yaml', delete=False) as f:
        f.write(sample_config_yaml)
        temp_path = f.name

    yield temp_path

    if os.path.exists(temp_path):
        os.unlink(temp_path)


@pytest.fixture
def mock_logger():
    """Mock logger for testing"""
    logger = Mock()
    logger.info = Mock()
    logger.warning = Mock()
    logger.error = Mock()
    logger.debug = Mock()
    return logger


@pytest.fixture(autouse=True)
def clean_environment(monkeypatch):
    """No layout pin leaks in from the caller's shell"""
    monkeypatch.delenv("REFSTATE_LAYOUT_VERSION", raising=False)
