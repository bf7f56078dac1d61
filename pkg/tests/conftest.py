"""
pytest configuration and fixtures
"""
import pytest
import sys
import os

import numpy as np

# Add repository root to path
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src.geometry import Box
from src.operators import catalog_lookup

REPO_ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


@pytest.fixture
def instances_dir():
    """Bundled instance files"""
    return os.path.join(REPO_ROOT, "data", "instances")


@pytest.fixture
def square():
    """K = [-1,1]^2"""
    return Box([-1.0, -1.0], [1.0, 1.0])


@pytest.fixture
def interval():
    """K = [-1,1]"""
    return Box([-1.0], [1.0])


@pytest.fixture
def ex432_fields():
    """A(x,y) = (x^2 y, xy), a(x,y) = (1,-x)"""
    return catalog_lookup("ex432_A").field, catalog_lookup("ex432_a").field


@pytest.fixture
def ex434_fields():
    """Piecewise linear pair with a Minty-only solution at -1/2"""
    return catalog_lookup("ex434_A").field, catalog_lookup("ex434_a").field


@pytest.fixture
def ex4331_fields():
    """Step A with a = identity"""
    return catalog_lookup("ex4331_A").field, catalog_lookup("ex4331_a").field


@pytest.fixture
def rng():
    """Seeded generator for randomised properties"""
    return np.random.default_rng(20240519)
