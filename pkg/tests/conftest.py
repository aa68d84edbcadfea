"""
Shared fixtures for the bundle engine tests.
"""

import numpy as np
import pytest

from tkbundle.core.atlas import build_fixture, levi_civita
from tkbundle.core.connection import induce_components
from tkbundle.utils.config import FixtureParams

@pytest.fixture
def rng():
    return np.random.default_rng(20240611)

@pytest.fixture(scope="session")
def flat_line():
    return build_fixture("flat_poly")

@pytest.fixture(scope="session")
def flat_plane():
    return build_fixture("flat_poly", FixtureParams(flat_dim=2))

@pytest.fixture(scope="session")
def exp_line():
    return build_fixture("exp_metric_1d")

@pytest.fixture(scope="session")
def sphere():
    return build_fixture("sphere_stereo")

@pytest.fixture(scope="session")
def circle():
    return build_fixture("sphere_stereo", FixtureParams(sphere_dim=1))

@pytest.fixture(scope="session")
def exp_components(exp_line):
    return induce_components(levi_civita(exp_line.metric), 3)

@pytest.fixture(scope="session")
def sphere_components(sphere):
    return induce_components(levi_civita(sphere.metric), 4)

@pytest.fixture(scope="session")
def flat_components(flat_line):
    return induce_components(levi_civita(flat_line.metric), 3)
