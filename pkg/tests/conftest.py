import os

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from schwarz_signal import catalog

settings.register_profile(
    "default", deadline=None, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.register_profile("ci", deadline=None, max_examples=200)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture(scope="session")
def sun():
    return catalog.body("sun")


@pytest.fixture(scope="session")
def wd():
    return catalog.body("white_dwarf")


@pytest.fixture(scope="session")
def ns():
    return catalog.body("neutron_star")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
