"""Shared test configuration: seeded RNG and a hypothesis profile.

The numeric property tests build quadrature rules and dense grids; the
default hypothesis deadline is too tight for the first (cold-cache) example,
so the profile disables it and keeps the example count moderate.
"""

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "numerics",
    deadline=None,
    max_examples=50,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("numerics")


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(8151412)
