import numpy as np
import pytest

from isacsim import ScenarioConfig


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def small_config():
    """Scaled-down scenario for fast engine tests."""
    return ScenarioConfig(resident_mean_count=20.0, uav_mean_count=5.0,
                          master_seed=99)
