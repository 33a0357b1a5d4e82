import numpy as np
import pytest

from ente.data import EnsembleSeries


@pytest.fixture
def rng():
    return np.random.default_rng(0)


@pytest.fixture
def small_pair(rng):
    """An independent source/target ensemble pair for pipeline tests."""
    x = EnsembleSeries("X", rng.standard_normal((10, 120)))
    y = EnsembleSeries("Y", rng.standard_normal((10, 120)))
    return x, y
