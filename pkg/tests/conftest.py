import numpy as np
import pytest

from src.analytic import ModelParams


@pytest.fixture
def unit_params():
    """g1 = g2 = 1, delta = 10"""
    return ModelParams.from_ratio(1.0, 10.0)


@pytest.fixture
def fig3_params():
    return ModelParams.from_ratio(1.023, 10.0)


@pytest.fixture
def fig3_grid():
    return np.linspace(0.0, 150.0, 1201)
