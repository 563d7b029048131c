import numpy as np
import pytest

from curvesurvey import (
    FunctionalPopulation,
    SamplingDesign,
    TimeGrid,
)
from curvesurvey.oracle import default_fixture


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def tiny_fixture():
    """N=5, n=2, p=2, D=4 population + SRSWOR design for enumeration checks."""
    return default_fixture()


@pytest.fixture
def small_pop(rng):
    """Hand-sized random population: N=20, D=6, p=2 with intercept."""
    grid = TimeGrid(np.linspace(0.0, 1.0, 6))
    z = rng.normal(4.0, 1.0, 20)
    aux = np.column_stack([np.ones(20), z])
    beta = np.vstack([1.0 + grid.points, 0.8 * np.ones(6)])
    values = aux @ beta + 0.3 * rng.standard_normal((20, 6))
    return FunctionalPopulation(grid=grid, values=values, aux=aux)


@pytest.fixture
def small_design(small_pop):
    return SamplingDesign(kind="srswor", N=small_pop.N, n=6)
