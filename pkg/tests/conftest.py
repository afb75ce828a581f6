import numpy as np
import pytest

from gustuq import GustOracle, default_input_space


@pytest.fixture(scope="session")
def space():
    return default_input_space()


@pytest.fixture(scope="session")
def oracle():
    return GustOracle()


class ConstantOracle:
    """Oracle returning the same QoI pair everywhere; gradient is zero."""

    def __init__(self, max_disp=0.25, energy=100.0):
        from gustuq import QoIRecord
        self.record = QoIRecord(max_disp, energy)

    def evaluate(self, x):
        return self.record

    def evaluate_batch(self, points):
        points = np.atleast_2d(points)
        return np.tile(self.record.as_array(), (points.shape[0], 1))

    def gradient(self, x):
        return np.zeros((2, 3))


@pytest.fixture
def constant_oracle():
    return ConstantOracle()
