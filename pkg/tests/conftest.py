import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20261016)


BELL = np.zeros((4, 4))
BELL[0, 0] = BELL[0, 3] = BELL[3, 0] = BELL[3, 3] = 0.5

CLASSICAL_BELL = np.diag([0.5, 0.0, 0.0, 0.5])
