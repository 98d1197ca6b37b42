import math

import numpy as np
import pytest

from chshkit.rng import SplitMix64

SQRT2 = math.sqrt(2.0)
R = 1.0 / SQRT2

# entries 1/sqrt2 except c22 = -1/sqrt2: Gram of u1 = e1, u2 = e2,
# v1 = (u1 + u2)/sqrt2, v2 = (u1 - u2)/sqrt2
SATURATING = np.array([[R, R], [R, -R]])
PR_BOX = np.array([[1.0, 1.0], [1.0, -1.0]])


@pytest.fixture
def rng():
    return SplitMix64(20240601)


def numpy_rng(seed=0):
    return np.random.default_rng(seed)
