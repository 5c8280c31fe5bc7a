import numpy as np
import pytest

from hyperfit.synthetic import TABLE1_MEANS
from hyperfit.yeoh import YeohParameters

TABLE1_11 = TABLE1_MEANS["GEL/GLY 1:1"]
TABLE1_12 = TABLE1_MEANS["GEL/GLY 1:2"]


def physical_params(rng, n):
    """Random constants keeping the stress slope positive on [0.5, 2.5]."""
    out = []
    for _ in range(n):
        out.append(YeohParameters(rng.uniform(0.1, 1.0), rng.uniform(0.02, 0.08),
                                  rng.uniform(-0.004, 0.0)))
    return out


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
