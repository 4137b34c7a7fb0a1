import numpy as np
import pytest

from bgnet.rng import RngStream


@pytest.fixture
def gen():
    """A throwaway deterministic generator for test inputs."""
    return RngStream(123456).generator


def random_pd(p, gen, jitter=0.5):
    """Random symmetric positive-definite matrix with unit-scale diagonal."""
    a = gen.standard_normal((p, p)) * jitter
    m = a @ a.T / p + np.eye(p)
    return (m + m.T) / 2.0
