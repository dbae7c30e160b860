import math

import numpy as np
import pytest

from qwequiv.coin import EulerAngles


def random_euler(rng: np.random.Generator) -> EulerAngles:
    """eta, xi uniform in (-pi, pi), theta uniform in (0, pi)."""
    eta, xi = rng.uniform(-math.pi, math.pi, size=2)
    theta = rng.uniform(0.0, math.pi)
    return EulerAngles(float(eta), float(theta), float(xi))


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def assert_close(a, b, atol=1e-12):
    np.testing.assert_allclose(np.asarray(a), np.asarray(b), rtol=0, atol=atol)
