import numpy as np
import pytest
from hypothesis import settings

from conformal_curves.curve_jets import Helix, LogSpiral, PlaneParabola, TrigPolynomial, TwistedCubic

settings.register_profile("default", deadline=None, max_examples=40)
settings.load_profile("default")


def fd_weights(order, offsets):
    """Finite-difference weights for the ``order``-th derivative on integer ``offsets``."""
    offsets = np.asarray(offsets, dtype=float)
    n = len(offsets)
    A = np.vander(offsets, n, increasing=True).T
    b = np.zeros(n)
    b[order] = float(np.prod(np.arange(1, order + 1)))
    return np.linalg.solve(A, b)


def fd_derivative(f, t, order, h, accuracy=8):
    """Central difference of the given accuracy order."""
    p = (order + 1) // 2 - 1 + accuracy // 2
    offsets = np.arange(-p, p + 1)
    w = fd_weights(order, offsets)
    return sum(wi * f(t + k * h) for wi, k in zip(w, offsets)) / h**order


@pytest.fixture
def helix():
    return Helix(0.5, 0.5)


@pytest.fixture
def trefoil():
    return TrigPolynomial.trefoil()


@pytest.fixture
def cubic():
    return TwistedCubic()


@pytest.fixture
def spiral():
    return LogSpiral(1.0, 0.2)


@pytest.fixture
def parabola():
    return PlaneParabola(1.0)
