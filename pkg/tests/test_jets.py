import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conformal_curves.jets import Jet, dot, multilinear

coeffs = st.lists(st.floats(-2, 2), min_size=3, max_size=3)


def poly_jet(c, K=8):
    out = np.zeros(K + 1)
    out[: len(c)] = c
    return Jet(out)


def test_variable_and_constant():
    x = Jet.variable(2.0, 4)
    assert np.allclose(x.coeffs, [2, 1, 0, 0, 0])
    assert np.allclose(Jet.constant([1.0, 2.0], 3).coeffs[1:], 0)


def test_derivatives_are_factorial_scaled():
    j = Jet.from_derivatives([1.0, 2.0, 6.0, 24.0])
    assert np.allclose(j.coeffs, [1, 2, 3, 4])
    assert j.derivative(3) == pytest.approx(24.0)


@given(coeffs, coeffs)
def test_product_of_polynomials_is_exact(a, b):
    prod = poly_jet(a) * poly_jet(b)
    assert np.allclose(prod.coeffs[:5], np.convolve(a, b), atol=1e-12)
    assert np.allclose(prod.coeffs[5:], 0)


def test_reciprocal_geometric_series():
    one_minus_x = poly_jet([1.0, -1.0])
    assert np.allclose(one_minus_x.reciprocal().coeffs, 1.0)


def test_power_matches_binomial_series():
    j = poly_jet([1.0, 1.0]).sqrt()
    binom = [1.0]
    for k in range(1, 9):
        binom.append(binom[-1] * (0.5 - k + 1) / k)
    assert np.allclose(j.coeffs, binom)


def test_fractional_power_of_negative_rejected():
    with pytest.raises(ValueError):
        poly_jet([-1.0, 1.0]) ** 0.5


@given(st.floats(0.2, 3.0), st.floats(-1.0, 1.0), st.floats(-1.0, 1.0))
def test_revert_is_compositional_inverse(g1, g2, g3):
    g = poly_jet([0.0, g1, g2, g3])
    h = g.revert()
    ident = g.compose(h)
    assert np.allclose(ident.coeffs, [0, 1] + [0] * 7, atol=1e-9 * max(1.0, g1**-8))
    assert np.allclose(h.compose(g).coeffs, ident.coeffs, atol=1e-9 * max(1.0, g1**-8))


def test_compose_exp_of_log():
    # log(1 + x) then exp(y) - 1 recovers x
    K = 10
    log1p = Jet(np.array([0.0] + [(-1) ** (k + 1) / k for k in range(1, K + 1)]))
    expm1 = Jet(np.array([0.0] + [1 / np.prod(np.arange(1, k + 1)) for k in range(1, K + 1)]))
    out = Jet(expm1.coeffs).shifted(1.0).compose(log1p)
    assert np.allclose(out.coeffs, [1, 1] + [0] * (K - 1), atol=1e-12)


def test_compose_requires_displacement():
    with pytest.raises(ValueError):
        poly_jet([1.0, 1.0]).compose(poly_jet([0.5, 1.0]))


def test_deriv_integ_roundtrip():
    j = poly_jet([3.0, 1.0, 4.0, 1.0, 5.0])
    assert np.allclose(j.deriv().integ(3.0).coeffs[:6], j.coeffs[:6])


def test_vector_jets_and_dot():
    t = Jet.variable(0.0, 6)
    v = Jet(np.stack([t.coeffs, (t * t).coeffs], axis=1))
    assert np.allclose(dot(v, v).coeffs[:5], [0, 0, 1, 0, 1])


def test_multilinear_lifts_cross_product():
    a = Jet(np.array([[1.0, 0, 0], [0, 1.0, 0], [0, 0, 0]]))
    b = Jet(np.array([[0.0, 1, 0], [0, 0, 1.0], [0, 0, 0]]))
    c = multilinear(np.cross, a, b)
    # (e1 + t e2) x (e2 + t e3) = e3 - t e2 + t^2 e1
    assert np.allclose(c.coeffs, [[0, 0, 1], [0, -1, 0], [1, 0, 0]])
    ref = np.array([np.cross(a(h), b(h)) for h in (0.1, 0.2)])
    assert np.allclose([c(h) for h in (0.1, 0.2)], ref)


def test_evaluation_is_horner():
    j = poly_jet([1.0, 2.0, 3.0])
    assert j(2.0) == pytest.approx(1 + 4 + 12)
