import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from conformal_curves import conformal_models as cm
from conformal_curves import minkowski_core as mk
from conformal_curves.errors import DegenerateCircle, DegeneratePoint

R2 = np.sqrt(2)
N = cm.CHART_NORMAL
point3 = arrays(np.float64, 3, elements=st.floats(-10, 10))
seeds = st.integers(0, 10_000)


def test_embed_origin_and_axis():
    assert np.allclose(cm.embed_point3([0, 0, 0]), [1 / R2, -1 / R2, 0, 0, 0])
    assert np.allclose(cm.embed_point3([1, 0, 0]), [1 / R2 + 1 / (2 * R2), -1 / R2 + 1 / (2 * R2), 1, 0, 0])


def test_embed_plane_examples():
    assert np.allclose(cm.embed_point2([0, 0]), [1 / R2, -1 / R2, 0, 0])
    assert np.allclose(cm.embed_point2([1, 1]), [1 / R2 + 1 / R2, -1 / R2 + 1 / R2, 1, 1])


def test_embed_rejects_wrong_dimension():
    with pytest.raises(ValueError):
        cm.embed_point3([1.0, 2.0])


@given(point3)
def test_embedding_lands_on_chart(p):
    x = cm.embed_point3(p)
    assert abs(mk.lorentz_form(x, x)) <= 1e-12 * max(1.0, np.dot(p, p))
    assert mk.lorentz_form(x, N) == pytest.approx(-1)


@given(point3, point3)
def test_polarization_isometry(x, y):
    ex, ey = cm.embed_point3(x), cm.embed_point3(y)
    d2 = np.dot(x - y, y - x) / 2
    assert mk.lorentz_form(ex, ey) == pytest.approx(d2, abs=1e-12 * (1 + np.dot(x, x) + np.dot(y, y)))
    diff = ex - ey
    assert mk.lorentz_form(diff, diff) == pytest.approx(np.dot(x - y, x - y), abs=1e-10 * (1 + np.dot(x, x) + np.dot(y, y)))


@given(point3)
def test_project_roundtrip_and_scale(p):
    x = cm.embed_point3(p)
    assert np.allclose(cm.project_to_E3(x), p, atol=1e-12 * max(1.0, np.abs(p).max()))
    assert np.allclose(cm.project_to_E3(7 * x), p, atol=1e-12 * max(1.0, np.abs(p).max()))


def test_point_at_infinity_is_degenerate():
    with pytest.raises(DegeneratePoint):
        cm.project_to_E3(3.0 * np.array([1, 1, 0, 0, 0]))


def test_unit_sphere():
    sigma = cm.sphere_from_center_radius([0, 0, 0], 1.0)
    assert mk.lorentz_form(sigma, sigma) == pytest.approx(1)
    for p in np.vstack([np.eye(3), -np.eye(3)]):
        assert mk.lorentz_form(sigma, cm.embed_point3(p)) == pytest.approx(0, abs=1e-12)
    assert mk.lorentz_form(sigma, cm.embed_point3([0, 0, 0])) < 0


@given(point3, st.floats(0.1, 5.0), arrays(np.float64, 3, elements=st.floats(-1, 1)))
def test_sphere_contains_its_points(c, r, d):
    if np.linalg.norm(d) < 1e-3:
        d = np.array([0.0, 0.0, 1.0])
    sigma = cm.sphere_from_center_radius(c, r)
    x = cm.embed_point3(c + r * d / np.linalg.norm(d))
    assert abs(mk.lorentz_form(sigma, x)) <= 1e-9 * max(1.0, np.dot(c, c))
    assert mk.lorentz_form(sigma, cm.embed_point3(c)) < 0


def test_huge_sphere_approaches_plane():
    sigma = cm.sphere_from_center_radius([0, 0, 0], 1e6)
    assert abs(mk.lorentz_form(sigma, N)) < 1e-5


def test_circle_through_three_points():
    gamma = cm.circle_from_three_points([1, 0, 0], [0, 1, 0], [-1, 0, 0])
    assert mk.grassmann_inner(gamma, gamma) == pytest.approx(1)
    assert mk.plucker_residual(gamma) <= 1e-12
    for phi in np.linspace(0, 2 * np.pi, 7):
        assert cm.circle_incidence(gamma, [np.cos(phi), np.sin(phi), 0]) <= 1e-10
    assert cm.circle_incidence(gamma, [0, 0, 1]) > 0.1


def test_collinear_points_are_degenerate():
    with pytest.raises(DegenerateCircle):
        cm.circle_from_three_points([0, 0, 0], [1, 1, 1], [2, 2, 2])
    with pytest.raises(DegenerateCircle):
        cm.circle_from_three_points([0, 0, 0], [0, 0, 0], [1, 0, 0])


@given(seeds)
def test_random_mobius_is_lorentz(seed):
    L = cm.random_mobius(seed).matrix
    eta = np.diag(mk.ETA5)
    assert np.max(np.abs(L.T @ eta @ L - eta)) <= 1e-10
    assert L[0, 0] > 0


@given(seeds, arrays(np.float64, 5, elements=st.floats(-1, 1)), arrays(np.float64, 5, elements=st.floats(-1, 1)))
def test_mobius_preserves_form(seed, x, y):
    L = cm.random_mobius(seed)
    assert mk.lorentz_form(L(x), L(y)) == pytest.approx(mk.lorentz_form(x, y), abs=1e-10)


def test_random_mobius_is_seeded():
    assert np.array_equal(cm.random_mobius(7).matrix, cm.random_mobius(7).matrix)
    assert not np.array_equal(cm.random_mobius(7).matrix, cm.random_mobius(8).matrix)


def test_identity_fixes_everything():
    ident = cm.MobiusMap(np.eye(5))
    x = np.array([0.3, 1.0, -2.0, 0.5, 4.0])
    assert np.array_equal(ident(x), x)


def test_non_lorentz_rejected():
    with pytest.raises(ValueError):
        cm.MobiusMap(2 * np.eye(5))
    with pytest.raises(ValueError):
        cm.MobiusMap(np.diag([-1.0, -1, 1, 1, 1]))


def test_rotation_acts_as_rotation():
    phi = 0.7
    R = np.array([[np.cos(phi), -np.sin(phi), 0], [np.sin(phi), np.cos(phi), 0], [0, 0, 1]])
    L = cm.rotation_mobius(R)
    pts = np.random.default_rng(1).normal(size=(6, 3))
    assert np.allclose(L.on_points(pts), pts @ R.T, atol=1e-12)


def _wedge_action(L):
    """Induced action of ``L`` on Plucker coordinates."""
    out = np.zeros((10, 10))
    for r, (i, j) in enumerate(mk.PAIRS):
        for c, (k, l) in enumerate(mk.PAIRS):
            out[r, c] = L[i, k] * L[j, l] - L[i, l] * L[j, k]
    return out


@given(seeds)
def test_mobius_maps_models_to_models(seed):
    L = cm.random_mobius(seed)
    rng = np.random.default_rng(seed)
    # light cone to light cone
    x = L(cm.embed_point3(rng.uniform(-1, 1, 3)))
    assert abs(mk.lorentz_form(x, x)) <= 1e-10 * np.dot(x, x)
    # de Sitter space to de Sitter space, and incidence is kept
    sigma = cm.sphere_from_center_radius(rng.uniform(-1, 1, 3), 0.7)
    assert mk.lorentz_form(L(sigma), L(sigma)) == pytest.approx(1)
    # wedge commutes with the induced action
    u, v = rng.normal(size=(2, 5))
    assert np.allclose(mk.wedge2(L(u), L(v)), _wedge_action(L.matrix) @ mk.wedge2(u, v), atol=1e-10)


@given(seeds)
def test_mobius_sends_spheres_to_spheres(seed):
    L = cm.random_mobius(seed)
    rng = np.random.default_rng(seed)
    c = rng.uniform(-0.5, 0.5, 3)
    sigma = cm.sphere_from_center_radius(c, 0.8)
    d = rng.normal(size=(5, 3))
    pts = c + 0.8 * d / np.linalg.norm(d, axis=1)[:, None]
    image = cm.embed_point3(L.on_points(pts))
    assert np.all(np.abs(mk.lorentz_form(image, L(sigma))) <= 1e-9)


def test_plane_mobius():
    L = cm.random_mobius(3, dim=4)
    assert L.matrix.shape == (4, 4) and L.dim == 2
    p = np.array([0.2, -0.4])
    assert L.on_points(p).shape == (2,)
