import numpy as np
import pytest

from conformal_curves import conformal_models as cm
from conformal_curves import frames as fr
from conformal_curves import invariants as inv
from conformal_curves import minkowski_core as mk
from conformal_curves.curve_jets import Helix, LogSpiral, PlaneParabola, TrigPolynomial, TwistedCubic
from conformal_curves.errors import OutOfDomain, StepFailure, WindowTooLarge
from conformal_curves.jets import Jet

SPACE_CURVES = [Helix(0.5, 0.5), Helix(1.0, 2.0), TrigPolynomial.trefoil()]
SPACE_IDS = ["helix", "helix12", "trefoil"]


def row_jet(F, k):
    return Jet(F.jet.coeffs[:, k])


# -- frame construction -------------------------------------------------------


@pytest.mark.parametrize("curve", SPACE_CURVES, ids=SPACE_IDS)
@pytest.mark.parametrize("t", [0.4, 2.3])
def test_space_frame_is_isotropic_orthonormal(curve, t):
    F = fr.frames_at(curve, t)
    assert F.defect() <= 1e-8
    assert np.allclose(F.gram(), fr.frame_gram(5), atol=1e-8)
    assert np.allclose(cm.project_to_E3(F.n), curve.point(t), atol=1e-9)
    assert np.allclose(cm.project_to_E3(F["n"]), curve.point(t), atol=1e-9)


@pytest.mark.parametrize("curve", SPACE_CURVES, ids=SPACE_IDS)
def test_space_frame_wedges_give_circle_curve(curve):
    t = 1.2
    p = inv.analyze(curve, t)
    F = fr.build_frames_space(p.sphere, p.Q_jet)
    assert np.allclose(mk.wedge2(F["v2"], F["v3"]), p.circle.gamma.value, atol=1e-10)
    assert np.allclose(mk.wedge2(F["n"], F["v3"]), p.circle.gamma_rho.derivative(1), atol=1e-8)


@pytest.mark.parametrize("curve", SPACE_CURVES, ids=SPACE_IDS)
def test_Q_from_second_derivative_of_n(curve):
    p = inv.analyze(curve, 0.9)
    F = fr.build_frames_space(p.sphere, p.Q_jet)
    a = row_jet(F, 0).derivative(2)
    assert -0.5 * mk.lorentz_form(a, a) == pytest.approx(p.Q, rel=1e-8, abs=1e-10)


def test_remark_identity_for_v1_wedge_v3(trefoil):
    p = inv.analyze(trefoil, 2.0)
    F = fr.build_frames_space(p.sphere, p.Q_jet)
    s = p.sphere.sigma_l
    lhs = mk.wedge2(F["v1"], F["v3"])
    rhs = p.circle.gamma_rho.derivative(2) + p.T**2 * (p.circle.gamma.value - mk.wedge2(s.derivative(1), s.derivative(2)))
    assert np.allclose(lhs, rhs, atol=1e-10)


@pytest.mark.parametrize("curve", [LogSpiral(1.0, 0.2), PlaneParabola(1.0)], ids=["spiral", "parabola"])
def test_plane_frame(curve):
    p = inv.analyze(curve, 0.5)
    F = fr.build_frames_plane(p.circle, p.Q2_jet)
    assert F.plane and F.T is None
    assert F.defect() <= 1e-8
    assert abs(mk.lorentz_form(F.nstar, F.nstar)) <= 1e-8
    g3 = p.circle.gamma_rho.derivative(3)
    assert mk.lorentz_form(g3, g3) == pytest.approx(-2 * p.Q2, rel=1e-8)
    assert np.allclose(cm.project_to_euclidean(F.n), curve.point(0.5), atol=1e-9)


# -- Frenet equations ----------------------------------------------------------


@pytest.mark.parametrize("curve", SPACE_CURVES + [LogSpiral(1.0, 0.2)], ids=SPACE_IDS + ["spiral"])
def test_frenet_residual_small(curve):
    frames = [fr.frames_at(curve, t) for t in np.linspace(0.2, 2.0, 6)]
    assert fr.frenet_residual(frames) <= 1e-6


def test_frenet_residual_detects_wrong_Q(trefoil):
    frames = [fr.frames_at(trefoil, t) for t in (0.5, 1.5)]
    wrong = [f.Q + 0.1 for f in frames]
    scale = max(np.max(np.abs(f.n)) for f in frames)
    assert fr.frenet_residual(frames, Q=wrong) >= 0.05 * scale


def test_frenet_matrix_shapes():
    assert fr.frenet_matrix(-1.0).shape == (4, 4)
    M = fr.frenet_matrix(-1.0, 2.0)
    assert M[2, 3] == 2.0 and M[3, 2] == -2.0 and M[4, 1] == -1.0


def test_frenet_matrix_preserves_gram():
    # M is skew with respect to the frame Gram matrix, so the Gram matrix is a first integral
    G = fr.frame_gram(5)
    M = fr.frenet_matrix(0.7, -1.3)
    assert np.allclose(M @ G + G @ M.T, 0.0)


# -- integration -----------------------------------------------------------------


def test_reference_frame_is_valid():
    assert fr.frame_defect(fr.reference_frame()) <= 1e-15
    assert fr.frame_defect(fr.reference_frame(plane=True)) <= 1e-15


def test_integration_drift_over_span_5():
    sol = fr.frenet_integrate(-0.5, 1.0, span=(0.0, 5.0))
    assert sol.drift <= 1e-8
    assert np.allclose(sol.points[0], 0.0)


def test_zero_torsion_stays_planar():
    sol = fr.frenet_integrate(lambda r: -0.3 + 0.1 * np.sin(r), 0.0, span=(0.0, 4.0))
    assert np.max(np.abs(sol.points[:, 2])) <= 1e-9
    flat = fr.frenet_integrate(lambda r: -0.3 + 0.1 * np.sin(r), plane=True, span=(0.0, 4.0))
    assert flat.points.shape[1] == 2
    assert np.allclose(flat.points, sol.points[:, :2], atol=1e-9)


def test_singular_invariants_raise_step_failure():
    with pytest.raises(StepFailure):
        fr.frenet_integrate(lambda r: 1 / (1 - r) ** 2, 1.0, span=(0.0, 2.0))
    with pytest.raises(StepFailure):
        fr.frenet_integrate(lambda r: 1 / (r - 1), 1.0, span=(0.0, 2.0), max_nfev=5000)
    with pytest.raises(StepFailure):
        fr.frenet_integrate(lambda r: np.nan, 1.0, span=(0.0, 1.0))


def test_bad_initial_frame_shape():
    with pytest.raises(ValueError):
        fr.frenet_integrate(-0.5, 1.0, F0=np.eye(4))


def test_constant_invariants_round_trip():
    sol = fr.frenet_integrate(-0.5, 1.0, span=(0.0, 3.0))
    curve = sol.curve()
    for r in np.linspace(0.3, 2.7, 5):
        p = inv.analyze(curve, r)
        assert p.Q == pytest.approx(-0.5, abs=1e-5)
        assert p.T == pytest.approx(1.0, abs=1e-5)


def test_helix_frame_reproduces_the_helix(helix):
    # started from a helix frame the solution is the helix itself, so kappa / tau is constant
    t0 = 0.5
    sol = fr.frenet_integrate(-0.5, 1.0, F0=fr.frames_at(helix, t0), span=(0.0, 2.0))
    fds = [inv.analyze(sol.curve(), r).frenet for r in (0.3, 1.0, 1.7)]
    ratios = [fd.kappa / fd.tau for fd in fds]
    assert np.ptp(ratios) <= 1e-8
    # unit helix: rho = t / sqrt2
    assert np.allclose(sol.points[-1], helix.point(t0 + 2.0 * np.sqrt(2)), atol=1e-8)


def test_plane_round_trip():
    Q2 = -1.3
    curve = fr.frenet_integrate(Q2, plane=True, span=(0.0, 2.0)).curve()
    for r in (0.4, 1.6):
        assert inv.analyze(curve, r).Q2 == pytest.approx(Q2, abs=1e-5)


def test_reconstructed_jets_match_the_solution():
    sol = fr.frenet_integrate(lambda r: -0.5 + 0.2 * r, lambda r: 1.0 + 0.1 * r, span=(0.0, 2.0))
    curve = sol.curve()
    jet = curve.jet(1.0, 4)
    assert np.allclose(jet.value, cm.project_to_E3(sol.frame(1.0)[0]), atol=1e-12)


def test_trefoil_profiles_round_trip(trefoil):
    prof = fr.invariant_profiles(trefoil, rho_span=2.0)
    sol = fr.frenet_integrate(prof.Q, prof.T, F0=prof.frame, span=(0.0, 2.0))
    assert sol.drift <= 1e-8
    curve = sol.curve()
    worst = 0.0
    for r in np.linspace(0.05, 1.95, 12):
        p = inv.analyze(curve, r)
        worst = max(worst, abs(p.Q - prof.Q(r)), abs(p.T - prof.T(r)))
    assert worst <= 1e-5


def test_profile_out_of_range():
    rho = np.linspace(0.0, 1.0, 11)
    prof = fr.Profile.from_samples(rho, np.sin(rho))
    assert prof(0.5) == pytest.approx(np.sin(0.5), abs=1e-6)
    assert prof.jet(0.5, 3).derivative(1) == pytest.approx(np.cos(0.5), abs=1e-5)
    with pytest.raises(OutOfDomain):
        prof(1.5)
    with pytest.raises(OutOfDomain):
        prof.jet(-0.5, 3)
    with pytest.raises(ValueError):
        fr.Profile.from_samples(rho[::-1], rho)


# -- normal form -------------------------------------------------------------------


def check_normal_form(curve, t0, tol=1e-4):
    p = inv.analyze(curve, t0)
    if isinstance(p, inv.PlanePoint):
        target = fr.normal_form_targets(p.Q2)
    else:
        dT = float(p.T_jet.derivative(1))
        target = fr.normal_form_targets(p.Q, p.T, dT)
    nf = fr.normal_form(curve, t0)
    for key, want in target.items():
        got = nf.as_dict()[key]
        assert abs(got - want) <= tol * max(abs(want), 1.0), key
    return nf, target


def test_normal_form_helix(helix):
    nf, target = check_normal_form(helix, 1.0)
    assert target == pytest.approx({"y3": 1 / 6, "y5": -1 / 60, "z4": 1 / 24, "z5": 0.0})
    assert nf.y3 == pytest.approx(1 / 6, abs=1e-5)
    assert all(o >= 5 for o in nf.orders)


@pytest.mark.parametrize("t0", [0.8, 2.9])
def test_normal_form_trefoil(trefoil, t0):
    nf, target = check_normal_form(trefoil, t0)
    assert abs(target["z5"]) > 1e-3  # T varies here


def test_normal_form_plane_curve(spiral):
    nf, target = check_normal_form(spiral, 1.0)
    assert nf.z4 == 0.0 and nf.z5 == 0.0
    assert target["y5"] == pytest.approx(2 * inv.analyze(spiral, 1.0).Q2 / 120)


@pytest.mark.parametrize("curve,t0", [(Helix(1.0, 2.0), 1.0), (TrigPolynomial.trefoil(), 2.0), (LogSpiral(1.0, 0.2), 1.0)])
def test_normal_form_series_matches_targets(curve, t0):
    series, _ = fr.normal_form_series(curve, t0)
    p = inv.analyze(curve, t0)
    if isinstance(p, inv.PlanePoint):
        target = fr.normal_form_targets(p.Q2)
    else:
        target = fr.normal_form_targets(p.Q, p.T, float(p.T_jet.derivative(1)))
    for key, want in target.items():
        assert series[key] == pytest.approx(want, abs=1e-9), key


def test_normal_form_window_too_large():
    with pytest.raises(WindowTooLarge):
        fr.normal_form(TwistedCubic(), 0.9, window=0.5)


# -- bivector frames ---------------------------------------------------------------


@pytest.mark.parametrize("curve", SPACE_CURVES, ids=SPACE_IDS)
def test_bivector_frame_split(curve):
    F = fr.frames_at(curve, 1.4)
    bf = fr.bivector_frames10(F)
    assert bf.ok
    unit = [k for k, q in bf.norms.items() if abs(q - 1) <= 1e-8]
    null = [k for k, c in bf.classes.items() if c == mk.LIGHT_LIKE]
    assert sorted(unit) == sorted(["n^n*", "v1^v2", "v1^v3", "v2^v3"])
    assert len(null) == 6
    assert bf.norms["n^n*"] == pytest.approx(1.0)
    assert bf.coordinate_norms["n^n*"] == pytest.approx(-1.0)


def test_bivector_frame_degenerate():
    F = fr.frames_at(Helix(0.5, 0.5), 1.0).vectors.copy()
    F[-1] = F[0]
    assert not fr.bivector_frames10(F).ok
