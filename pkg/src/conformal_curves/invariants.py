"""Osculating circles and spheres, and the conformal invariants of curves.

Two independent routes are implemented.

*Minkowski route.*  The curve is lifted to the light cone.  The osculating
sphere ``sigma`` is the normalized Lorentz cross product of the lift and its
first three derivatives; the osculating circle is the complement of the
span of the lift and its first two derivatives.  The conformal arc length
``rho`` is read off the circle curve (``d rho = <gamma'', gamma''>^(1/4) dt``
in any parameter ``t``), the sphere curve's arc length ``l`` off ``sigma``,
and ``T = dl/d rho``, ``Q = -1/2 <gamma''', gamma'''> + 3 <sigma', sigma'>``
(derivatives in ``rho``).

*Euclidean route.*  Closed forms in curvature, torsion and
``nu = sqrt(kappa'^2 + kappa^2 tau^2)``.

All derivatives come from one jet stack per sample; reparametrizations are
compositions with reverted parameter jets.
"""

from dataclasses import dataclass, field

import numpy as np

from . import conformal_models as models
from . import minkowski_core as mk
from .curve_jets import DEFAULT_ORDER, frenet_data, reparam_arclength
from .errors import PlanarOrSpherical, VertexPoint, WindowTooLarge
from .jets import Jet, multilinear

T_TOL = 1e-6
VERTEX_TOL = 1e-10


def lorentz(a, b):
    return multilinear(mk.lorentz_form, a, b)


def grassmann(a, b):
    return multilinear(mk.grassmann_inner, a, b)


def wedge(a, b):
    return multilinear(mk.wedge2, a, b)


def _unit(jet, form):
    q = form(jet, jet)
    return jet * q**-0.5 if q.value > 0 else jet * (-q) ** -0.5


def _parameter_maps(density):
    """Forward displacement jet ``p(t) - p(t0)`` and its inverse from ``dp/dt``."""
    forward = density.integ(0.0)
    return forward, forward.revert()


def _future_pointing(n):
    return mk.lorentz_form(n, models._chart_normal(len(n))) < 0


@dataclass(frozen=True)
class OsculatingSphereCurve:
    """The curve of osculating spheres near one sample.

    Jets are displacement expansions about the sample in the input parameter
    ``t`` (``sigma``), in the sphere curve's arc length (``sigma_l``) and in
    the conformal arc length (``sigma_rho``).
    """

    sigma: Jet
    sigma_l: Jet
    sigma_rho: Jet
    dl_dt: Jet
    drho_dt: Jet
    t_of_l: Jet
    t_of_rho: Jet
    l_of_rho: Jet
    flipped: bool = False


@dataclass(frozen=True)
class OsculatingCircleCurve:
    """The curve of osculating circles near one sample.

    ``gamma`` is a bivector jet for space curves and a vector jet of R^4_1
    for plane curves; ``gamma_l`` is only defined for space curves.
    """

    gamma: Jet
    gamma_rho: Jet
    drho_dt: Jet
    t_of_rho: Jet
    gamma_l: Jet = None
    flipped: bool = False


def circle_trivector(lifted):
    """Unit bivector jet of ``span(m, m', m'')^perp`` for a lifted space curve."""
    d1, d2 = lifted.deriv(), lifted.deriv(2)
    raw = multilinear(mk.trivector_complement, lifted, d1, d2)
    return _unit(raw, grassmann)


def conformal_density(gamma, form):
    """``d rho / dt = <gamma_tt, gamma_tt>^(1/4)`` for a unit circle curve jet."""
    acc = gamma.deriv(2)
    q = form(acc, acc)
    if q.value <= 0:
        raise VertexPoint(f"<gamma'', gamma''> = {q.value:.3e} is not positive")
    return q**0.25


def osculating_sphere(m_jet, vertex_tol=VERTEX_TOL, t_tol=T_TOL):
    """Osculating sphere curve of a space curve jet (any regular parameter).

    ``sigma`` is the unit vector ``m x m' x m'' x m'''``, flipped if needed so
    that ``n = T (sigma + sigma_ll)`` is future-pointing (a positive multiple
    of the lifted point).
    """
    if m_jet.shape != (3,):
        raise ValueError("osculating spheres are defined for curves in E^3")
    lifted = models.embed_jet(m_jet)
    d = [lifted.deriv(k) for k in range(4)]
    d[0] = lifted
    w = multilinear(mk.lorentz_cross4, *d)
    hadamard = np.prod([np.linalg.norm(x.value) for x in d])
    if np.linalg.norm(w.value) <= vertex_tol * hadamard:
        raise VertexPoint("osculating circle has contact of order > 2")
    sigma = _unit(w, lorentz)

    drho_dt = conformal_density(circle_trivector(lifted), grassmann)
    speed_sq = lorentz(sigma.deriv(), sigma.deriv())
    if speed_sq.value <= (t_tol * drho_dt.value) ** 2:
        raise PlanarOrSpherical("osculating sphere is stationary (T = 0)")
    dl_dt = speed_sq.sqrt()

    l_of_t, t_of_l = _parameter_maps(dl_dt)
    rho_of_t, t_of_rho = _parameter_maps(drho_dt)
    l_of_rho = l_of_t.compose(t_of_rho)
    sigma_l = sigma.compose(t_of_l)

    T0 = dl_dt.value / drho_dt.value
    flipped = not _future_pointing(T0 * (sigma_l.value + sigma_l.derivative(2)))
    if flipped:
        sigma, sigma_l = -sigma, -sigma_l
    return OsculatingSphereCurve(
        sigma=sigma,
        sigma_l=sigma_l,
        sigma_rho=sigma.compose(t_of_rho),
        dl_dt=dl_dt,
        drho_dt=drho_dt,
        t_of_l=t_of_l,
        t_of_rho=t_of_rho,
        l_of_rho=l_of_rho,
        flipped=flipped,
    )


def osculating_circle_bivector(sphere):
    """``gamma = sigma ^ d sigma / dl`` along the sphere curve."""
    gamma = wedge(sphere.sigma, sphere.sigma.deriv() / sphere.dl_dt)
    return OsculatingCircleCurve(
        gamma=gamma,
        gamma_rho=gamma.compose(sphere.t_of_rho),
        gamma_l=gamma.compose(sphere.t_of_l),
        drho_dt=sphere.drho_dt,
        t_of_rho=sphere.t_of_rho,
    )


def osculating_circle_plane(m_jet):
    """Osculating circle curve ``gamma = m x m' x m''`` (normalized) of a plane curve.

    The sign is chosen so that ``d gamma / d rho`` is future-pointing.
    """
    if m_jet.shape != (2,):
        raise ValueError("expected a curve in E^2")
    lifted = models.embed_jet(m_jet)
    raw = multilinear(mk.lorentz_cross3, lifted, lifted.deriv(), lifted.deriv(2))
    if np.linalg.norm(raw.value) == 0.0:
        raise VertexPoint("degenerate osculating circle")
    gamma = _unit(raw, lorentz)
    drho_dt = conformal_density(gamma, lorentz)
    _, t_of_rho = _parameter_maps(drho_dt)
    gamma_rho = gamma.compose(t_of_rho)
    flipped = not _future_pointing(gamma_rho.derivative(1))
    if flipped:
        gamma, gamma_rho = -gamma, -gamma_rho
    return OsculatingCircleCurve(gamma=gamma, gamma_rho=gamma_rho, drho_dt=drho_dt, t_of_rho=t_of_rho, flipped=flipped)


def osculating_circle_trivector_check(m_jet, circle):
    """Largest principal angle between the planes of ``span(m, m', m'')^perp`` and ``gamma``."""
    tri = circle_trivector(models.embed_jet(m_jet))
    return mk.principal_angle(mk.plane_basis(tri.value), mk.plane_basis(circle.gamma.value))


T_ROUTES = ("dl_drho", "sigma_rho", "gamma_l", "sigma_lll")


def conformal_T(sphere, route="dl_drho", circle=None):
    """Conformal torsion (positive) by one of several equivalent formulas.

    ``dl_drho``   ratio of the sphere-curve and conformal arc lengths
    ``sigma_rho`` ``sqrt(<sigma', sigma'>)`` in ``rho``
    ``gamma_l``   ``<gamma'', gamma''>^(-1/4)`` in ``l``
    ``sigma_lll`` ``(<sigma''', sigma'''> - 1)^(-1/4)`` in ``l``
    """
    if route == "dl_drho":
        return float(sphere.dl_dt.value / sphere.drho_dt.value)
    if route == "sigma_rho":
        v = sphere.sigma_rho.derivative(1)
        return float(np.sqrt(mk.lorentz_form(v, v)))
    if route == "gamma_l":
        circle = circle or osculating_circle_bivector(sphere)
        a = circle.gamma_l.derivative(2)
        return float(mk.grassmann_inner(a, a) ** -0.25)
    if route == "sigma_lll":
        a = sphere.sigma_l.derivative(3)
        return float((mk.lorentz_form(a, a) - 1.0) ** -0.25)
    raise ValueError(f"unknown T route {route!r}; choose from {T_ROUTES}")


def conformal_Q_jet(circle, sphere):
    """``Q(rho) = -1/2 <gamma''', gamma'''> + 3 <sigma', sigma'>`` as a jet in ``rho``."""
    g3 = circle.gamma_rho.deriv(3)
    s1 = sphere.sigma_rho.deriv()
    return grassmann(g3, g3) * -0.5 + lorentz(s1, s1) * 3.0


def conformal_Q_minkowski(circle, sphere):
    return float(conformal_Q_jet(circle, sphere).value)


def conformal_T_jet(sphere):
    """``T(rho) = dl/d rho`` as a jet in ``rho``."""
    return sphere.l_of_rho.deriv()


def conformal_Q2_jet(circle):
    """``Q_2(rho) = -1/2 <gamma''', gamma'''>`` for a plane circle curve."""
    g3 = circle.gamma_rho.deriv(3)
    return lorentz(g3, g3) * -0.5


def conformal_Q2_plane(circle):
    return float(conformal_Q2_jet(circle).value)


def conformal_Q_euclidean(fd):
    """``(4 (nu'' - kappa^2 nu) nu - 5 nu'^2) / (8 nu^3)``."""
    if fd.nu <= 0:
        raise VertexPoint("nu vanishes")
    nu = fd.nu
    return (4 * (fd.ddnu - fd.kappa**2 * nu) * nu - 5 * fd.dnu**2) / (8 * nu**3)


def conformal_T_euclidean(fd, signed=False):
    """``|2 kappa'^2 tau + kappa^2 tau^3 + kappa kappa' tau' - kappa kappa'' tau| / nu^(5/2)``.

    With ``signed=True`` the sign of the numerator is kept.
    """
    if fd.nu <= 0:
        raise VertexPoint("nu vanishes")
    k, dk, ddk, t, dt = fd.kappa, fd.dkappa, fd.ddkappa, fd.tau, fd.dtau
    val = (2 * dk**2 * t + k**2 * t**3 + k * dk * dt - k * ddk * t) / fd.nu**2.5
    return val if signed else abs(val)


@dataclass(frozen=True)
class InvariantRecord:
    """Invariants at one sample, by one route (``"minkowski"`` or ``"euclidean"``).

    For plane curves ``Q`` holds ``Q_2`` and ``T`` is zero.
    """

    t: float
    s: float
    rho: float
    kappa: float
    tau: float
    nu: float
    T: float
    Q: float
    route: str
    T_sign: int = 1
    drho_dt: float = float("nan")


@dataclass
class SpacePoint:
    """Everything computed at one sample of a space curve."""

    t: float
    jet: Jet
    sphere: OsculatingSphereCurve
    circle: OsculatingCircleCurve
    frenet: object
    T_routes: dict = field(default_factory=dict)

    @property
    def T(self):
        return self.T_routes["dl_drho"]

    @property
    def Q(self):
        return conformal_Q_minkowski(self.circle, self.sphere)

    @property
    def Q_jet(self):
        return conformal_Q_jet(self.circle, self.sphere)

    @property
    def T_jet(self):
        return conformal_T_jet(self.sphere)

    @property
    def Q_euclidean(self):
        return conformal_Q_euclidean(self.frenet)

    @property
    def T_euclidean(self):
        return conformal_T_euclidean(self.frenet)

    @property
    def drho_dt(self):
        return float(self.sphere.drho_dt.value)


@dataclass
class PlanePoint:
    """Everything computed at one sample of a plane curve."""

    t: float
    jet: Jet
    circle: OsculatingCircleCurve
    frenet: object

    @property
    def Q2(self):
        return conformal_Q2_plane(self.circle)

    @property
    def Q2_jet(self):
        return conformal_Q2_jet(self.circle)

    @property
    def Q_euclidean(self):
        return conformal_Q_euclidean(self.frenet)

    @property
    def drho_dt(self):
        return float(self.circle.drho_dt.value)


def analyze_space(curve, t, order=DEFAULT_ORDER):
    """Run both routes at parameter ``t`` of a space curve (or on a given jet)."""
    jet = curve if isinstance(curve, Jet) else curve.jet(t, order)
    sphere = osculating_sphere(jet)
    circle = osculating_circle_bivector(sphere)
    fd = frenet_data(reparam_arclength(jet))
    routes = {r: conformal_T(sphere, r, circle) for r in T_ROUTES}
    return SpacePoint(t=t, jet=jet, sphere=sphere, circle=circle, frenet=fd, T_routes=routes)


def analyze_plane(curve, t, order=DEFAULT_ORDER):
    jet = curve if isinstance(curve, Jet) else curve.jet(t, order)
    circle = osculating_circle_plane(jet)
    fd = frenet_data(reparam_arclength(jet))
    return PlanePoint(t=t, jet=jet, circle=circle, frenet=fd)


def analyze(curve, t, order=DEFAULT_ORDER):
    return analyze_plane(curve, t, order) if curve.dim == 2 else analyze_space(curve, t, order)


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(8)


def cumulative(density, ts):
    """Cumulative integral of ``density(t)`` over the grid ``ts`` (8-point Gauss per cell)."""
    ts = np.asarray(ts, dtype=float)
    out = np.zeros(len(ts))
    for k in range(1, len(ts)):
        a, b = ts[k - 1], ts[k]
        x = 0.5 * (b - a) * _GL_NODES + 0.5 * (a + b)
        out[k] = out[k - 1] + 0.5 * (b - a) * sum(w * density(xi) for w, xi in zip(_GL_WEIGHTS, x))
    return out


def _tail(prim, h):
    c = np.asarray(prim.coeffs[-2:], dtype=float)
    return float(np.sum(np.abs(c) * abs(h) ** np.arange(len(prim.coeffs) - 2, len(prim.coeffs))))


def cumulative_from_jets(ts, density_jets, density=None, rtol=1e-6):
    """Cumulative integral from density jets at the grid points.

    Each cell is split at its midpoint and integrated with the Taylor
    expansion of the nearer end point.  Where the two end expansions disagree
    on the whole cell by more than ``rtol`` the cell is too wide for the jets;
    it is then integrated with Gauss quadrature of ``density`` on 16 sub-cells,
    or :class:`WindowTooLarge` is raised when no ``density`` is given.
    """
    ts = np.asarray(ts, dtype=float)
    prims = [j.integ(0.0) for j in density_jets]
    out = np.zeros(len(ts))
    for k in range(1, len(ts)):
        h = 0.5 * (ts[k] - ts[k - 1])
        left, right = prims[k - 1], prims[k]
        full_l, full_r = float(left(2 * h)), -float(right(-2 * h))
        agree = abs(full_l - full_r) <= rtol * max(abs(full_l), abs(full_r), 1e-300)
        # symmetric curves can make divergent end expansions agree; test the tails too
        if agree and _tail(left, h) + _tail(right, -h) <= rtol * abs(full_l):
            out[k] = out[k - 1] + float(left(h)) - float(right(-h))
        elif density is not None:
            sub = np.linspace(ts[k - 1], ts[k], 17)
            out[k] = out[k - 1] + cumulative(density, sub)[-1]
        else:
            raise WindowTooLarge(f"grid step {2 * h:.3g} too wide for the density jets at t = {ts[k - 1]:.6g}")
    return out


def speed(curve, t):
    j = curve.jet(t, 1)
    return float(np.linalg.norm(j[1]))


def euclidean_conformal_speed(curve, t):
    """``d rho / dt = sqrt(nu) |m'|`` from the Euclidean route."""
    j = curve.jet(t, 6)
    fd = frenet_data(reparam_arclength(j))
    return float(np.sqrt(fd.nu) * np.linalg.norm(j[1]))


def conformal_speed(curve, t, order=10):
    """``d rho / dt`` from the osculating circle curve."""
    j = curve.jet(t, order)
    lifted = models.embed_jet(j)
    if curve.dim == 2:
        raw = multilinear(mk.lorentz_cross3, lifted, lifted.deriv(), lifted.deriv(2))
        return float(conformal_density(_unit(raw, lorentz), lorentz).value)
    return float(conformal_density(circle_trivector(lifted), grassmann).value)


def conformal_length(curve, a, b, nodes=64):
    """Total conformal arc length of ``curve`` over ``[a, b]`` (Gauss-Legendre)."""
    x, w = np.polynomial.legendre.leggauss(nodes)
    ts = 0.5 * (b - a) * x + 0.5 * (a + b)
    return 0.5 * (b - a) * float(sum(wi * conformal_speed(curve, ti) for wi, ti in zip(w, ts)))


def invariant_table(curve, ts, order=DEFAULT_ORDER):
    """Paired (Minkowski, Euclidean) :class:`InvariantRecord` rows over ``ts``."""
    ts = np.asarray(ts, dtype=float)
    s = cumulative(lambda t: speed(curve, t), ts)
    rho = cumulative(lambda t: euclidean_conformal_speed(curve, t), ts)
    rows = []
    for k, t in enumerate(ts):
        p = analyze(curve, t, order)
        fd = p.frenet
        common = dict(t=float(t), s=float(s[k]), rho=float(rho[k]), kappa=fd.kappa, tau=fd.tau, nu=fd.nu)
        if curve.dim == 2:
            mink = InvariantRecord(**common, T=0.0, Q=p.Q2, route="minkowski", drho_dt=p.drho_dt)
            eucl = InvariantRecord(**common, T=0.0, Q=p.Q_euclidean, route="euclidean")
        else:
            sign = int(np.sign(conformal_T_euclidean(fd, signed=True)) or 1)
            mink = InvariantRecord(**common, T=p.T, Q=p.Q, route="minkowski", drho_dt=p.drho_dt)
            eucl = InvariantRecord(**common, T=p.T_euclidean, Q=p.Q_euclidean, route="euclidean", T_sign=sign)
        rows.append((mink, eucl))
    return rows


# -- multiplication tables ---------------------------------------------------


def _table(jet, form, n):
    vecs = [jet.derivative(k) for k in range(n + 1)]
    return np.array([[form(a, b) for b in vecs] for a in vecs])


def table1_expected(Q2):
    """Cells (i, j) -> value of ``<d^i gamma/d rho^i, d^j gamma/d rho^j>``."""
    cells = {
        (0, 0): 1, (0, 1): 0, (0, 2): 0, (0, 3): 0, (0, 4): 1, (0, 5): 0, (0, 6): 2 * Q2,
        (1, 1): 0, (1, 2): 0, (1, 3): -1, (1, 4): 0, (1, 5): -2 * Q2,
        (2, 2): 1, (2, 3): 0, (2, 4): 2 * Q2,
        (3, 3): -2 * Q2,
    }  # fmt: skip
    return {k: float(v) for k, v in cells.items()}


def table2_expected(T, dT):
    """Cells of ``<d^i sigma/dl^i, d^j sigma/dl^j>``; ``dT = dT/dl``."""
    cells = {
        (0, 0): 1, (0, 1): 0, (0, 2): -1, (0, 3): 0, (0, 4): 1,
        (1, 1): 1, (1, 2): 0, (1, 3): -1, (1, 4): 0,
        (2, 2): 1, (2, 3): 0, (2, 4): -(1 + T**-4),
        (3, 3): 1 + T**-4, (3, 4): -2 * T**-5 * dT,
    }  # fmt: skip
    return {k: float(v) for k, v in cells.items()}


def table3_expected(F2, F3, F4):
    """Cells of ``<d^i m/ds^i, d^j m/ds^j>`` for the lifted curve.

    ``F2, F3, F4`` are arrays of their values and arc-length derivatives.
    """
    cells = {
        (0, 0): 0, (0, 1): 0, (0, 2): -1, (0, 3): 0, (0, 4): F2[0], (0, 5): 2.5 * F2[1],
        (1, 1): 1, (1, 2): 0, (1, 3): -F2[0], (1, 4): -1.5 * F2[1], (1, 5): -2 * F2[2] + F3[0],
        (2, 2): F2[0], (2, 3): 0.5 * F2[1], (2, 4): 0.5 * F2[2] - F3[0], (2, 5): 0.5 * F2[3] - 1.5 * F3[1],
        (3, 3): F3[0], (3, 4): 0.5 * F3[1], (3, 5): 0.5 * F3[2] - F4[0],
        (4, 4): F4[0], (4, 5): 0.5 * F4[1],
    }  # fmt: skip
    return {k: float(v) for k, v in cells.items()}


def euclidean_F(jet_s):
    """Jets in ``s`` of ``F_2 = kappa^2``, ``F_3``, ``F_4`` built from curvature and torsion."""
    from .curve_jets import _pad3, _triple

    m = _pad3(jet_s)
    d1, d2, d3 = m.deriv(), m.deriv(2), m.deriv(3)
    k2 = multilinear(lambda a, b: np.einsum("...i,...i->...", a, b), d2, d2)
    kappa = k2.sqrt()
    tau = multilinear(_triple, d1, d2, d3) / k2
    dk, ddk, dt = kappa.deriv(), kappa.deriv(2), tau.deriv()
    F2 = kappa * kappa
    F3 = F2 * F2 + dk * dk + F2 * tau * tau
    a = kappa * F2 + kappa * tau * tau - ddk
    b = dk * tau * 2.0 + kappa * dt
    F4 = F2 * dk * dk * 9.0 + a * a + b * b
    return F2, F3, F4


def _compare(measured, expected):
    return {k: (float(measured[k]), v, abs(float(measured[k]) - v)) for k, v in expected.items()}


def verify_tables(curve, t, order=DEFAULT_ORDER):
    """Evaluate every cell of the three multiplication tables at ``t``.

    Returns a dict ``name -> {cell: (measured, expected, deviation)}``; the
    expected values use the Euclidean-route invariants, so the check is
    independent of the Minkowski quantities being tabulated.  Space curves
    also get ``"gram"``: ``(det, -T^-12, relative deviation)`` for the Gram
    matrix of ``sigma, ..., sigma^(4)`` in ``l``.
    """
    jet = curve.jet(t, order)
    report = {}
    js = reparam_arclength(jet)
    lifted_s = models.embed_jet(js)
    F2, F3, F4 = euclidean_F(js)
    F2d = np.array([F2.derivative(k) for k in range(4)])
    F3d = np.array([F3.derivative(k) for k in range(3)])
    F4d = np.array([F4.derivative(k) for k in range(2)])
    report["table3"] = _compare(_table(lifted_s, mk.lorentz_form, 5), table3_expected(F2d, F3d, F4d))

    if curve.dim == 2:
        p = analyze_plane(jet, t)
        report["table1"] = _compare(_table(p.circle.gamma_rho, mk.lorentz_form, 6), table1_expected(p.Q_euclidean))
        return report

    p = analyze_space(jet, t)
    T = p.T_euclidean
    # the null circle curve of a space curve obeys the plane table with Q - 3 T^2
    report["table1"] = _compare(_table(p.circle.gamma_rho, mk.grassmann_inner, 6), table1_expected(p.Q_euclidean - 3 * T * T))
    T_l = (p.sphere.dl_dt / p.sphere.drho_dt).compose(p.sphere.t_of_l)
    G = _table(p.sphere.sigma_l, mk.lorentz_form, 4)
    report["table2"] = _compare(G, table2_expected(T, T_l.derivative(1)))
    det = float(np.linalg.det(G))
    target = -(T**-12)
    report["gram"] = (det, target, abs(det - target) / abs(target))
    return report


def max_table_deviation(report):
    return {name: max(c[2] for c in cells.values()) for name, cells in report.items() if name != "gram"}
