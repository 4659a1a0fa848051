"""Isotropic orthonormal moving frames and their Frenet equations.

A space frame is ``(n, v1, v2, v3, n*)`` in R^5_1 with ``n, n*`` light-like,
``<n, n*> = -1`` and ``v_i`` orthonormal and orthogonal to both.  In the
conformal arc length ``rho`` it satisfies ``F' = M F`` with

::

    n'  = v1
    v1' = Q n + n*
    v2' = n + T v3
    v3' = -T v2
    n*' = Q v1 + v2

Plane frames ``(n, v1, v2, n*)`` live in R^4_1 and drop ``v3`` and ``T``.
Rows of every frame array are the frame vectors in this order.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp
from scipy.interpolate import UnivariateSpline

from . import conformal_models as models
from . import invariants as inv
from . import minkowski_core as mk
from .curve_jets import DEFAULT_ORDER, Curve
from .errors import OutOfDomain, PlanarOrSpherical, StepFailure, WindowTooLarge
from .jets import Jet

SPACE_NAMES = ("n", "v1", "v2", "v3", "n*")
PLANE_NAMES = ("n", "v1", "v2", "n*")


def frame_gram(dim):
    """Lorentz Gram matrix every isotropic orthonormal frame must have."""
    g = np.eye(dim)
    g[0, 0] = g[-1, -1] = 0.0
    g[0, -1] = g[-1, 0] = -1.0
    return g


def frenet_matrix(Q, T=None):
    """Frenet matrix; 5x5 for space frames, 4x4 (``T=None``) for plane frames."""
    if T is None:
        return np.array([[0, 1, 0, 0], [Q, 0, 0, 1], [1, 0, 0, 0], [0, Q, 1, 0]], dtype=float)
    return np.array([[0, 1, 0, 0, 0], [Q, 0, 0, 0, 1], [1, 0, 0, T, 0], [0, 0, -T, 0, 0], [0, Q, 1, 0, 0]], dtype=float)


def frame_defect(F):
    """Largest deviation of the frame's Lorentz Gram matrix from the isotropic pattern."""
    F = np.asarray(F, dtype=float)
    g = F @ np.diag(mk._eta(F.shape[-1])) @ np.swapaxes(F, -1, -2)
    return float(np.max(np.abs(g - frame_gram(F.shape[-2]))))


@dataclass(frozen=True)
class FrameSet:
    """A moving frame at one sample.

    ``vectors`` has the frame vectors as rows; ``derivative`` (if known)
    holds ``dF/d rho`` from jets.  ``Q`` is ``Q_2`` for plane frames and
    ``T`` is ``None`` there.
    """

    vectors: np.ndarray
    rho: float = 0.0
    Q: float = float("nan")
    T: float = None
    derivative: np.ndarray = None
    jet: Jet = field(default=None, repr=False)

    @property
    def plane(self):
        return len(self.vectors) == 4

    @property
    def names(self):
        return PLANE_NAMES if self.plane else SPACE_NAMES

    def __getitem__(self, name):
        return self.vectors[self.names.index(name)]

    @property
    def n(self):
        return self.vectors[0]

    @property
    def nstar(self):
        return self.vectors[-1]

    def gram(self):
        return mk.gram(self.vectors)

    def defect(self):
        return frame_defect(self.vectors)

    def matrix(self):
        return frenet_matrix(self.Q, self.T)


def _rows(*jets):
    K = min(j.order for j in jets)
    return Jet(np.stack([j.coeffs[: K + 1] for j in jets], axis=1))


def space_frame_jet(sphere, Q_jet):
    """Jet in ``rho`` of the space frame (rows ``n, v1, v2, v3, n*``)."""
    T = sphere.l_of_rho.deriv()
    s_l = sphere.sigma_l
    n = (s_l + s_l.deriv(2)).compose(sphere.l_of_rho) * T
    v1 = n.deriv()
    v2 = s_l.deriv().compose(sphere.l_of_rho)
    v3 = -sphere.sigma_rho
    nstar = n.deriv(2) - n * Q_jet
    return _rows(n, v1, v2, v3, nstar)


def plane_frame_jet(circle, Q2_jet):
    g = circle.gamma_rho
    n = g.deriv()
    nstar = g.deriv(3) - n * Q2_jet
    return _rows(n, g.deriv(2), g, nstar)


def build_frames_space(sphere, Q_jet, rho=0.0):
    """Space frame from an osculating-sphere curve and the jet of ``Q`` in ``rho``."""
    T = float(sphere.l_of_rho.derivative(1))
    if T <= inv.T_TOL:
        raise PlanarOrSpherical("frames need T > 0")
    F = space_frame_jet(sphere, Q_jet)
    return FrameSet(vectors=F.value, rho=rho, Q=float(Q_jet.value), T=T, derivative=F.derivative(1), jet=F)


def build_frames_plane(circle, Q2_jet, rho=0.0):
    F = plane_frame_jet(circle, Q2_jet)
    return FrameSet(vectors=F.value, rho=rho, Q=float(Q2_jet.value), derivative=F.derivative(1), jet=F)


def frames_at(curve, t, rho=0.0, order=DEFAULT_ORDER):
    """Frame of ``curve`` at parameter ``t`` (space or plane according to ``curve.dim``)."""
    p = inv.analyze(curve, t, order)
    if isinstance(p, inv.PlanePoint):
        return build_frames_plane(p.circle, p.Q2_jet, rho)
    return build_frames_space(p.sphere, p.Q_jet, rho)


def frenet_residual(frames, Q=None, T=None):
    """Largest entry of ``dF/d rho - M F`` over a sequence of frames.

    ``Q`` and ``T`` (scalars or one value per frame) override the values
    stored in the frames, which is how a wrong invariant is detected.
    """
    frames = list(frames)
    Qs = np.broadcast_to(np.asarray([f.Q for f in frames] if Q is None else Q, dtype=float), (len(frames),))
    if frames[0].plane:
        Ts = [None] * len(frames)
    else:
        Ts = np.broadcast_to(np.asarray([f.T for f in frames] if T is None else T, dtype=float), (len(frames),))
    worst = 0.0
    for f, q, tt in zip(frames, Qs, Ts):
        r = f.derivative - frenet_matrix(q, tt) @ f.vectors
        worst = max(worst, float(np.max(np.abs(r))))
    return worst


# -- Frenet integration ------------------------------------------------------


class Profile:
    """A scalar function of ``rho`` that also provides Taylor jets.

    Use :meth:`constant`, :meth:`from_samples` (quintic interpolating
    spline) or :meth:`from_function` (values only; jets are then constant).
    """

    def __init__(self, value, jet=None):
        self._value = value
        self._jet = jet

    def __call__(self, rho):
        return float(self._value(rho))

    def jet(self, rho, order):
        if self._jet is not None:
            return self._jet(rho, order)
        return Jet.constant(self(rho), order)

    @classmethod
    def constant(cls, c):
        c = float(c)
        return cls(lambda rho: c, lambda rho, order: Jet.constant(c, order))

    @classmethod
    def from_function(cls, fn):
        return cls(fn)

    @classmethod
    def from_samples(cls, rho, values):
        rho = np.asarray(rho, dtype=float)
        values = np.asarray(values, dtype=float)
        if rho.ndim != 1 or rho.shape != values.shape or len(rho) < 6:
            raise ValueError("need at least six (rho, value) samples")
        if np.any(np.diff(rho) <= 0):
            raise ValueError("rho samples must be strictly increasing")
        spline = UnivariateSpline(rho, values, k=5, s=0)
        lo, hi = rho[0], rho[-1]
        slack = 1e-9 * max(1.0, hi - lo)

        def jet(r, order):
            if not lo - slack <= r <= hi + slack:
                raise OutOfDomain(f"rho = {r} outside the tabulated range [{lo}, {hi}]")
            r = min(max(r, lo), hi)
            d = np.zeros(order + 1)
            vals = spline.derivatives(r)
            n = min(len(vals), order + 1)
            d[:n] = vals[:n]
            return Jet.from_derivatives(d)

        def value(r):
            if not lo - slack <= r <= hi + slack:
                raise OutOfDomain(f"rho = {r} outside the tabulated range [{lo}, {hi}]")
            return float(spline(r))

        return cls(value, jet)

    @classmethod
    def coerce(cls, x):
        if isinstance(x, Profile):
            return x
        if callable(x):
            return cls.from_function(x)
        return cls.constant(x)


@dataclass
class InvariantProfiles:
    """``Q`` and ``T`` of a curve as functions of ``rho`` (measured from ``t[0]``)."""

    t: np.ndarray
    rho: np.ndarray
    Q: Profile
    T: Profile
    frame: FrameSet
    plane: bool

    def t_of_rho(self, rho):
        return float(UnivariateSpline(self.rho, self.t, k=5, s=0)(rho))


def t_span_for_rho(curve, t0, rho_span, margin=1.05):
    """Smallest ``t1`` (with a small margin) such that ``rho(t1) - rho(t0) >= rho_span``."""
    t, rho = t0, 0.0
    target = rho_span * margin
    hi = curve.interval[1]
    while rho < target:
        step = min(0.05 / inv.conformal_speed(curve, t), hi - t)
        if step <= 0:
            raise OutOfDomain(f"curve is shorter than conformal length {rho_span}")
        rho += inv.conformal_length(curve, t, t + step, nodes=8)
        t += step
    return (t0, t)


def invariant_profiles(curve, t_span=None, samples=121, rho_span=None):
    """Sample ``Q`` (or ``Q_2``) and ``T`` on a uniform ``t`` grid and spline them in ``rho``.

    Give either the parameter range ``t_span`` or ``rho_span`` (measured from
    the start of the curve's interval, or from ``t_span[0]``).
    """
    if rho_span is not None:
        t0 = curve.interval[0] if t_span is None else t_span[0]
        t_span = t_span_for_rho(curve, t0, rho_span)
    ts = np.linspace(t_span[0], t_span[1], samples)
    pts = [inv.analyze(curve, t) for t in ts]
    plane = curve.dim == 2
    dens = [p.circle.drho_dt if plane else p.sphere.drho_dt for p in pts]
    rho = inv.cumulative_from_jets(ts, dens, density=lambda t: inv.conformal_speed(curve, t))
    Q = Profile.from_samples(rho, [p.Q2 if plane else p.Q for p in pts])
    T = Profile.constant(0.0) if plane else Profile.from_samples(rho, [p.T for p in pts])
    p0 = pts[0]
    frame = build_frames_plane(p0.circle, p0.Q2_jet) if plane else build_frames_space(p0.sphere, p0.Q_jet)
    return InvariantProfiles(ts, rho, Q, T, frame, plane)


def reference_frame(plane=False):
    """Frame at the origin of the chart, tangent to the x-axis.

    ``n = e(0)``, ``v_i`` the coordinate axes and ``n*`` the chart normal.
    """
    dim = 4 if plane else 5
    F = np.zeros((dim, dim))
    F[0] = models.embed_point(np.zeros(dim - 2))
    F[1:-1, 2:] = np.eye(dim - 2)
    F[-1] = models._chart_normal(dim)
    return F


@dataclass
class FrenetSolution:
    """Output of :func:`frenet_integrate`."""

    rho: np.ndarray
    frames: np.ndarray
    points: np.ndarray
    drift: float
    Q: Profile
    T: Profile
    plane: bool
    dense: object = field(repr=False, default=None)
    nfev: int = 0

    def frame(self, rho):
        dim = 4 if self.plane else 5
        return self.dense(rho).reshape(dim, dim)

    def curve(self):
        return ReconstructedCurve(self)


class _Budget(Exception):
    pass


def frenet_integrate(
    Q, T=0.0, F0=None, span=(0.0, 5.0), rtol=1e-12, atol=1e-13, plane=False, samples=201, max_nfev=50_000, max_norm=1e8
):
    """Integrate ``F' = M(Q, T) F`` over ``span`` and project ``n`` to the chart.

    ``Q`` and ``T`` are numbers, callables of ``rho`` or :class:`Profile`.
    The frame is never re-orthonormalized, so ``drift`` (the largest Gram
    defect over the output grid) measures solver quality.  Singular
    invariants raise :class:`StepFailure` once the frame grows past
    ``max_norm`` or the right-hand side has been evaluated ``max_nfev`` times.
    """
    Qp, Tp = Profile.coerce(Q), Profile.coerce(T)
    F0 = reference_frame(plane) if F0 is None else np.asarray(getattr(F0, "vectors", F0), dtype=float)
    dim = 4 if plane else 5
    if F0.shape != (dim, dim):
        raise ValueError(f"initial frame must be {dim}x{dim}")
    calls = [0]

    def rhs(rho, y):
        calls[0] += 1
        if calls[0] > max_nfev:
            raise _Budget(rho)
        q, tt = Qp(rho), None if plane else Tp(rho)
        if not np.isfinite(q) or (tt is not None and not np.isfinite(tt)):
            raise _Budget(rho)
        return (frenet_matrix(q, tt) @ y.reshape(dim, dim)).ravel()

    def blowup(rho, y):
        return max_norm - np.max(np.abs(y))

    blowup.terminal = True

    grid = np.linspace(span[0], span[1], samples)
    try:
        sol = solve_ivp(
            rhs, span, F0.ravel(), method="DOP853", t_eval=grid, rtol=rtol, atol=atol, dense_output=True, events=blowup
        )
    except _Budget as stop:
        raise StepFailure(f"integration stalled near rho = {stop.args[0]:.6g}") from None
    if sol.status == 1:
        raise StepFailure(f"frame norm exceeded {max_norm:g} at rho = {sol.t_events[0][0]:.6g}")
    if not sol.success:
        raise StepFailure(sol.message)
    frames = sol.y.T.reshape(-1, dim, dim)
    drift = max(frame_defect(F) for F in frames)
    points = models.project_to_euclidean(frames[:, 0])
    return FrenetSolution(
        rho=sol.t, frames=frames, points=points, drift=drift, Q=Qp, T=Tp, plane=plane, dense=sol.sol, nfev=sol.nfev
    )


def frame_taylor(F, Q_jet, T_jet=None):
    """Taylor jet of the solution of ``F' = M F`` through ``F`` at the base point.

    Uses ``(k+1) F_{k+1} = sum_i M_i F_{k-i}`` with ``M_i`` built from the
    coefficients of the ``Q`` and ``T`` jets.
    """
    plane = T_jet is None
    K = Q_jet.order if plane else min(Q_jet.order, T_jet.order)
    Ms = [frenet_matrix(Q_jet[i], None if plane else T_jet[i]) for i in range(K + 1)]
    # only the constant term keeps the ones of the Frenet matrix
    const = frenet_matrix(0.0, None if plane else 0.0)
    Ms = [Ms[0]] + [m - const for m in Ms[1:]]
    c = [np.asarray(F, dtype=float)]
    for k in range(K):
        c.append(sum(Ms[i] @ c[k - i] for i in range(k + 1)) / (k + 1))
    return Jet(np.array(c))


class ReconstructedCurve(Curve):
    """Curve ``rho -> project(n(rho))`` of a Frenet solution, with exact jets."""

    def __init__(self, solution):
        self.solution = solution
        self.dim = 2 if solution.plane else 3
        self.interval = (float(solution.rho[0]), float(solution.rho[-1]))

    def frame_jet(self, rho, order=DEFAULT_ORDER):
        s = self.solution
        F = s.frame(rho)
        T_jet = None if s.plane else s.T.jet(rho, order)
        return frame_taylor(F, s.Q.jet(rho, order), T_jet)

    def jet(self, t, order=DEFAULT_ORDER):
        self._check(t)
        F = self.frame_jet(t, order)
        return models.project_jet(Jet(F.coeffs[:, 0]))


# -- normal form --------------------------------------------------------------


@dataclass(frozen=True)
class NormalFormCoeffs:
    """Local normal form ``y = y3 x^3 + y5 x^5``, ``z = z4 x^4 + z5 x^5`` (plus O(x^6)).

    ``orders`` are observed convergence orders of the truncation residual
    under window halving; ``history`` keeps the estimates per window.
    """

    y3: float
    y5: float
    z4: float
    z5: float
    window: float
    orders: tuple = ()
    history: tuple = ()

    def as_dict(self):
        return {"y3": self.y3, "y5": self.y5, "z4": self.z4, "z5": self.z5}


def normal_form_targets(Q, T=0.0, dT=0.0):
    """Coefficients predicted by the invariants; ``dT = dT/d rho``."""
    return {"y3": 1 / 6, "y5": (2 * Q - T * T) / 120, "z4": T / 24, "z5": dT / 120}


def _chart_coordinates(points, frame):
    """Coordinates ``<p, v_i>`` of lifted points rescaled to ``<p, n*> = -1``."""
    F = frame.vectors
    scale = -mk.lorentz_form(points, F[-1])
    axes = F[1:-1]
    return np.stack([mk.lorentz_form(points, v) for v in axes], axis=-1) / scale[:, None]


def normal_form_series(curve, t0, order=DEFAULT_ORDER):
    """Normal-form coefficients from exact jets (graph of the curve over the ``v1`` axis)."""
    p = inv.analyze(curve, t0, order)
    frame = build_frames_plane(p.circle, p.Q2_jet) if isinstance(p, inv.PlanePoint) else build_frames_space(p.sphere, p.Q_jet)
    lifted = models.embed_jet(p.jet)
    F = frame.vectors
    scale = -models.multiply_form(lifted, F[-1])
    coords = [models.multiply_form(lifted, v) / scale for v in F[1:-1]]
    t_of_x = coords[0].displacement().revert()
    graph = [c.compose(t_of_x) for c in coords[1:]]
    y = graph[0]
    z = graph[1] if len(graph) > 1 else Jet.constant(0.0, y.order)
    return {"y3": y[3], "y5": y[5], "z4": z[4], "z5": z[5]}, frame


def _fit(x, y, degree):
    return np.polynomial.Polynomial.fit(x, y, degree).convert().coef


def normal_form(curve, t0, window=0.2, degree=7, samples=201, refinements=3, rtol=1e-4):
    """Fit the normal form at ``t0`` by windowed least squares.

    The curve is sampled on ``|rho - rho0| <~ window`` (converted with the
    local ``d rho/dt``), re-charted on ``{<v, n*(t0)> = -1}`` and expressed in
    the ``v1, v2, v3`` axes.  The window is halved ``refinements - 1`` times;
    the last estimate is returned once consecutive estimates agree to ``rtol``
    (relative, with unit floor for zero targets) and the O(x^6) truncation
    residual shrinks at least like ``h^5``.  Otherwise :class:`WindowTooLarge`.
    """
    p = inv.analyze(curve, t0)
    if isinstance(p, inv.PlanePoint):
        frame = build_frames_plane(p.circle, p.Q2_jet)
    else:
        frame = build_frames_space(p.sphere, p.Q_jet)
    speed = p.drho_dt
    lo, hi = curve.interval
    history, residuals = [], []
    h = window
    for _ in range(refinements):
        dt = h / speed
        if t0 - dt < lo or t0 + dt > hi:
            raise WindowTooLarge(f"window {h:g} leaves the curve's interval")
        ts = np.linspace(t0 - dt, t0 + dt, samples)
        xyz = _chart_coordinates(models.embed_point(curve.points(ts)), frame)
        x = xyz[:, 0]
        cy = _fit(x, xyz[:, 1], degree)
        cz = _fit(x, xyz[:, 2], degree) if xyz.shape[1] > 2 else np.zeros(degree + 1)
        est = {"y3": cy[3], "y5": cy[5], "z4": cz[4], "z5": cz[5]}
        low = [np.polynomial.polynomial.polyval(x, np.where(np.arange(len(c)) <= 5, c, 0.0)) for c in (cy, cz)]
        resid = max(np.max(np.abs(xyz[:, 1] - low[0])), np.max(np.abs(xyz[:, 2] - low[1])) if xyz.shape[1] > 2 else 0.0)
        history.append((h, est))
        residuals.append(resid)
        h /= 2
    orders = tuple(float(np.log2(a / b)) if b > 0 and a > 1e-13 else float("inf") for a, b in zip(residuals, residuals[1:]))
    last, prev = history[-1][1], history[-2][1]
    spread = max(abs(last[k] - prev[k]) / max(abs(last[k]), 1.0) for k in last)
    if spread > rtol or any(o < 5.0 for o in orders):
        raise WindowTooLarge(f"estimates not converged (spread {spread:.2e}, orders {orders})")
    return NormalFormCoeffs(**last, window=history[-1][0], orders=orders, history=tuple(history))


# -- bivector frames ------------------------------------------------------------

BIVECTOR_PAIRS = (
    ("n^n*", 0, 4),
    ("v1^v2", 1, 2),
    ("v1^v3", 1, 3),
    ("v2^v3", 2, 3),
    ("n^v1", 0, 1),
    ("n^v2", 0, 2),
    ("n^v3", 0, 3),
    ("v1^n*", 1, 4),
    ("v2^n*", 2, 4),
    ("v3^n*", 3, 4),
)


@dataclass(frozen=True)
class BivectorFrame:
    """Wedges of a frame; ``norms`` use the convention of each wedge's own plane."""

    bivectors: dict
    norms: dict
    coordinate_norms: dict
    classes: dict
    ok: bool


def bivector_frames10(frame, tol=1e-8):
    """The ten wedges of a space frame with their norms and causal classes.

    A wedge spanning a time-like plane is measured with the ``-det``
    convention, so ``n ^ n*`` has norm ``+1``; ``coordinate_norms`` keeps the
    plain coordinate form, under which it is ``-1``.  ``ok`` is true iff four
    wedges have norm 1 and six are null.
    """
    F = getattr(frame, "vectors", frame)
    biv, norms, raw, classes = {}, {}, {}, {}
    for name, i, j in BIVECTOR_PAIRS:
        b = mk.wedge2(F[i], F[j])
        g = np.linalg.det(mk.gram([F[i], F[j]]))
        hint = mk.TIME_LIKE if g < -tol else mk.SPACE_LIKE
        q = float(mk.grassmann_inner(b, b, hint))
        biv[name], norms[name], raw[name] = b, q, float(mk.grassmann_inner(b, b))
        if not np.any(np.abs(b) > tol):
            classes[name] = "zero"
        elif abs(q) <= tol:
            classes[name] = mk.LIGHT_LIKE
        else:
            classes[name] = mk.SPACE_LIKE if q > 0 else mk.TIME_LIKE
    unit = sum(abs(q - 1) <= tol for q in norms.values())
    null = sum(c == mk.LIGHT_LIKE for c in classes.values())
    return BivectorFrame(biv, norms, raw, classes, ok=(unit == 4 and null == 6))
