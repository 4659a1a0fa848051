"""Parametric curves, their jets, arc-length reparametrization and Frenet data.

Analytic families produce exact Taylor coefficients at any parameter value.
Sampled input goes through a quintic smoothing spline; derivatives beyond the
fifth vanish identically there, so conformal invariants of sampled curves
(which need up to seven derivatives) are only rough estimates.
"""

import warnings
from dataclasses import dataclass, field
from math import factorial

import numpy as np
from scipy.interpolate import UnivariateSpline

from . import conformal_models as models
from .errors import InflectionPoint, OutOfDomain, SamplingWarning, SingularParametrization, VertexPoint
from .jets import Jet, dot, multilinear

DEFAULT_ORDER = 12


def _inv_factorials(order):
    return np.array([1.0 / factorial(k) for k in range(order + 1)])


def _trig_jet(freq, phase, t, order):
    """Taylor coefficients of ``cos(freq * t + phase)``; broadcasts over freq/phase."""
    k = np.arange(order + 1).reshape((-1,) + (1,) * np.ndim(freq))
    return (np.asarray(freq, float) ** k) * np.cos(freq * t + phase + k * np.pi / 2) * _inv_factorials(order).reshape(k.shape)


class Curve:
    """Base class: a regular parametric curve in E^2 or E^3."""

    dim = 3
    interval = (-np.inf, np.inf)

    def jet(self, t, order=DEFAULT_ORDER):
        raise NotImplementedError

    def _check(self, t):
        a, b = self.interval
        slack = 1e-12 * max(1.0, abs(a), abs(b)) if np.isfinite(a) and np.isfinite(b) else 0.0
        if not (a - slack <= t <= b + slack):
            raise OutOfDomain(f"t = {t} outside [{a}, {b}]")

    def point(self, t):
        return np.array(self.jet(t, 0).value)

    def points(self, ts):
        return np.array([self.point(t) for t in np.asarray(ts, dtype=float)])

    def grid(self, samples):
        a, b = self.interval
        return np.linspace(a, b, samples)


class Helix(Curve):
    """``(a cos t, a sin t, b t)``; curvature ``a/(a^2+b^2)``, torsion ``b/(a^2+b^2)``."""

    def __init__(self, a=0.5, b=0.5, interval=(0.0, 2 * np.pi)):
        self.a, self.b, self.interval = float(a), float(b), tuple(interval)

    def jet(self, t, order=DEFAULT_ORDER):
        self._check(t)
        c = np.zeros((order + 1, 3))
        c[:, 0] = self.a * _trig_jet(1.0, 0.0, t, order)
        c[:, 1] = self.a * _trig_jet(1.0, -np.pi / 2, t, order)
        c[0, 2] = self.b * t
        if order >= 1:
            c[1, 2] = self.b
        return Jet(c)


class Circle(Helix):
    """Round circle of radius ``r`` in the xy-plane of E^3; every point is a vertex."""

    def __init__(self, r=1.0, interval=(0.0, 2 * np.pi)):
        super().__init__(a=r, b=0.0, interval=interval)


class TwistedCubic(Curve):
    """``(t, t^2, t^3)``."""

    def __init__(self, interval=(-1.0, 1.0)):
        self.interval = tuple(interval)

    def jet(self, t, order=DEFAULT_ORDER):
        self._check(t)
        c = np.zeros((order + 1, 3))
        # expansions of (t0 + h)^p
        for p in (1, 2, 3):
            for k in range(min(p, order) + 1):
                c[k, p - 1] = factorial(p) / (factorial(k) * factorial(p - k)) * t ** (p - k)
        return Jet(c)


class TrigPolynomial(Curve):
    """``x_i(t) = sum_k cos_coeffs[i, k] cos(k t) + sin_coeffs[i, k] sin(k t)``."""

    def __init__(self, cos_coeffs, sin_coeffs=None, interval=(0.0, 2 * np.pi)):
        self.cos_coeffs = np.atleast_2d(np.asarray(cos_coeffs, dtype=float))
        if sin_coeffs is None:
            sin_coeffs = np.zeros_like(self.cos_coeffs)
        self.sin_coeffs = np.atleast_2d(np.asarray(sin_coeffs, dtype=float))
        if self.cos_coeffs.shape != self.sin_coeffs.shape:
            raise ValueError("cos and sin coefficient tables must have the same shape")
        self.dim = self.cos_coeffs.shape[0]
        self.interval = tuple(interval)

    @classmethod
    def trefoil(cls, interval=(0.0, 2 * np.pi)):
        """The (2, 3) torus knot ``((2 + cos 3t) cos 2t, (2 + cos 3t) sin 2t, sin 3t)``.

        Vertex-free with ``1.5 < T < 4.7`` over a period.
        """
        C = np.zeros((3, 6))
        S = np.zeros((3, 6))
        C[0, [1, 2, 5]] = 0.5, 2.0, 0.5
        S[1, [1, 2, 5]] = -0.5, 2.0, 0.5
        S[2, 3] = 1.0
        return cls(C, S, interval)

    def jet(self, t, order=DEFAULT_ORDER):
        self._check(t)
        freq = np.arange(self.cos_coeffs.shape[1], dtype=float)
        cos_part = _trig_jet(freq, 0.0, t, order)
        sin_part = _trig_jet(freq, -np.pi / 2, t, order)
        return Jet(cos_part @ self.cos_coeffs.T + sin_part @ self.sin_coeffs.T)


class PlaneParabola(Curve):
    """``(t, a t^2)`` in E^2."""

    dim = 2

    def __init__(self, a=1.0, interval=(-1.0, 1.0)):
        self.a, self.interval = float(a), tuple(interval)

    def jet(self, t, order=DEFAULT_ORDER):
        self._check(t)
        c = np.zeros((order + 1, 2))
        c[0] = t, self.a * t * t
        if order >= 1:
            c[1] = 1.0, 2 * self.a * t
        if order >= 2:
            c[2, 1] = self.a
        return Jet(c)


class LogSpiral(Curve):
    """``a exp(b t) (cos t, sin t)`` in E^2."""

    dim = 2

    def __init__(self, a=1.0, b=0.2, interval=(0.0, 2 * np.pi)):
        self.a, self.b, self.interval = float(a), float(b), tuple(interval)

    def jet(self, t, order=DEFAULT_ORDER):
        self._check(t)
        z = complex(self.b, 1.0)
        k = np.arange(order + 1)
        w = self.a * np.exp(z * t) * z**k * _inv_factorials(order)
        return Jet(np.stack([w.real, w.imag], axis=-1))


class SampledCurve(Curve):
    """Quintic smoothing spline through tabulated points.

    Derivatives of order six and above vanish, so invariants that need them
    are only meaningful for dense, low-noise samples.
    """

    def __init__(self, t, points, smoothing=0.0):
        t = np.asarray(t, dtype=float)
        pts = np.asarray(points, dtype=float)
        if pts.ndim != 2 or len(t) != len(pts) or len(t) < 6:
            raise ValueError("need at least six samples of shape (n, dim)")
        warnings.warn(
            "sampled curves have no derivatives beyond the fifth; conformal invariants are approximate",
            SamplingWarning,
            stacklevel=2,
        )
        self.dim = pts.shape[1]
        self.interval = (float(t[0]), float(t[-1]))
        self._splines = [UnivariateSpline(t, pts[:, i], k=5, s=smoothing) for i in range(self.dim)]

    def jet(self, t, order=DEFAULT_ORDER):
        self._check(t)
        d = np.zeros((order + 1, self.dim))
        for i, sp in enumerate(self._splines):
            vals = sp.derivatives(t)
            n = min(len(vals), order + 1)
            d[:n, i] = vals[:n]
        return Jet.from_derivatives(d)


class JetCurve(Curve):
    """Curve given by a callable ``(t, order) -> Jet``."""

    def __init__(self, fn, dim, interval):
        self._fn, self.dim, self.interval = fn, dim, tuple(interval)

    def jet(self, t, order=DEFAULT_ORDER):
        self._check(t)
        return self._fn(t, order)


class SimilarityCurve(Curve):
    """``x -> scale * rotation @ x + shift`` applied to another curve."""

    def __init__(self, base, scale=1.0, rotation=None, shift=None):
        self.base, self.dim, self.interval = base, base.dim, base.interval
        self.scale = float(scale)
        self.rotation = np.eye(base.dim) if rotation is None else np.asarray(rotation, dtype=float)
        self.shift = np.zeros(base.dim) if shift is None else np.asarray(shift, dtype=float)

    def jet(self, t, order=DEFAULT_ORDER):
        c = self.scale * (self.base.jet(t, order).coeffs @ self.rotation.T)
        c[0] += self.shift
        return Jet(c)


class MobiusCurve(Curve):
    """Image of a curve under a Mobius map, read back in the same chart."""

    def __init__(self, base, mobius):
        if len(mobius.matrix) != base.dim + 2:
            raise ValueError(f"need a {base.dim + 2}x{base.dim + 2} Mobius map for a curve in E^{base.dim}")
        self.base, self.mobius, self.interval = base, mobius, base.interval
        self.dim = base.dim

    def jet(self, t, order=DEFAULT_ORDER):
        lifted = models.apply_mobius(self.mobius, models.embed_jet(self.base.jet(t, order)))
        return models.project_jet(lifted)


FAMILIES = {
    "helix": Helix,
    "circle": Circle,
    "trefoil": TrigPolynomial.trefoil,
    "twisted_cubic": TwistedCubic,
    "trig_polynomial": TrigPolynomial,
    "plane_parabola": PlaneParabola,
    "log_spiral": LogSpiral,
    "samples": SampledCurve,
}


@dataclass
class CurveSpec:
    """Declarative description of a curve: family, parameters, interval, sample count."""

    family: str
    params: dict = field(default_factory=dict)
    interval: tuple = None
    samples: int = 101

    def build(self):
        try:
            cls = FAMILIES[self.family]
        except KeyError:
            raise ValueError(f"unknown curve family {self.family!r}; choose from {sorted(FAMILIES)}") from None
        kwargs = dict(self.params)
        if self.interval is not None and self.family != "samples":
            kwargs["interval"] = tuple(self.interval)
        return cls(**kwargs)

    def grid(self):
        return self.build().grid(self.samples)


def eval_jet(spec, t, order=DEFAULT_ORDER):
    """Jet of order ``order`` of the curve described by ``spec`` (or a :class:`Curve`) at ``t``."""
    curve = spec.build() if isinstance(spec, CurveSpec) else spec
    return curve.jet(t, order)


def arclength_map(jet, tol=1e-8):
    """Displacement jet ``s(t) - s(t0)`` of the arc length."""
    speed = dot(jet.deriv(), jet.deriv())
    if speed.value <= tol * tol:
        raise SingularParametrization(f"speed {np.sqrt(max(speed.value, 0.0)):.3e} below {tol}")
    return speed.sqrt().integ(0.0)


def reparam_arclength(jet, tol=1e-8):
    """Re-expand a curve jet in the arc length measured from the base point."""
    return jet.compose(arclength_map(jet, tol).revert())


def lift_to_lightcone(jet):
    """Jet of ``embed(m(t))``: a curve on the light cone of R^(dim+2)_1."""
    return models.embed_jet(jet)


@dataclass(frozen=True)
class FrenetData:
    """Euclidean curvature data at one point, with derivatives in arc length."""

    kappa: float
    tau: float
    dkappa: float
    ddkappa: float
    dtau: float
    nu: float
    dnu: float
    ddnu: float
    s: float = 0.0
    nu_jet: Jet = field(default=None, repr=False, compare=False)


def _pad3(jet):
    if jet.shape[0] == 3:
        return jet
    c = np.zeros((jet.order + 1, 3))
    c[:, : jet.shape[0]] = jet.coeffs
    return Jet(c)


def _triple(a, b, c):
    return np.einsum("...i,...i->...", np.cross(a, b), c)


def frenet_data(jet_s, s=0.0, inflection_tol=1e-9, vertex_tol=1e-7):
    """Curvature, torsion and ``nu = sqrt(kappa'^2 + kappa^2 tau^2)`` from an arc-length jet.

    ``VertexPoint`` is raised when ``nu <= vertex_tol * kappa^2`` (both
    sides scale as 1/length^2).
    """
    m = _pad3(jet_s)
    d1, d2, d3 = m.deriv(), m.deriv(2), m.deriv(3)
    kappa = dot(d2, d2).sqrt() if dot(d2, d2).value > 0 else None
    if kappa is None or kappa.value <= inflection_tol * np.linalg.norm(d1.value) ** 2:
        raise InflectionPoint("curvature vanishes")
    tau = multilinear(_triple, d1, d2, d3) / (kappa * kappa)
    dk = kappa.deriv()
    nu_sq = dk * dk + kappa * kappa * tau * tau
    if nu_sq.value <= (vertex_tol * kappa.value**2) ** 2:
        raise VertexPoint(f"nu = {np.sqrt(max(nu_sq.value, 0.0)):.3e} at a vertex")
    nu = nu_sq.sqrt()
    return FrenetData(
        kappa=float(kappa.value),
        tau=float(tau.value),
        dkappa=float(kappa.derivative(1)),
        ddkappa=float(kappa.derivative(2)),
        dtau=float(tau.derivative(1)),
        nu=float(nu.value),
        dnu=float(nu.derivative(1)),
        ddnu=float(nu.derivative(2)),
        s=float(s),
        nu_jet=nu,
    )


def conformal_arclength_density(fd):
    """``d rho / d s = sqrt(nu)``."""
    if fd.nu <= 0:
        raise VertexPoint("nu vanishes")
    return float(np.sqrt(fd.nu))
