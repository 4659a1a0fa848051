"""Canal surfaces as space-like curves of spheres.

A canal surface is the envelope of a one-parameter family of spheres, that
is a space-like curve ``sigma`` in de Sitter space.  Its characteristic
circles are ``gamma = sigma ^ sigma'``.  With ``k_g = sigma + sigma''`` (arc
length of ``sigma``) one has ``<k_g, k_g> = <gamma', gamma'>``, and the sign
of this number tells the surface type:

* time-like: a regular immersed tube,
* space-like: two singular curves,
* light-like: the surface is swept by the osculating circles of a curve.

A curve of circles comes from a canal surface iff ``gamma'`` is pure, and
then ``sigma`` spans the intersection line of the planes of ``gamma`` and
``gamma'``.
"""

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from . import invariants as inv
from . import minkowski_core as mk
from .errors import IntersectionDegenerate, NotACanal, NotSpaceLike, StationarySigma
from .jets import Jet, multilinear

REGULAR = "regular"
SINGULAR = "singular"
CIRCLES = "light-like"
DEGENERATE = "degenerate"
MIXED = "mixed"

_KIND = {mk.TIME_LIKE: REGULAR, mk.SPACE_LIKE: SINGULAR, mk.LIGHT_LIKE: CIRCLES}


def _trig(freq, phase, t, order):
    k = np.arange(order + 1)
    fact = np.cumprod(np.concatenate([[1.0], np.arange(1, order + 1)]))
    return freq**k * np.cos(freq * t + phase + k * np.pi / 2) / fact


class DeSitterCurve:
    """A curve of oriented spheres, given by a jet source ``fn(t, order)``.

    The source need not be normalized; :meth:`jet` divides by
    ``sqrt(<sigma, sigma>)``.
    """

    def __init__(self, fn, interval=(0.0, 2 * np.pi), name="sigma", speed_tol=1e-10):
        self.fn, self.interval, self.name, self.speed_tol = fn, tuple(interval), name, speed_tol

    def jet(self, t, order=10):
        raw = self.fn(t, order)
        q = inv.lorentz(raw, raw)
        if q.value <= 0:
            raise NotSpaceLike(f"<sigma, sigma> = {q.value:.3e} at t = {t}")
        return raw * q**-0.5

    def speed(self, sigma):
        d = sigma.deriv()
        q = inv.lorentz(d, d)
        scale = float(np.dot(d.value, d.value))
        if q.value < -self.speed_tol * max(scale, 1.0):
            raise NotSpaceLike(f"sigma' is not space-like (<sigma', sigma'> = {q.value:.3e})")
        if q.value <= self.speed_tol:
            raise StationarySigma("sigma is stationary")
        return q.sqrt()

    def arclength_jet(self, t, order=10):
        """``sigma`` re-expanded in its own arc length ``l`` about ``t``."""
        sigma = self.jet(t, order)
        return sigma.compose(self.speed(sigma).integ(0.0).revert())

    def points(self, ts):
        return np.array([self.jet(t, 0).value for t in ts])

    # -- examples --------------------------------------------------------

    @classmethod
    def tube(cls, c=1.0):
        """Unit-speed circle of spheres ``(c, r cos(t/r), r sin(t/r), 0, 0)``, ``r = sqrt(1+c^2)``."""
        r = np.sqrt(1 + c * c)

        def fn(t, order):
            out = np.zeros((order + 1, 5))
            out[0, 0] = c
            out[:, 1] = r * _trig(1 / r, 0.0, t, order)
            out[:, 2] = r * _trig(1 / r, -np.pi / 2, t, order)
            return Jet(out)

        return cls(fn, (0.0, 2 * np.pi * r), name=f"tube(c={c:g})")

    @classmethod
    def pencil(cls):
        """Great spheres ``(0, cos t, sin t, 0, 0)`` through a common circle."""

        def fn(t, order):
            out = np.zeros((order + 1, 5))
            out[:, 1] = _trig(1.0, 0.0, t, order)
            out[:, 2] = _trig(1.0, -np.pi / 2, t, order)
            return Jet(out)

        return cls(fn, (0.0, 2 * np.pi), name="pencil")

    @classmethod
    def trig(cls, cos_coeffs, sin_coeffs, interval=(0.0, 2 * np.pi)):
        """Normalization of a trigonometric polynomial ``R -> R^5`` (space-like values)."""
        C = np.asarray(cos_coeffs, dtype=float)
        S = np.asarray(sin_coeffs, dtype=float)
        freq = np.arange(C.shape[1], dtype=float)

        def fn(t, order):
            cp = np.stack([_trig(f, 0.0, t, order) for f in freq], axis=1)
            sp = np.stack([_trig(f, -np.pi / 2, t, order) for f in freq], axis=1)
            return Jet(cp @ C.T + sp @ S.T)

        return cls(fn, interval, name="trig")

    @classmethod
    def osculating_spheres(cls, curve):
        """Osculating-sphere curve of a space curve."""

        def fn(t, order):
            return inv.osculating_sphere(curve.jet(t, max(order + 3, 6))).sigma

        return cls(fn, curve.interval, name="osculating spheres")


class CircleCurve:
    """A curve of circles, given by a bivector jet source ``fn(t, order)``."""

    def __init__(self, fn, interval=(0.0, 2 * np.pi), name="gamma"):
        self.fn, self.interval, self.name = fn, tuple(interval), name

    def jet(self, t, order=10):
        return self.fn(t, order)

    @classmethod
    def split_rotation(cls):
        """``cos t e1^e2 + sin t e3^e4``: unit, but with impure derivative."""
        i12, i34 = mk.PAIR_INDEX[(1, 2)], mk.PAIR_INDEX[(3, 4)]

        def fn(t, order):
            out = np.zeros((order + 1, 10))
            out[:, i12] = _trig(1.0, 0.0, t, order)
            out[:, i34] = _trig(1.0, -np.pi / 2, t, order)
            return Jet(out)

        return cls(fn, name="split rotation")


def characteristic_circles(c):
    """Curve of characteristic circles ``gamma = sigma ^ sigma' / |sigma'|`` of ``c``."""

    def fn(t, order):
        sigma = c.jet(t, order + 1)
        return inv.wedge(sigma, sigma.deriv() / c.speed(sigma))

    return CircleCurve(fn, c.interval, name=f"characteristic circles of {c.name}")


@dataclass(frozen=True)
class CanalSample:
    t: float
    kg_norm: float
    gamma_dot_norm: float
    causal: str
    purity: float
    kg_scale: float


@dataclass(frozen=True)
class CanalReport:
    """Per-sample classification and the overall surface type."""

    samples: tuple
    kind: str
    identity_error: float
    max_purity: float

    @property
    def classes(self):
        return [s.causal for s in self.samples]


def _normalized_purity(b):
    scale = float(np.dot(b, b))
    return float(mk.plucker_residual(b)) / scale if scale > 0 else 0.0


def canal_sample(c, t, tol=1e-9):
    s = c.arclength_jet(t, 8)
    kg = s.value + s.derivative(2)
    gamma = inv.wedge(s, s.deriv())
    gdot = gamma.derivative(1)
    kq = float(mk.lorentz_form(kg, kg))
    scale = float(np.dot(kg, kg))
    causal = DEGENERATE if scale <= tol else mk.causal_type(kg, tol)
    return CanalSample(
        t=float(t),
        kg_norm=kq,
        gamma_dot_norm=float(mk.grassmann_inner(gdot, gdot)),
        causal=causal,
        purity=_normalized_purity(gdot),
        kg_scale=scale,
    )


def canal_classify(c, ts=None, samples=41, tol=1e-9):
    """Classify the canal surface of ``c`` on a grid.

    ``kind`` is ``regular``, ``singular`` or ``light-like`` when every sample
    agrees, ``degenerate`` when ``k_g`` vanishes everywhere (a pencil) and
    ``mixed`` otherwise.
    """
    if ts is None:
        a, b = c.interval
        ts = np.linspace(a, b, samples)
    rows = tuple(canal_sample(c, t, tol) for t in ts)
    kinds = {r.causal for r in rows}
    if kinds == {DEGENERATE}:
        kind = DEGENERATE
    elif len(kinds) == 1:
        kind = _KIND[kinds.pop()]
    else:
        kind = MIXED
    err = max(abs(r.kg_norm - r.gamma_dot_norm) for r in rows)
    return CanalReport(samples=rows, kind=kind, identity_error=err, max_purity=max(r.purity for r in rows))


@dataclass(frozen=True)
class PurityReport:
    ts: np.ndarray
    residuals: np.ndarray
    gamma_residuals: np.ndarray
    canal: bool
    tol: float


def purity_check(g, ts=None, samples=41, tol=1e-9):
    """Plucker residual of ``gamma'`` (scaled by ``|gamma'|^2``) along a circle curve.

    The verdict is ``canal`` iff every residual is at most ``tol``.  The
    residuals of ``gamma`` itself are reported too, since the criterion
    presumes pure circles.
    """
    if ts is None:
        a, b = g.interval
        ts = np.linspace(a, b, samples)
    res, gres = [], []
    for t in ts:
        j = g.jet(t, 1)
        res.append(_normalized_purity(j.derivative(1)))
        gres.append(_normalized_purity(j.value))
    res = np.array(res)
    return PurityReport(np.asarray(ts, float), res, np.array(gres), bool(np.all(res <= tol)), tol)


# -- inverse map --------------------------------------------------------------

TRIPLES = tuple(combinations(range(5), 3))


def wedge_map(b):
    """Matrix (10 x 5) of ``v -> v ^ b`` into Plucker coordinates of 3-vectors."""
    b = np.asarray(b, dtype=float)
    P = mk.bivector_matrix(b)
    out = np.zeros(b.shape[:-1] + (10, 5))
    for r, (i, j, k) in enumerate(TRIPLES):
        out[..., r, i] = P[..., j, k]
        out[..., r, j] = -P[..., i, k]
        out[..., r, k] = P[..., i, j]
    return out


def _normal_matrix(a, b):
    return np.swapaxes(wedge_map(a), -1, -2) @ wedge_map(b)


def _adjugate_column(col):
    others = [r for r in range(5) if r != col]

    def f(*Bs):
        rows = np.stack([B[..., r, :] for B, r in zip(Bs, others)], axis=-2)
        out = [(-1.0) ** (i + col) * np.linalg.det(np.delete(rows, i, axis=-1)) for i in range(5)]
        return np.stack(out, axis=-1)

    return f


def intersection_line(gamma, tol=1e-8):
    """Kernel jet of ``W_g^T W_g + W_d^T W_d / |d|^2`` with ``d = gamma'``.

    Its kernel is the intersection of the planes of ``gamma`` and ``gamma'``;
    it is extracted as a column of the adjugate, which keeps it a jet.
    """
    d = gamma.deriv()
    dn = float(np.dot(d.value, d.value))
    if dn <= tol * tol:
        raise IntersectionDegenerate("gamma' vanishes; the sphere curve is not determined")
    K = min(gamma.order, d.order)
    g = gamma.truncate(K)
    B = multilinear(_normal_matrix, g, g) + multilinear(_normal_matrix, d, d) / dn
    w = np.linalg.eigvalsh(B.value)
    if w[0] > tol * w[-1]:
        raise NotACanal(f"planes of gamma and gamma' do not meet (eigenvalue ratio {w[0] / w[-1]:.2e})")
    if w[1] <= tol * w[-1]:
        raise IntersectionDegenerate("planes of gamma and gamma' meet in more than a line")
    kernel = np.linalg.eigh(B.value)[1][:, 0]
    col = int(np.argmax(np.abs(kernel)))
    return multilinear(_adjugate_column(col), B, B, B, B)


@dataclass
class ReconstructedSigma:
    """Sphere curve recovered from circles: samples and a jet-valued :class:`DeSitterCurve`."""

    ts: np.ndarray
    sigma: np.ndarray
    curve: DeSitterCurve


def reconstruct_sigma(g, ts=None, samples=41, tol=1e-8, purity_tol=1e-9):
    """Inverse of :func:`characteristic_circles`, up to the sign of ``sigma``.

    Signs are chosen for continuity along ``ts``; the returned jet source
    aligns each evaluation with the nearest sample.
    """
    if ts is None:
        a, b = g.interval
        ts = np.linspace(a, b, samples)
    ts = np.asarray(ts, dtype=float)
    report = purity_check(g, ts, tol=purity_tol)
    if not report.canal:
        raise NotACanal(f"gamma' is not pure (residual {report.residuals.max():.2e})")

    def raw(t, order):
        u = intersection_line(g.jet(t, order + 1), tol)
        q = inv.lorentz(u, u)
        if q.value <= 0:
            raise NotSpaceLike("intersection line of the planes is not space-like")
        return u * q**-0.5

    values = []
    for t in ts:
        v = raw(t, 0).value
        if values and mk.lorentz_form(v, values[-1]) < 0:
            v = -v
        values.append(v)
    values = np.array(values)

    def fn(t, order):
        u = raw(t, order)
        k = int(np.argmin(np.abs(ts - t)))
        return -u if np.dot(u.value, values[k]) < 0 else u

    return ReconstructedSigma(ts, values, DeSitterCurve(fn, g.interval, name=f"reconstructed from {g.name}"))


def line_angle(a, b):
    """Angle between the lines spanned by ``a`` and ``b`` (sign-blind)."""
    return mk.principal_angle(np.reshape(a, (-1, 1)), np.reshape(b, (-1, 1)))
