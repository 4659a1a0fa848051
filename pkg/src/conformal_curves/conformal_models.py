"""Euclidean space, spheres and circles inside the light cone of R^5_1.

The Euclidean chart is the section ``{x : <x, n> = -1}`` of the light cone
with the fixed light-like vector ``n = (1/sqrt2, 1/sqrt2, 0, 0, 0)``.
A point ``p`` of E^3 maps to ``(1/sqrt2 + |p|^2/(2 sqrt2), -1/sqrt2 + |p|^2/(2 sqrt2), p)``;
the light ray ``span(n)`` is the point at infinity.
"""

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from . import minkowski_core as mk
from .errors import DegenerateCircle, DegeneratePoint
from .jets import Jet, dot, stack

SQRT2 = np.sqrt(2.0)
#: light-like normal of the Euclidean chart in R^5_1
CHART_NORMAL = np.array([1.0, 1.0, 0.0, 0.0, 0.0]) / SQRT2
#: the same chart one dimension down, in R^4_1
CHART_NORMAL4 = CHART_NORMAL[:4]


def embed_point(p):
    """Lift points of E^k (last axis) onto the light-cone chart of R^(k+2)_1."""
    p = np.asarray(p, dtype=float)
    q = np.einsum("...i,...i->...", p, p)[..., None]
    return np.concatenate([1 / SQRT2 + q / (2 * SQRT2), -1 / SQRT2 + q / (2 * SQRT2), p], axis=-1)


def embed_point3(p):
    p = np.asarray(p, dtype=float)
    if p.shape[-1] != 3:
        raise ValueError("expected points of E^3")
    return embed_point(p)


def embed_point2(p):
    p = np.asarray(p, dtype=float)
    if p.shape[-1] != 2:
        raise ValueError("expected points of E^2")
    return embed_point(p)


def embed_jet(jet):
    """Light-cone lift of a curve jet in E^k; the result lies in R^(k+2)_1."""
    q = dot(jet, jet)
    a = q * (1 / (2 * SQRT2))
    parts = [a + 1 / SQRT2, a - 1 / SQRT2] + [Jet(jet.coeffs[:, i]) for i in range(jet.shape[0])]
    return stack(parts)


def _chart_normal(dim):
    return CHART_NORMAL if dim == 5 else CHART_NORMAL4


def project_to_euclidean(x, tol=1e-12):
    """Radial projection of light-like vectors onto the chart; inverse of :func:`embed_point`.

    Any nonzero multiple of ``x`` projects to the same point.
    """
    x = np.asarray(x, dtype=float)
    scale = -mk.lorentz_form(x, _chart_normal(x.shape[-1]))
    norm = np.linalg.norm(x, axis=-1)
    if np.any(np.abs(scale) <= tol * norm):
        raise DegeneratePoint("vector represents the point at infinity of the chart")
    return x[..., 2:] / scale[..., None]


def project_to_E3(x, tol=1e-12):
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != 5:
        raise ValueError("expected vectors of R^5_1")
    return project_to_euclidean(x, tol)


def project_jet(jet, tol=1e-12):
    """Radial projection of a light-like vector jet to a curve jet in E^k."""
    nrm = _chart_normal(jet.shape[0])
    scale = -multiply_form(jet, nrm)
    if abs(scale.value) <= tol * np.linalg.norm(jet.value):
        raise DegeneratePoint("curve passes through the point at infinity of the chart")
    return Jet(jet.coeffs[:, 2:]) / scale


def multiply_form(jet, vector):
    """Scalar jet ``<jet, vector>`` for a fixed vector."""
    w = np.asarray(vector, dtype=float) * mk._eta(len(vector))
    return Jet(jet.coeffs @ w)


def sphere_from_center_radius(center, radius):
    """Unit space-like vector of the round sphere ``|x - center| = radius``.

    Computed as the normalized Lorentz cross product of four points on the
    sphere, oriented so that the ball is ``{<sigma, .> <= 0}``.
    """
    if radius <= 0:
        raise ValueError("radius must be positive")
    c = np.asarray(center, dtype=float)
    e = np.eye(3)
    pts = embed_point3(np.array([c + radius * e[0], c + radius * e[1], c + radius * e[2], c - radius * e[0]]))
    w = mk.lorentz_cross4(*pts)
    sigma = w / np.sqrt(mk.lorentz_form(w, w))
    if mk.lorentz_form(sigma, embed_point3(c)) > 0:
        sigma = -sigma
    return sigma


def circle_from_three_points(a, b, c, tol=1e-10):
    """Unit pure bivector of the circle through three points of E^3.

    The bivector spans the Lorentz-orthogonal complement of the three
    embedded points.  Collinear or coincident points raise
    :class:`DegenerateCircle`.
    """
    a, b, c = (np.asarray(p, dtype=float) for p in (a, b, c))
    ab, ac = b - a, c - a
    if np.linalg.norm(np.cross(ab, ac)) <= tol * max(np.linalg.norm(ab) * np.linalg.norm(ac), 1e-300):
        raise DegenerateCircle("points are collinear or coincident")
    gamma = mk.trivector_complement(*embed_point3(np.array([a, b, c])))
    q = mk.grassmann_inner(gamma, gamma)
    if q <= 0:
        raise DegenerateCircle("embedded points do not span a time-like 3-space")
    return gamma / np.sqrt(q)


def circle_incidence(gamma, point):
    """Distance-like residual of ``point`` (in E^3) from the circle ``gamma``.

    Zero iff the embedded point is Lorentz-orthogonal to the plane of ``gamma``.
    """
    basis = mk.plane_basis(gamma)
    x = embed_point3(point)
    return float(np.max(np.abs(mk.lorentz_form(basis.T, x))))


@dataclass(frozen=True)
class MobiusMap:
    """A Mobius transformation of S^3 (5x5) or S^2 (4x4) as a time-orientation preserving Lorentz matrix."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=float)
        if m.shape not in ((5, 5), (4, 4)):
            raise ValueError("Mobius maps are 5x5 or 4x4 Lorentz matrices")
        eta = np.diag(mk._eta(len(m)))
        err = np.max(np.abs(m.T @ eta @ m - eta))
        if err > 1e-10 * max(1.0, np.max(np.abs(m)) ** 2):
            raise ValueError(f"matrix is not Lorentz (defect {err:.2e})")
        if m[0, 0] <= 0:
            raise ValueError("matrix reverses time orientation")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    def __call__(self, x):
        return apply_mobius(self, x)

    @property
    def dim(self):
        return len(self.matrix) - 2

    def on_points(self, p):
        """Action on points of E^3 (or E^2)."""
        return project_to_euclidean(apply_mobius(self, embed_point(p)))


def lorentz_generators(dim=5):
    """Basis ``eta @ (E_ij - E_ji)`` of the Lorentz Lie algebra so(dim - 1, 1)."""
    eta = np.diag(mk._eta(dim))
    out = []
    for i, j in combinations(range(dim), 2):
        a = np.zeros((dim, dim))
        a[i, j], a[j, i] = 1.0, -1.0
        out.append(eta @ a)
    return np.array(out)


def _expm4(x):
    """Matrix exponential by 4th-order Taylor with scaling and squaring."""
    norm = np.max(np.sum(np.abs(x), axis=1))
    squarings = max(0, int(np.ceil(np.log2(norm / 1e-4)))) if norm > 0 else 0
    y = x / 2.0**squarings
    eye = np.eye(len(x))
    y2 = y @ y
    out = eye + y + y2 / 2 + y2 @ y / 6 + y2 @ y2 / 24
    for _ in range(squarings):
        out = out @ out
    return out


def random_mobius(seed, scale=0.3, dim=5):
    """Random Mobius map ``exp(sum_k c_k X_k)`` with ``c_k ~ U[-scale, scale]``.

    ``dim=4`` gives a Mobius map of the plane.
    """
    rng = np.random.default_rng(seed)
    gens = lorentz_generators(dim)
    coeffs = rng.uniform(-scale, scale, size=len(gens))
    return MobiusMap(_expm4(np.tensordot(coeffs, gens, axes=1)))


def rotation_mobius(rotation):
    """Lorentz matrix acting on the chart as the Euclidean rotation ``rotation``."""
    m = np.eye(5)
    m[2:, 2:] = np.asarray(rotation, dtype=float)
    return MobiusMap(m)


def apply_mobius(mobius, x):
    """Apply the Lorentz matrix to vectors (last axis) or to a vector jet."""
    m = mobius.matrix if isinstance(mobius, MobiusMap) else np.asarray(mobius, dtype=float)
    if isinstance(x, Jet):
        return Jet(x.coeffs @ m.T)
    return np.asarray(x, dtype=float) @ m.T
