"""Lorentzian linear algebra on R^5_1 (and R^4_1).

Vectors are plain arrays whose last axis holds the components ``x_0..x_n``
with ``x_0`` time-like.  Bivectors of R^5_1 are arrays whose last axis holds
the ten Plucker coordinates ``p_ij`` (``i < j``) in the order of
:data:`PAIRS`.  Every function broadcasts over leading axes, which lets
:func:`conformal_curves.jets.multilinear` lift them to jets unchanged.
"""

from itertools import combinations

import numpy as np

PAIRS = tuple(combinations(range(5), 2))
PAIR_INDEX = {p: k for k, p in enumerate(PAIRS)}

#: signature of the Lorentz form on R^5_1
ETA5 = np.array([-1.0, 1.0, 1.0, 1.0, 1.0])
ETA4 = ETA5[:4]
#: diagonal of the induced form on bivectors: p_0k terms negative
BIVECTOR_METRIC = np.array([ETA5[i] * ETA5[j] for i, j in PAIRS])

SPACE_LIKE = "space-like"
TIME_LIKE = "time-like"
LIGHT_LIKE = "light-like"


def _eta(n):
    return ETA5 if n == 5 else np.concatenate([[-1.0], np.ones(n - 1)])


def lorentz_form(u, v):
    """Minkowski product ``-u_0 v_0 + sum_i u_i v_i``."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    return np.einsum("...i,i,...i->...", u, _eta(u.shape[-1]), v)


def lorentz_cross(*vectors):
    """Lorentz vector product of ``n - 1`` vectors of R^n_1.

    Components are ``w_0 = -det(e_0, u_1, ...)`` and ``w_i = det(e_i, u_1, ...)``,
    so that ``<w, x> = det(x, u_1, ..., u_{n-1})`` for every ``x``.
    """
    rows = np.stack(np.broadcast_arrays(*[np.asarray(u, dtype=float) for u in vectors]), axis=-2)
    n = rows.shape[-1]
    if rows.shape[-2] != n - 1:
        raise ValueError(f"need {n - 1} vectors of R^{n}_1, got {rows.shape[-2]}")
    cols = np.arange(n)
    minors = np.stack([rows[..., cols != q] for q in range(n)], axis=-3)
    with np.errstate(divide="ignore", invalid="ignore"):  # singular minors give exact zeros
        cofactor = np.linalg.det(minors) * (-1.0) ** cols
    return cofactor * _eta(n)


def lorentz_cross4(u1, u2, u3, u4):
    return lorentz_cross(u1, u2, u3, u4)


def lorentz_cross3(u1, u2, u3):
    return lorentz_cross(u1, u2, u3)


def cross_inner_identity(us, vs):
    """Both sides of ``<x u, x v> = -det(<u_i, v_j>)`` for two quadruples of R^5_1.

    Returns ``(lhs, rhs)``; the identity is the test, not an assumption.
    """
    us = np.asarray(us, dtype=float)
    vs = np.asarray(vs, dtype=float)
    lhs = lorentz_form(lorentz_cross(*us), lorentz_cross(*vs))
    g = lorentz_form(us[:, None, :], vs[None, :, :])
    return float(lhs), float(-np.linalg.det(g))


def wedge2(u, v):
    """Plucker coordinates ``p_ij = u_i v_j - u_j v_i`` of ``u ^ v``."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    i, j = np.array(PAIRS).T
    return u[..., i] * v[..., j] - u[..., j] * v[..., i]


def bivector_matrix(b):
    """Antisymmetric 5x5 matrix ``P`` with ``P[i, j] = p_ij``."""
    b = np.asarray(b, dtype=float)
    out = np.zeros(b.shape[:-1] + (5, 5))
    for k, (i, j) in enumerate(PAIRS):
        out[..., i, j] = b[..., k]
        out[..., j, i] = -b[..., k]
    return out


def bivector_from_matrix(m):
    m = np.asarray(m, dtype=float)
    return np.stack([m[..., i, j] for i, j in PAIRS], axis=-1)


def grassmann_inner(a, b, causal_hint=SPACE_LIKE):
    """Indefinite inner product on bivectors of R^5_1.

    The default is the coordinate formula
    ``sum_{1<=i<j} a_ij b_ij - sum_k a_0k b_0k``, which equals the Gram
    determinant ``det(<u_i, v_j>)`` on pure bivectors and is the form of
    signature (6, 4) used for non-pure bivectors.  ``causal_hint="time-like"``
    flips the sign, matching the convention for pairs of time-like planes.
    """
    val = np.einsum("...i,i,...i->...", np.asarray(a, float), BIVECTOR_METRIC, np.asarray(b, float))
    if causal_hint == TIME_LIKE:
        return -val
    if causal_hint != SPACE_LIKE:
        raise ValueError(f"unknown causal hint {causal_hint!r}")
    return val


def plucker_relations(b):
    """The five quadratic Plucker relations, evaluated on ``b``."""
    b = np.asarray(b, dtype=float)

    def p(i, j):
        return b[..., PAIR_INDEX[(i, j)]]

    # one relation per 4-subset {i<j<k<l}: p_ij p_kl - p_ik p_jl + p_il p_jk
    rel = [p(i, j) * p(k, l) - p(i, k) * p(j, l) + p(i, l) * p(j, k) for i, j, k, l in combinations(range(5), 4)]
    return np.stack(rel, axis=-1)


def plucker_residual(b):
    """Largest absolute Plucker relation; zero exactly for pure bivectors."""
    return np.max(np.abs(plucker_relations(b)), axis=-1)


def causal_type(x, tol=1e-9):
    """Classify a vector (length 4/5) or bivector (length 10).

    ``|<x, x>| <= tol * |x|^2`` (Euclidean norm) counts as light-like.
    """
    x = np.asarray(x, dtype=float)
    q = grassmann_inner(x, x) if x.shape[-1] == 10 else lorentz_form(x, x)
    scale = float(np.dot(x, x))
    if abs(q) <= tol * scale:
        return LIGHT_LIKE
    return TIME_LIKE if q < 0 else SPACE_LIKE


def trivector_complement(a, b, c):
    """Bivector of the Lorentz-orthogonal complement of ``span(a, b, c)``.

    Components are ``det(e_i, e_j, eta a, eta b, eta c)``; the result is pure
    and its plane is ``{x : <x, a> = <x, b> = <x, c> = 0}``.
    """
    rows = np.stack(np.broadcast_arrays(*[np.asarray(u, float) * ETA5 for u in (a, b, c)]), axis=-2)
    out = []
    for i, j in PAIRS:
        e = np.zeros(rows.shape[:-2] + (2, 5))
        e[..., 0, i] = 1.0
        e[..., 1, j] = 1.0
        with np.errstate(divide="ignore", invalid="ignore"):
            out.append(np.linalg.det(np.concatenate([e, rows], axis=-2)))
    return np.stack(out, axis=-1)


def plane_basis(b, tol=1e-9):
    """Orthonormal (Euclidean) basis, shape (5, 2), of the plane of a pure bivector."""
    u, s, _ = np.linalg.svd(bivector_matrix(b))
    if s[0] == 0.0 or s[2] > tol * s[0]:
        raise ValueError("bivector is not pure or is zero")
    return u[:, :2]


def gram(vectors):
    """Lorentz Gram matrix of a sequence of vectors."""
    v = np.asarray(vectors, dtype=float)
    return np.einsum("ia,a,ja->ij", v, _eta(v.shape[-1]), v)


def principal_angle(a, b):
    """Largest principal angle between the column spans of ``a`` and ``b``."""
    qa, _ = np.linalg.qr(np.asarray(a, dtype=float))
    qb, _ = np.linalg.qr(np.asarray(b, dtype=float))
    resid = qb - qa @ (qa.T @ qb)
    sine = np.linalg.svd(resid, compute_uv=False).max()
    return float(np.arcsin(min(sine, 1.0)))
