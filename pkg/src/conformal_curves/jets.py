"""Truncated Taylor series ("jets") with array-valued coefficients.

A :class:`Jet` of order ``K`` stores ``c[0], ..., c[K]`` with ``c[k]`` equal
to ``f^{(k)}(t0) / k!``.  The coefficients may be scalars or arrays of any fixed
shape, so the same type carries scalar functions, curves in ``R^3`` or
``R^5_1`` and bivector-valued curves.  The expansion variable is always the
displacement ``h = t - t0`` from the base point; the base point itself is not
stored.

Products of jets are truncated Cauchy products.  Multilinear maps (Lorentz
form, wedge, cross products) are lifted to jets by :func:`multilinear`, which
sums the map over every combination of coefficient indices.

>>> x = Jet.variable(0.0, 4)          # the identity h
>>> e = Jet([1.0, 1.0, 0.5, 1 / 6, 1 / 24])
>>> (e * e).coeffs.round(6)           # exp(2h)
array([1.      , 2.      , 2.      , 1.333333, 0.666667])
>>> e.compose(x * 2.0).coeffs.round(6)
array([1.      , 2.      , 2.      , 1.333333, 0.666667])
"""

from functools import lru_cache
from math import factorial

import numpy as np


class Jet:
    """Truncated Taylor expansion with scalar or array coefficients."""

    __slots__ = ("coeffs",)
    __array_priority__ = 100.0
    __array_ufunc__ = None

    def __init__(self, coeffs):
        c = np.array(coeffs, dtype=float)
        if c.ndim == 0:
            raise ValueError("a jet needs at least one coefficient")
        c.setflags(write=False)
        self.coeffs = c

    # -- construction ------------------------------------------------------

    @classmethod
    def constant(cls, value, order):
        value = np.asarray(value, dtype=float)
        c = np.zeros((order + 1,) + value.shape)
        c[0] = value
        return cls(c)

    @classmethod
    def variable(cls, t0, order):
        """Jet of the identity function ``t`` expanded at ``t0``."""
        c = np.zeros(order + 1)
        c[0] = t0
        if order >= 1:
            c[1] = 1.0
        return cls(c)

    @classmethod
    def from_derivatives(cls, derivatives):
        d = np.asarray(derivatives, dtype=float)
        k = np.arange(len(d))
        scale = np.array([1.0 / factorial(int(i)) for i in k])
        return cls(d * scale.reshape((-1,) + (1,) * (d.ndim - 1)))

    # -- inspection --------------------------------------------------------

    @property
    def order(self):
        return len(self.coeffs) - 1

    @property
    def shape(self):
        return self.coeffs.shape[1:]

    @property
    def value(self):
        return self.coeffs[0]

    def __getitem__(self, k):
        return self.coeffs[k]

    def __len__(self):
        return len(self.coeffs)

    def derivative(self, k):
        """The ``k``-th derivative at the base point."""
        return factorial(k) * self.coeffs[k]

    def derivatives(self):
        k = np.arange(self.order + 1)
        scale = np.array([float(factorial(int(i))) for i in k])
        return self.coeffs * scale.reshape((-1,) + (1,) * len(self.shape))

    def __call__(self, h):
        """Evaluate the truncated polynomial at displacement ``h``."""
        out = self.coeffs[-1]
        for c in self.coeffs[-2::-1]:
            out = out * h + c
        return out

    def __repr__(self):
        return f"Jet(order={self.order}, shape={self.shape})"

    # -- calculus ----------------------------------------------------------

    def deriv(self, n=1):
        c = self.coeffs
        for _ in range(n):
            if len(c) < 2:
                raise ValueError("cannot differentiate an order-0 jet")
            k = np.arange(1, len(c), dtype=float)
            c = c[1:] * k.reshape((-1,) + (1,) * len(self.shape))
        return Jet(c)

    def integ(self, const=0.0):
        k = np.arange(1, len(self.coeffs) + 1, dtype=float)
        body = self.coeffs / k.reshape((-1,) + (1,) * len(self.shape))
        head = np.broadcast_to(np.asarray(const, dtype=float), self.shape)[None]
        return Jet(np.concatenate([head, body]))

    def truncate(self, order):
        if order > self.order:
            raise ValueError(f"cannot raise order {self.order} to {order}")
        return Jet(self.coeffs[: order + 1])

    def shifted(self, value):
        """Copy with the constant term replaced."""
        c = np.array(self.coeffs)
        c[0] = value
        return Jet(c)

    def displacement(self):
        """Copy with zero constant term, ready to be used as an inner function."""
        return self.shifted(np.zeros(self.shape))

    # -- arithmetic --------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, Jet):
            return other
        return Jet.constant(other, self.order)

    def __add__(self, other):
        other = self._coerce(other)
        k = min(self.order, other.order)
        return Jet(self.coeffs[: k + 1] + other.coeffs[: k + 1])

    __radd__ = __add__

    def __neg__(self):
        return Jet(-self.coeffs)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Jet):
            other = np.asarray(other, dtype=float)
            return Jet(self.coeffs * other)
        return _cauchy(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Jet):
            return self * other.reciprocal()
        return Jet(self.coeffs / np.asarray(other, dtype=float))

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def reciprocal(self):
        self._require_scalar("reciprocal")
        a = self.coeffs
        if a[0] == 0.0:
            raise ZeroDivisionError("reciprocal of a jet with zero value")
        b = np.zeros_like(a)
        b[0] = 1.0 / a[0]
        for k in range(1, len(a)):
            b[k] = -np.dot(a[1 : k + 1], b[k - 1 :: -1][:k]) / a[0]
        return Jet(b)

    def __pow__(self, p):
        """Real power of a scalar jet with positive value (Miller's recurrence)."""
        self._require_scalar("power")
        a = self.coeffs
        if a[0] <= 0.0 and p != int(p):
            raise ValueError("fractional power of a non-positive jet")
        b = np.zeros_like(a)
        b[0] = a[0] ** p
        for k in range(1, len(a)):
            i = np.arange(1, k + 1)
            b[k] = np.sum((p * i - (k - i)) * a[i] * b[k - i]) / (k * a[0])
        return Jet(b)

    def sqrt(self):
        return self**0.5

    def _require_scalar(self, what):
        if self.shape != ():
            raise ValueError(f"{what} is only defined for scalar jets")

    # -- composition -------------------------------------------------------

    def compose(self, inner):
        """``self`` evaluated at the scalar displacement jet ``inner``.

        ``inner`` must have zero constant term; the result is the expansion of
        ``t -> f(t0 + inner(t))`` about the base point of ``inner``.
        """
        inner._require_scalar("inner function")
        if abs(inner.coeffs[0]) > 0.0:
            raise ValueError("inner jet of a composition must vanish at the base point")
        k = min(self.order, inner.order)
        out = Jet.constant(self.coeffs[k], k)
        g = inner.truncate(k)
        for c in self.coeffs[:k][::-1]:
            out = out * g + Jet.constant(c, k)
        return out

    def revert(self):
        """Compositional inverse of a scalar displacement jet (Lagrange inversion).

        If ``self`` is ``g(w) = g1 w + g2 w^2 + ...`` with ``g1 != 0``, returns
        ``h`` with ``g(h(x)) = x`` through the jet order.  The coefficients are
        ``[x^n] h = [w^(n-1)] (w / g(w))^n / n``.
        """
        self._require_scalar("reversion")
        g = self.coeffs
        if g[0] != 0.0:
            raise ValueError("reversion needs a jet vanishing at the base point")
        if len(g) < 2 or g[1] == 0.0:
            raise ZeroDivisionError("reversion needs a nonzero linear term")
        K = len(g) - 1
        phi = Jet(g[1:]).reciprocal()
        h = np.zeros(K + 1)
        power = Jet.constant(1.0, K - 1)
        for n in range(1, K + 1):
            power = power * phi
            h[n] = power.coeffs[n - 1] / n
        return Jet(h)


def _pad_shape(arr, ndim):
    """Insert unit axes after the leading axis so trailing shapes right-align."""
    extra = ndim - (arr.ndim - 1)
    if extra <= 0:
        return arr
    return arr.reshape((arr.shape[0],) + (1,) * extra + arr.shape[1:])


def _cauchy(a, b):
    K = min(a.order, b.order)
    if a.shape == () and b.shape == ():
        return Jet(np.convolve(a.coeffs[: K + 1], b.coeffs[: K + 1])[: K + 1])
    idx, bounds = _index_tuples(2, K)
    nd = max(len(a.shape), len(b.shape))
    ca = _pad_shape(a.coeffs[idx[:, 0]], nd)
    cb = _pad_shape(b.coeffs[idx[:, 1]], nd)
    return Jet(np.add.reduceat(ca * cb, bounds, axis=0))


@lru_cache(maxsize=None)
def _index_tuples(n, K):
    """All ``n``-tuples of nonnegative integers with sum <= K, sorted by sum.

    Returns the tuples and the start offset of each sum block, as expected by
    ``np.add.reduceat``.
    """
    # compositions of k into n parts, for k = 0..K
    rows = []
    starts = []

    def rec(prefix, remaining, parts):
        if parts == 1:
            rows.append(prefix + (remaining,))
            return
        for i in range(remaining + 1):
            rec(prefix + (i,), remaining - i, parts - 1)

    for k in range(K + 1):
        starts.append(len(rows))
        rec((), k, n)
    idx = np.array(rows, dtype=np.intp).reshape(-1, n)
    idx.setflags(write=False)
    return idx, np.array(starts, dtype=np.intp)


def multilinear(f, *jets, order=None):
    """Lift a multilinear map to jets.

    ``f`` takes ``len(jets)`` arrays, each with one extra leading batch axis,
    and must be linear in each argument.  The result has order
    ``min(jet orders)`` unless a smaller ``order`` is requested.
    """
    K = min(j.order for j in jets)
    if order is not None:
        K = min(K, order)
    idx, bounds = _index_tuples(len(jets), K)
    args = [j.coeffs[idx[:, i]] for i, j in enumerate(jets)]
    vals = np.asarray(f(*args))
    return Jet(np.add.reduceat(vals, bounds, axis=0))


def dot(a, b, metric=None):
    """Scalar jet of the inner product ``a^T diag(metric) b`` of vector jets."""
    if metric is None:
        return multilinear(lambda x, y: np.einsum("...i,...i->...", x, y), a, b)
    w = np.asarray(metric, dtype=float)
    return multilinear(lambda x, y: np.einsum("...i,i,...i->...", x, w, y), a, b)


def stack(jets):
    """Stack jets of equal shape along a new trailing axis."""
    K = min(j.order for j in jets)
    return Jet(np.stack([j.coeffs[: K + 1] for j in jets], axis=-1))


def apply_linear(matrix, jet):
    """Apply a fixed linear map ``v -> matrix @ v`` coefficientwise."""
    return Jet(np.einsum("ij,kj->ki", np.asarray(matrix, dtype=float), jet.coeffs))


def normalize(jet, form):
    """Divide a vector jet by ``sqrt(|form(jet, jet)|)``.

    ``form`` is a bilinear callable on jets returning a scalar jet.
    """
    q = form(jet, jet)
    if q.value < 0:
        q = -q
    return jet * q**-0.5
