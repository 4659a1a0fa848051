"""Exception hierarchy.

Every degenerate configuration detected by the library raises a subclass of
:class:`ConformalError`, so callers can catch the whole family at once.
"""


class ConformalError(ValueError):
    """Base class for all library errors."""


class DegeneratePoint(ConformalError):
    """A light-like vector represents the point at infinity of the chart."""


class DegenerateCircle(ConformalError):
    """Points do not span a circle (collinear or coincident)."""


class OutOfDomain(ConformalError):
    """Parameter outside the curve's interval."""


class SingularParametrization(ConformalError):
    """The curve's speed vanishes."""


class InflectionPoint(ConformalError):
    """Euclidean curvature vanishes."""


class VertexPoint(ConformalError):
    """The osculating circle has contact of order > 2 (nu = 0)."""


class PlanarOrSpherical(ConformalError):
    """Conformal torsion vanishes: the osculating sphere is stationary."""


class StepFailure(ConformalError):
    """The frame ODE integrator failed."""


class WindowTooLarge(ConformalError):
    """Normal-form fit did not converge under window refinement."""


class NotSpaceLike(ConformalError):
    """A de Sitter curve is not space-like or not on the quadric."""


class StationarySigma(ConformalError):
    """The sphere curve has zero velocity."""


class NotACanal(ConformalError):
    """The derivative of a circle curve violates the Plucker relations."""


class IntersectionDegenerate(ConformalError):
    """Two planes coincide or meet only at the origin."""


class ConfigError(ConformalError):
    """Invalid run configuration."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)


class SamplingWarning(UserWarning):
    """Invariants of a sampled curve rely on truncated derivatives."""
