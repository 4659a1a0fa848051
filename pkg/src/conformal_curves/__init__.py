"""Mobius-invariant geometry of curves.

Curves in E^3 and E^2 are lifted to the light cone of R^5_1 (R^4_1 for plane
curves); their osculating spheres and circles become curves in de Sitter
space and in the Grassmannian of 2-planes, and the conformal arc length,
curvature ``Q`` and torsion ``T`` are read off from those.  Every quantity
also has a Euclidean closed form, so each route checks the other.

    >>> from conformal_curves import Helix, analyze
    >>> p = analyze(Helix(1.0, 2.0), 0.3)
    >>> round(p.Q, 10), round(p.T, 10)
    (-0.25, 1.4142135624)
"""

from .canal import (
    CircleCurve,
    DeSitterCurve,
    canal_classify,
    characteristic_circles,
    purity_check,
    reconstruct_sigma,
)
from .conformal_models import (
    MobiusMap,
    apply_mobius,
    circle_from_three_points,
    embed_point2,
    embed_point3,
    project_to_E3,
    random_mobius,
    sphere_from_center_radius,
)
from .curve_jets import (
    Circle,
    CurveSpec,
    Helix,
    LogSpiral,
    MobiusCurve,
    PlaneParabola,
    SampledCurve,
    TrigPolynomial,
    TwistedCubic,
    eval_jet,
    frenet_data,
    reparam_arclength,
)
from .errors import *  # noqa: F403
from .frames import (
    FrameSet,
    Profile,
    bivector_frames10,
    build_frames_plane,
    build_frames_space,
    frenet_integrate,
    frenet_residual,
    invariant_profiles,
    normal_form,
)
from .invariants import (
    InvariantRecord,
    analyze,
    conformal_length,
    conformal_Q2_plane,
    conformal_Q_euclidean,
    conformal_Q_minkowski,
    conformal_T,
    conformal_T_euclidean,
    invariant_table,
    osculating_circle_bivector,
    osculating_sphere,
    verify_tables,
)
from .jets import Jet
from .suite import run_suite

__version__ = "0.1.0"
