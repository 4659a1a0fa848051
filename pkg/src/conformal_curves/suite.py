"""Named numerical checks shared by ``conformal-curves verify`` and the tests."""

from dataclasses import dataclass

import numpy as np

from . import canal
from . import conformal_models as models
from . import frames as fr
from . import invariants as inv
from . import minkowski_core as mk
from .curve_jets import Helix, MobiusCurve

DEFAULT_TOLS = {
    "routes.Q": 1e-6,
    "routes.T": 1e-6,
    "routes.Q2": 1e-6,
    "tables": 1e-6,
    "gram": 1e-6,
    "null": 1e-9,
    "normalization": 1e-7,
    "frenet": 1e-6,
    "frames": 1e-8,
    "mobius": 1e-6,
    "canal.identity": 1e-8,
    "canal.purity": 1e-9,
    "canal.impure": 0.1,
    "canal.roundtrip": 1e-7,
}


@dataclass(frozen=True)
class Check:
    name: str
    value: float
    tol: float
    # "max": pass iff value <= tol; "min": pass iff value >= tol
    sense: str = "max"

    @property
    def passed(self):
        ok = self.value <= self.tol if self.sense == "max" else self.value >= self.tol
        return bool(ok and np.isfinite(self.value))

    def line(self):
        rel = "<=" if self.sense == "max" else ">="
        status = "PASS" if self.passed else "FAIL"
        return f"{status}  {self.name:<16} {self.value:.3e} (need {rel} {self.tol:.1e})"


def _tol(name, tols):
    return tols.get(name, DEFAULT_TOLS[name])


def _null_residual(circle, form):
    """``|<gamma', gamma'>|`` in the input parameter."""
    d = circle.gamma.derivative(1)
    return abs(float(form(d, d)))


def _normalization(circle, form):
    a = circle.gamma_rho.derivative(2)
    return abs(float(form(a, a)) - 1.0)


def space_checks(curve, ts, tols):
    pts = [inv.analyze_space(curve, t) for t in ts]
    dq = max(abs(p.Q - p.Q_euclidean) / abs(p.Q_euclidean) for p in pts)
    dt = max(max(max(p.T_routes.values()) - min(p.T_routes.values()), abs(p.T - p.T_euclidean)) / p.T_euclidean for p in pts)
    frames = [fr.build_frames_space(p.sphere, p.Q_jet) for p in pts]
    return [
        Check("routes.Q", dq, _tol("routes.Q", tols)),
        Check("routes.T", dt, _tol("routes.T", tols)),
        Check("null", max(_null_residual(p.circle, mk.grassmann_inner) for p in pts), _tol("null", tols)),
        Check("normalization", max(_normalization(p.circle, mk.grassmann_inner) for p in pts), _tol("normalization", tols)),
        Check("frenet", fr.frenet_residual(frames), _tol("frenet", tols)),
        Check("frames", max(f.defect() for f in frames), _tol("frames", tols)),
    ]


def plane_checks(curve, ts, tols):
    pts = [inv.analyze_plane(curve, t) for t in ts]
    dq = max(abs(p.Q2 - p.Q_euclidean) / abs(p.Q_euclidean) for p in pts)
    form = mk.lorentz_form
    frames = [fr.build_frames_plane(p.circle, p.Q2_jet) for p in pts]
    return [
        Check("routes.Q2", dq, _tol("routes.Q2", tols)),
        Check("null", max(_null_residual(p.circle, form) for p in pts), _tol("null", tols)),
        Check("normalization", max(_normalization(p.circle, form) for p in pts), _tol("normalization", tols)),
        Check("frenet", fr.frenet_residual(frames), _tol("frenet", tols)),
        Check("frames", max(f.defect() for f in frames), _tol("frames", tols)),
    ]


def table_checks(curve, ts, tols):
    worst, gram = 0.0, 0.0
    for t in ts:
        rep = inv.verify_tables(curve, t)
        worst = max(worst, *inv.max_table_deviation(rep).values())
        if "gram" in rep:
            gram = max(gram, rep["gram"][2])
    out = [Check("tables", worst, _tol("tables", tols))]
    if curve.dim == 3:
        out.append(Check("gram", gram, _tol("gram", tols)))
    return out


def mobius_deviation(curve, ts, seeds, scale=0.3):
    """Largest relative change of ``Q``, ``T`` and ``d rho/dt`` under seeded Mobius maps."""
    worst = 0.0
    plane = curve.dim == 2
    base = [inv.analyze(curve, t) for t in ts]
    for seed in seeds:
        image = MobiusCurve(curve, models.random_mobius(seed, scale, dim=curve.dim + 2))
        for t, a in zip(ts, base):
            b = inv.analyze(image, t)
            if plane:
                pairs = [(a.Q2, b.Q2), (a.drho_dt, b.drho_dt)]
            else:
                pairs = [(a.Q, b.Q), (a.T, b.T), (a.drho_dt, b.drho_dt)]
            worst = max(worst, *(abs(x - y) / abs(x) for x, y in pairs))
    return worst


def canal_checks(tols, samples=21):
    tube = canal.DeSitterCurve.tube(1.0)
    rep = canal.canal_classify(tube, samples=samples)
    circles = canal.characteristic_circles(tube)
    pure = canal.purity_check(circles, samples=samples)
    impure = canal.purity_check(canal.CircleCurve.split_rotation(), samples=samples)
    rec = canal.reconstruct_sigma(circles, samples=samples)
    angle = max(canal.line_angle(s, tube.jet(t, 0).value) for t, s in zip(rec.ts, rec.sigma))
    return [
        Check("canal.identity", rep.identity_error, _tol("canal.identity", tols)),
        Check("canal.purity", float(pure.residuals.max()), _tol("canal.purity", tols)),
        Check("canal.impure", float(impure.residuals.max()), _tol("canal.impure", tols), sense="min"),
        Check("canal.roundtrip", angle, _tol("canal.roundtrip", tols)),
    ]


def run_suite(curve=None, samples=11, seed=0, trials=20, tol=None):
    """All checks on ``curve`` (default: the helix with ``a = b = 1/2``).

    ``tol`` replaces every tolerance when given.  Mobius trials use seeds
    ``seed, seed + 1, ...``.
    """
    curve = Helix(0.5, 0.5) if curve is None else curve
    # "canal.impure" is a lower bound and keeps its threshold
    tols = {k: tol for k in DEFAULT_TOLS if k != "canal.impure"} if tol is not None else {}
    a, b = curve.interval
    ts = np.linspace(a, b, samples + 2)[1:-1]
    checks = space_checks(curve, ts, tols) if curve.dim == 3 else plane_checks(curve, ts, tols)
    checks += table_checks(curve, ts[:: max(1, len(ts) // 3)], tols)
    mts = ts[:: max(1, len(ts) // 3)]
    checks.append(Check("mobius", mobius_deviation(curve, mts, range(seed, seed + trials)), _tol("mobius", tols)))
    checks += canal_checks(tols)
    return checks
