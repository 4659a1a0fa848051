"""Mobius maps move a curve but leave its conformal invariants alone."""

import numpy as np

from conformal_curves import LogSpiral, MobiusCurve, TrigPolynomial, analyze, conformal_length, random_mobius

curve = TrigPolynomial.trefoil()
t = 1.3
base = analyze(curve, t)
print(f"trefoil at t = {t}: Q = {base.Q:.10f}, T = {base.T:.10f}, drho/dt = {base.drho_dt:.10f}")

for seed in range(5):
    image = MobiusCurve(curve, random_mobius(seed))
    p = analyze(image, t)
    moved = np.linalg.norm(image.point(t) - curve.point(t))
    # the Euclidean curvature changes, the conformal data does not
    print(
        f"  seed {seed}: point moved {moved:6.3f}, kappa {p.frenet.kappa:8.4f} (was {base.frenet.kappa:.4f}),"
        f" dQ {p.Q - base.Q:+.1e}, dT {p.T - base.T:+.1e}"
    )

# Conformal arc length over a fixed parameter interval is invariant too.
L = conformal_length(curve, 0.0, 2.0)
print(f"\nconformal length of t in [0, 2]: {L:.12f}")
for seed in (7, 8):
    print(f"  after map {seed}: {conformal_length(MobiusCurve(curve, random_mobius(seed)), 0.0, 2.0):.12f}")

# Plane curves carry only Q_2; maps of the plane are 4x4 Lorentz matrices.
spiral = LogSpiral(1.0, 0.2)
print(f"\nlog spiral: Q_2 = {analyze(spiral, 1.0).Q2:.10f}")
for seed in (1, 2):
    img = MobiusCurve(spiral, random_mobius(seed, dim=4))
    print(f"  image {seed}: Q_2 = {analyze(img, 1.0).Q2:.10f}")
