"""Curves of spheres, their envelopes and the circles they are made of."""

import numpy as np

from conformal_curves import TrigPolynomial, canal_classify, characteristic_circles, purity_check, reconstruct_sigma
from conformal_curves.canal import CircleCurve, DeSitterCurve, line_angle

sources = {
    "tube c=1": DeSitterCurve.tube(1.0),
    "pencil": DeSitterCurve.pencil(),
    "osculating spheres of the trefoil": DeSitterCurve.osculating_spheres(TrigPolynomial.trefoil()),
}
for name, src in sources.items():
    rep = canal_classify(src, samples=21)
    kg = [s.kg_norm for s in rep.samples]
    print(f"{name:36s} {rep.kind:12s} <k_g,k_g> in [{min(kg):+.3e}, {max(kg):+.3e}]  identity error {rep.identity_error:.1e}")

# A curve of circles comes from spheres iff gamma' is a pure bivector.
tube = sources["tube c=1"]
ts = np.linspace(0.1, 6.0, 12)
good = purity_check(characteristic_circles(tube), ts)
bad = purity_check(CircleCurve.split_rotation(), ts)
print(f"\ncharacteristic circles of the tube: worst purity residual {good.residuals.max():.1e} -> canal {good.canal}")
print(f"split rotation of two planes:       worst purity residual {bad.residuals.max():.3f} -> canal {bad.canal}")

# Recover the spheres from their characteristic circles.
rec = reconstruct_sigma(characteristic_circles(tube), ts)
angles = [line_angle(s, tube.jet(t, 0).value) for t, s in zip(rec.ts, rec.sigma)]
print(f"\nsphere curve recovered from circles: largest angle to the original {max(angles):.1e}")
