"""Conformal arc length, torsion and curvature, computed twice.

The Minkowski route works with osculating spheres and circles. The Euclidean
route uses closed forms in kappa, tau and their arc-length derivatives.
"""

import numpy as np

from conformal_curves import Helix, TrigPolynomial, analyze, invariant_table, verify_tables
from conformal_curves.invariants import max_table_deviation

# Helices have constant invariants: Q = -a / (2b), T = sqrt(b / a).
for a, b in [(0.5, 0.5), (1.0, 2.0), (2.0, 1.0)]:
    p = analyze(Helix(a, b), 1.0)
    print(f"helix({a}, {b}):  Q = {p.Q:+.10f} (closed form {-a / (2 * b):+.10f})   T = {p.T:.10f} ({np.sqrt(b / a):.10f})")

# The trefoil knot has varying invariants; every T route should agree.
trefoil = TrigPolynomial.trefoil()
print("\ntrefoil, T by four routes and Q by two:")
print(
    f"{'t':>5} {'dl_drho':>13} {'sigma_rho':>13} {'gamma_l':>13} {'sigma_lll':>13} {'T eucl':>13} {'Q mink':>13} {'Q eucl':>13}"
)
for t in np.linspace(0.0, 2 * np.pi, 7)[:-1]:
    p = analyze(trefoil, t)
    r = p.T_routes
    print(
        f"{t:5.2f} {r['dl_drho']:13.9f} {r['sigma_rho']:13.9f} {r['gamma_l']:13.9f} {r['sigma_lll']:13.9f}"
        f" {p.T_euclidean:13.9f} {p.Q:13.9f} {p.Q_euclidean:13.9f}"
    )

# The invariant table pairs both routes and accumulates s and rho.
rows = invariant_table(trefoil, np.linspace(0, 2 * np.pi, 41))
worst = max(abs(m.Q - e.Q) / abs(e.Q) for m, e in rows)
print(f"\nover 41 samples: total rho = {rows[-1][0].rho:.8f}, worst relative Q gap {worst:.2e}")
print("sign of the Euclidean torsion along the trefoil:", sorted({e.T_sign for _, e in rows}))

# Multiplication tables of the derivatives of gamma, sigma and the lifted curve.
rep = verify_tables(trefoil, 1.0)
print("\nlargest table deviation:", {k: f"{v:.1e}" for k, v in max_table_deviation(rep).items()})
det, target, err = rep["gram"]
print(f"Gram determinant of sigma..sigma'''' = {det:.8e}, -T^-12 = {target:.8e}")
