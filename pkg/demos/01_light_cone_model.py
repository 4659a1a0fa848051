"""Points, spheres and circles of E^3 as vectors and bivectors of R^5_1."""

import numpy as np

from conformal_curves import conformal_models as cm
from conformal_curves import minkowski_core as mk

np.set_printoptions(precision=6, suppress=True)

# A point of E^3 becomes a light-like vector on the chart <x, n> = -1.
p = np.array([1.0, 2.0, -0.5])
x = cm.embed_point3(p)
print("lift of", p, "->", x)
print("  <x, x> =", mk.lorentz_form(x, x), " <x, n> =", mk.lorentz_form(x, cm.CHART_NORMAL))

# The Minkowski product of two lifts is minus half the squared distance.
q = np.array([0.0, 0.0, 1.0])
print("-2 <x, y> =", -2 * mk.lorentz_form(x, cm.embed_point3(q)), " |p - q|^2 =", np.sum((p - q) ** 2))

# Spheres are unit space-like vectors; a point lies on the sphere iff it is orthogonal.
sigma = cm.sphere_from_center_radius([0.0, 0.0, 0.0], 2.0)
print("\nsphere |x| = 2 ->", sigma)
for pt in ([2.0, 0.0, 0.0], [0.0, 0.0, 1.0], [0.0, 3.0, 0.0]):
    print(f"  <sigma, lift{pt}> = {mk.lorentz_form(sigma, cm.embed_point3(pt)):+.4f}")
# negative inside the ball, positive outside

# Circles are unit pure bivectors: the orthogonal complement of three lifted points.
gamma = cm.circle_from_three_points([1, 0, 0], [0, 1, 0], [-1, 0, 0])
print("\nunit circle in the xy-plane:", gamma)
print("  Plucker residual", mk.plucker_residual(gamma))
print("  incidence of (0, -1, 0):", cm.circle_incidence(gamma, [0.0, -1.0, 0.0]))
print("  incidence of (0, 0, 1): ", cm.circle_incidence(gamma, [0.0, 0.0, 1.0]))

# Mobius transformations are Lorentz matrices; they send spheres to spheres.
g = cm.random_mobius(seed=5)
pts = np.array([[2.0, 0, 0], [0, 2.0, 0], [0, 0, 2.0], [-2.0, 0, 0], [0, -2.0, 0]])
image = g.on_points(pts)
# fit a sphere through the first four images; the fifth lands on it too
sig_img = mk.lorentz_cross4(*cm.embed_point3(image[:4]))
sig_img /= np.sqrt(mk.lorentz_form(sig_img, sig_img))
print("\nMobius image of five points on |x| = 2:")
print(image)
print("  fifth image vs sphere through the other four:", mk.lorentz_form(sig_img, cm.embed_point3(image[4])))
