"""Tangent-flat volume ratios of metric spheres.

A metric sphere of radius r in RP^n has all principal curvatures equal to
cot(r), so its manifold of tangent k-flats has a closed-form volume ratio.
The script sweeps the radius, locates the maximizing radius for tangent
lines, and shows the universal bound of 4 is respected with room to spare.
"""
import numpy as np

import tangentflats as tf

n = 3
rs = np.linspace(0.05, np.pi / 2 - 0.05, 7)
print(f"metric spheres in RP^{n}: ratio |tangent k-flats| / |Schubert|")
print("  r      k=0       k=1       k=2")
for r in rs:
    vals = [tf.sphere_tangent_ratio(k, n, r) for k in range(n)]
    print("  {:.3f}  {:.6f}  {:.6f}  {:.6f}".format(r, *vals))

print("\nmaximizing radius for tangent LINES (k=1):")
for n in range(3, 9):
    r_star, value = tf.max_sphere_line_tangent_ratio(n)
    print(f"  n={n}: r* = {r_star:.8f} = arccos(1/sqrt({n - 1})),"
          f"  max ratio = {value:.8f}")

print("\nlarge-n limit of the maximum: sqrt(8/(e pi)) ="
      f" {np.sqrt(8 / (np.e * np.pi)):.8f}")
print(f"  at n=50 the maximum is {tf.max_sphere_line_tangent_ratio(50)[1]:.8f}")

# the bound: no convex hypersurface ratio exceeds 4, spheres stay below 2
grid = np.linspace(1e-3, np.pi / 2 - 1e-3, 5000)
worst = max(tf.sphere_tangent_ratio(k, n, grid).max()
            for n in range(2, 9) for k in range(n))
print(f"\nlargest sphere ratio over n <= 8 and a dense radius grid: {worst:.6f}")
