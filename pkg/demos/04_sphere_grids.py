"""Quasi-uniform grids on the sphere from the cube-surface lattice.

Dividing the surface of the cube |x|_inf = 1 into cells of side 2^-t and
projecting the lattice radially gives a grid whose covering radius is at
most 2^-t sqrt(n)/2, with an explicit cardinality bound, and with the key
hull property behind counting: every sphere point lies in the spherical
convex hull of its nearby grid points.
"""

import math

import numpy as np

from spherecount import build_mesh, covering_check, sch_membership
from spherecount.mesh import (angular_distance_many, convexity_cover_check,
                              mesh_count_bound)

for n in (1, 2):
    print(f"grids on S^{n}:")
    for t in range(5):
        mesh = build_mesh(n, t)
        print(f"  t={t}: eta={mesh.eta:<8} count={mesh.count:>6} "
              f"(bound {mesh_count_bound(n, t):>6})  "
              f"covering radius bound {mesh.covering_radius_bound:.4f}")

mesh = build_mesh(2, 3)
rng = np.random.default_rng(1)
probes = rng.standard_normal((2000, 3))
probes /= np.linalg.norm(probes, axis=1)[:, None]
worst = max(covering_check(mesh, z)[1] for z in probes[:200])
print(f"\nworst observed covering distance over 200 probes: {worst:.5f} "
      f"(bound {mesh.covering_radius_bound:.5f})")

# the hull property: neighbours within sqrt(n) eta surround every point
hits = 0
for z in probes[:500]:
    near = mesh.points[angular_distance_many(mesh.points, z) <= math.sqrt(2) * mesh.eta]
    hits += sch_membership(z, near)
print(f"hull membership holds for {hits}/500 random probes")

# spherical convexity: caps with a common point cover the hull of their centers
a = np.array([1.0, 0.0, 0.0])
b = np.array([0.0, 1.0, 0.0])
r = 0.9
geodesic = [np.array([math.cos(s), math.sin(s), 0.0])
            for s in np.linspace(0, math.pi / 2, 11)]
print("cover check along a geodesic:",
      all(convexity_cover_check([a, b], [r, r], x) for x in geodesic))
