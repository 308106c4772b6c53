"""Condition numbers as inverse distances to ill-posedness.

mu(f, x) measures how violently the zero at x moves under coefficient
perturbations; its reciprocal is exactly the Weyl distance from f to the
systems whose restricted Jacobian at x is singular, and the minimizing
perturbation can be written down.  kappa(f, x) folds in the residual and
its sphere maximum governs the cost of certified counting.
"""

import math

import numpy as np

from spherecount import (kappa_grid, kappa_point, minimal_singular_perturbation,
                         mu, mu_variation_check, sample_gaussian_system,
                         singular_values)
from spherecount.condition import scaled_restricted_jacobian, min_singular_value
from spherecount.mesh import build_mesh
from spherecount.polynomials import weyl_inner

F = sample_gaussian_system(2, (2, 3), seed=7).normalized()
x = np.array([1.0, 0.0, 0.0])

print("a random unit-norm system with degrees (2, 3) on S^2")
print("  mu(f, e0)    =", mu(F, x))
print("  kappa(f, e0) =", kappa_point(F, x))

# the nearest system with a singular restricted Jacobian at e0
G = minimal_singular_perturbation(F, x)
dist = math.sqrt(sum(weyl_inner(p, p) - 2 * weyl_inner(p, q) + weyl_inner(q, q)
                     for p, q in zip(F.polynomials, G.polynomials)))
print("\nnearest singular system:")
print("  |f - g|          =", dist)
print("  1/mu(f, e0)      =", 1.0 / mu(F, x))
print("  sigma_min at g   =", min_singular_value(scaled_restricted_jacobian(G, x)))

# spectra: the restricted Jacobian is a small dense matrix
M = scaled_restricted_jacobian(F, x)
print("\nscaled restricted Jacobian spectrum:", singular_values(M).values)

# perturbing the point and the coefficients moves mu inside a sandwich
rng = np.random.default_rng(0)
w = 1e-3 * rng.standard_normal(3)
from scipy.linalg import expm
K = np.array([[0, -w[2], w[1]], [w[2], 0, -w[0]], [-w[1], w[0], 0]])
y = expm(K) @ x
lo, hi, observed = mu_variation_check(F, F, x, y)
print("\nsandwich after a small rotation of the point:")
print(f"  {lo:.6f} <= {observed:.6f} <= {hi:.6f}")

# the counting condition number over the sphere, from a grid
mesh = build_mesh(2, 4)
est, cover = kappa_grid(F, mesh)
print(f"\nkappa grid estimate (t=4, {mesh.count} points): {est:.4f}"
      f"   covering radius of the grid: {cover:.4f}")
print("kappa(f) >= 1 always; the estimate is a certified lower bound")
