"""Certifying a zero of a polynomial system from data at one point.

The inclusion test examines a sphere point x through the affine chart on
its tangent space and either certifies that Newton iteration from x
converges to a genuine zero nearby (with an explicit cap radius), or says
nothing.  Its negative-space partner, the exclusion radius, certifies a
cap around x containing no zero at all.
"""

import numpy as np

from spherecount import (HomogeneousPolynomial, PolynomialSystem,
                         exclusion_radius, inclusion_test, normalize,
                         refine_zero, robust_certify)
from spherecount.mesh import angular_distance

# a cubic on the circle: zeros where x1/x0 is 0.3, -0.7 or 1.4
terms = {(0, 1): 1.0, (1, 0): -0.3}
for s in (-0.7, 1.4):
    nxt = {}
    for (e0, e1), c in terms.items():
        for (d0, d1), b in {(0, 1): 1.0, (1, 0): -s}.items():
            nxt[(e0 + d0, e1 + d1)] = nxt.get((e0 + d0, e1 + d1), 0.0) + c * b
    terms = nxt
F = PolynomialSystem((HomogeneousPolynomial(2, 3, terms),))

x = normalize(np.array([1.0, 0.292]))  # near the zero with slope 0.3
cert = inclusion_test(F, x)
print("certificate at", np.round(x, 4))
for key, value in cert.to_json().items():
    print(f"  {key:12} {value}")

z = refine_zero(F, x)
true_zero = normalize(np.array([1.0, 0.3]))
print("\nNewton refinement:")
print("  steps:", z.newton_steps, " converged:", z.converged)
print("  step lengths:", ["%.2e" % s for s in z.step_norms])
print("  distance to the true zero:", np.linalg.norm(z.zeta - true_zero))
print("  promised cap radius r_x:", cert.inclusion_radius,
      " actual distance moved:", angular_distance(x, z.zeta))

# the same start also survives per-step perturbations below the robust
# threshold; the envelope bounds the scale-free error sequence
ok, envelope = robust_certify(F, x, delta=1e-3)
print("\nrobust certification with per-step noise 1e-3:", ok)
print("  error envelope:", ["%.3e" % u for u in envelope[:6]])

# far from any zero the story flips: a certified empty cap
y = normalize(np.array([1.0, 3.0]))
print("\nexclusion radius at", np.round(y, 4), "=", exclusion_radius(F, y))
print("nearest true zero at angular distance",
      min(angular_distance(y, normalize(np.array([1.0, s])))
          for s in (0.3, -0.7, 1.4)))
