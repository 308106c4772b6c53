"""Where the magic numbers of certified Newton iteration come from.

Quadratic convergence is governed by a single polynomial,
psi(u) = 1 - 4u + 2u^2, and by the worst-case analytic function with a
given first step (beta) and derivative growth rate (gamma).  Everything a
certificate ever promises can be read off closed forms evaluated here.
"""

from spherecount import (ALPHA, UniversalQuadratic, error_bound_alpha,
                         gamma_error_sequence, r0, r1)
from spherecount.convergence import (ALPHA_TABLE_LABELS, GAMMA_TABLE_LABELS,
                                     alpha_error_table,
                                     gamma_contraction_table)

print("The threshold constants, all from closed forms:")
print(f"  alpha0        = {ALPHA.alpha0!r}   (largest certifiable beta*gamma)")
print(f"  (3-sqrt7)/2   = {ALPHA.u_first_kind!r}   (basin radius, in 1/gamma units)")
print(f"  alpha*        = {ALPHA.alpha_star!r}   (sphere inclusion threshold)")
print(f"  robust alpha  = {ALPHA.alpha_robust!r}   (survives per-step noise)")
print(f"  r0(alpha0)    = {r0(ALPHA.alpha0):.9f}, r1(alpha0) = {r1(ALPHA.alpha0):.9f}")

# The error recurrence u_{i+1} = u_i^2/psi(u_i) drives every proof.  At the
# edge u0 = (3-sqrt7)/2 the first step contracts by exactly 1/2.
seq = gamma_error_sequence(ALPHA.u_first_kind, 5)
print("\nerror sequence from the edge start:", ["%.3e" % u for u in seq])

print("\nContraction table, -log2(u_i/u0) (rows i = 1..5):")
print("     " + "  ".join(f"{label:>10}" for label in GAMMA_TABLE_LABELS))
for i, row in enumerate(gamma_contraction_table(), start=1):
    print(f"  i={i}" + "  ".join(f"{v:10.3f}" for v in row))

print("\nCertified distance to the zero after i steps, in units of beta:")
print("     " + "  ".join(f"{label:>16}" for label in ALPHA_TABLE_LABELS))
for i, row in enumerate(alpha_error_table(), start=1):
    print(f"  i={i}" + "  ".join(f"{v:16.3f}" for v in row))

# The closed-form Newton orbit of the worst-case function: each iterate is
# an explicit rational expression in q and the zero ratio.
u = UniversalQuadratic.from_invariants(beta=0.1, gamma=1.0)
print(f"\nworst case with beta=0.1, gamma=1: zeros {u.zeta1:.6f}, {u.zeta2:.6f}, "
      f"q = {u.q:.6f}")
t = 0.0
for i in range(6):
    closed = u.orbit(i)
    print(f"  t_{i}: direct {t: .12f}   closed form {closed: .12f}")
    t = u.newton_step(t)

print("\nbound vs truth: |t_i - zeta1| <= error_bound_alpha(alpha, i) * beta")
for i in range(1, 6):
    print(f"  i={i}:  gap {u.zeta1 - u.orbit(i):.3e}   "
          f"bound {error_bound_alpha(u.alpha, i) * u.beta:.3e}")
