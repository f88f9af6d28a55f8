"""Capacity bounds for good rational functions.

Lower: every component satisfies cap(K_i) >= |a_i| and the whole lemniscate
beats the pole-and-residue product bound.  Upper: once injectivity is
certified up to radius r, cap(K_i) <= r^6/((r^2-1)(r-1)^4) |a_i|.  Adding a
pole with residue eps creates a component whose capacity decays like
O(eps).
"""
import numpy as np

from lemnicap import (
    RationalFunction,
    certify_injectivity_radius,
    epsilon_sweep,
    random_good_rational,
    upper_bound_constant,
    verify_lower_bounds,
    verify_upper_bound,
)

rng = np.random.default_rng(12)
print("lower bounds on five random good functions:")
for _ in range(5):
    d = int(rng.integers(1, 5))
    R = random_good_rational(d, rng)
    rep = verify_lower_bounds(R, panels=192, cells=384)
    comps = ", ".join(
        f"cap {c.cap:.3f} >= {c.residue_modulus:.3f}" for c in rep.per_component
    )
    print(f"  d={d}: {comps}; whole {rep.cap_whole:.3f} >= {rep.product_bound:.3f}")

R = RationalFunction([2.0, -2.0], [1.0, 1.0])
print("\ninjectivity certificate for R = 1/(z-2) + 1/(z+2):")
cert = certify_injectivity_radius(R, 0)
rep = verify_upper_bound(R, 0, certificate=cert)
print(f"  r* = {cert.r_star:.4f} (components merge at level 1/2, so r* ~ 2)")
print(f"  cap(K_0) = {rep.cap:.4f} <= c(r*)|a_0| = {rep.bound:.4f}")
print(f"  c(2) = {upper_bound_constant(2.0):.6f} (= 64/3)")

print("\nO(eps) decay for 1/(z-3) + eps/z:")
sweep = epsilon_sweep(RationalFunction([3.0], [1.0]), 0.0, [1e-1, 1e-2, 1e-3])
print(f"  {'eps':>8}{'cap':>14}{'cap/eps':>10}{'c(r*)':>8}")
for row in sweep.rows:
    print(f"  {row.eps:>8g}{row.cap:>14.8f}{row.ratio:>10.5f}{row.constant:>8.3f}")
print("  the ratio column converges to 9/8, the capacity of the circle that "
      "the component approaches after rescaling by eps")
