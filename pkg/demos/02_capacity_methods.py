"""Logarithmic capacity by two independent discretizations.

The panel method solves the discretized equilibrium problem (constant
boundary potential); the Leja method estimates the transfinite diameter by
greedy point selection.  Both are checked against closed forms: a circle of
radius r has capacity r, a segment of length L has capacity L/4, and the
preimage under a polynomial P rescales capacity by (1/|a_n|)^(1/n).
"""
from lemnicap import (
    Boundary,
    Polynomial,
    cap_fekete,
    cap_panel,
    cap_polynomial_preimage,
    circle_boundary,
    segment_boundary,
)

print(f"{'geometry':<28}{'exact':>10}{'panel':>14}{'leja':>12}")

cases = [
    ("circle radius 2", 2.0, circle_boundary(0, 2.0, 256)),
    ("circle radius 3 at 1+1j", 3.0, circle_boundary(1 + 1j, 3.0, 256)),
    ("segment [0, 2]", 0.5, segment_boundary(0, 2.0, 256)),
    ("segment [-2, 2]", 1.0, segment_boundary(-2.0, 2.0, 256)),
]
for name, exact, boundary in cases:
    est, mu = cap_panel(boundary, panels=256)
    fek = cap_fekete(boundary, n=160)
    print(f"{name:<28}{exact:>10.6f}{est.value:>14.8f}{fek.value:>12.6f}")

# no closed form: two unit circles; the two methods validate each other
two = Boundary(
    [circle_boundary(-3, 1.0, 256).curves[0], circle_boundary(3, 1.0, 256).curves[0]]
)
est, _ = cap_panel(two, panels=384)
fek = cap_fekete(two, n=256)
print(f"{'two unit circles at +-3':<28}{'--':>10}{est.value:>14.8f}{fek.value:>12.6f}"
      f"   ({abs(est.value - fek.value) / est.value:.2%} apart)")

# polynomial preimage formula: P = 2 z^3 sends cap 1 to (1/2)^(1/3)
value = cap_polynomial_preimage(Polynomial([0, 0, 0, 2.0]), 1.0)
print(f"\npreimage of the unit disk under 2z^3: cap = {value:.6f} "
      f"(= (1/2)^(1/3) = {0.5 ** (1 / 3):.6f})")

# Chebyshev-style check: z^2 - 2 maps [-2,2] onto itself
seg, _ = cap_panel(segment_boundary(-2.0, 2.0, 256), panels=256)
via = cap_polynomial_preimage(Polynomial([-2.0, 0, 1.0]), seg.value)
print(f"cap([-2,2]) = {seg.value:.6f}; preimage under z^2-2 gives {via:.6f}")
