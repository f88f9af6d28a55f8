"""Trace lemniscates of a few rational functions and write SVG pictures.

The level set {|R(z)| = t} around the poles of R changes topology as t
crosses the moduli of the critical values: above them the set splits into
one oval per pole, below them components merge and holes can appear around
zeros.
"""
import os

import numpy as np

from lemnicap import RationalFunction, export_svg, is_good, trace, zeros

OUT = os.path.join(os.path.dirname(__file__), "output")
os.makedirs(OUT, exist_ok=True)

# A single pole: the level set is an exact circle |z - 1| = 2.
R1 = RationalFunction([1.0], [2.0])
L = trace(R1, 1.0)
print(f"single pole, t=1: {len(L.curves)} curve, "
      f"perimeter {sum(np.abs(np.roll(v, -1) - v).sum() for v in L.curves):.6f} "
      f"(4*pi = {4 * np.pi:.6f})")
export_svg(L, os.path.join(OUT, "disk.svg"), R=R1)

# Two symmetric poles: the critical values have modulus 1/2, so the two
# ovals merge once t drops below 0.5.
R2 = RationalFunction([2.0, -2.0], [1.0, 1.0])
for t in (1.0, 0.6, 0.45, 0.2):
    L = trace(R2, t)
    g = is_good(R2, t)
    holes = sum(1 for d in L.depths if d % 2 == 1)
    print(f"two poles, t={t}: {L.component_count} component(s), {holes} hole(s), "
          f"good={g.is_good}")
    export_svg(L, os.path.join(OUT, f"twopole_t{t}.svg"), R=R2,
               zeros_of=zeros(R2)[0])

# Degree-3 function with wildly different scales: a tiny component of size
# ~a*p^(1-eta) at p next to huge ones at +-ip.  Windows are chosen per pole.
p = 1e4
b = p - p**0.75
R3 = RationalFunction([p, 1j * p, -1j * p], [1.0, b, b])
L = trace(R3, 1.0)
sizes = sorted(float(np.ptp(v.real)) for v in L.curves)
print(f"three poles at p=1e4: component extents {[f'{s:.3g}' for s in sizes]}")
export_svg(L, os.path.join(OUT, "counterexample.svg"), R=R3)
print(f"SVGs written to {OUT}")
