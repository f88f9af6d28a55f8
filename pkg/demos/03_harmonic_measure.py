"""Walk-on-spheres harmonic measure, validated three ways.

First against the Poisson-kernel integral on a disk, then the reflection
identity on a 2-good rational function: the measure of each boundary arc
summed over sources at the poles (A) equals the sum over sources at the
zeros including infinity (B), and both equal the normalized image
arclength of the arc on the unit circle (C).
"""
import numpy as np

from lemnicap import RationalFunction, verify_energy_identity, verify_reflection
from lemnicap.harmonic import SegmentSet, poisson_disk_arc_measure, wos

# disk oracle: off-center source, right half of the circle
n = 512
th = 2 * np.pi * np.arange(n) / n
circle = np.exp(1j * th)
mid_angle = np.angle(np.exp(1j * (th + np.pi / n)))
labels = (np.abs(mid_angle) <= np.pi / 2).astype(np.int64)
segs = SegmentSet([circle], [labels], 2)
rep = wos(segs, 0.5, 200_000, seed=7)
oracle = poisson_disk_arc_measure(0, 1.0, 0.5, -np.pi / 2, np.pi / 2)
print(f"disk, source 0.5, right half-circle: wos {rep.estimates[1]:.5f} "
      f"+- {rep.std_errors[1]:.5f}, Poisson integral {oracle:.5f}")

# reflection identity on R(z) = 1/(z-2) + 1/(z+2)
R = RationalFunction([2.0, -2.0], [1.0, 1.0])
ref = verify_reflection(R, arcs_per_curve=4, walks=100_000, seed=0xC0FFEE)
print("\nreflection identity, 8 arcs:")
print(f"{'arc':<22}{'A (poles)':>12}{'B (zeros)':>12}{'C (oracle)':>12}{'sigma':>10}")
for arc, a, b, c, s in zip(ref.arcs, ref.A, ref.B, ref.C, ref.sigma):
    print(f"curve {arc.curve} [{arc.s0:.2f},{arc.s1:.2f})"
          f"{a:>12.5f}{b:>12.5f}{c:>12.5f}{s:>10.5f}")
print(f"worst z-score: "
      f"{max(float(v.max()) for v in ref.z_scores().values()):.2f} (pass <= 3)")

# energy identity: I(mu) for mu the sum of the pole measures
en = verify_energy_identity(R, walks=80_000, seed=0xC0FFEE)
print(f"\nenergy identity: I(mu) = {en.total:.5f} "
      f"(exact {en.total_expected:.5f} = -2 log 4)")
print(f"cross term {en.cross_energies[(0, 1)]:.5f} (exact {-np.log(4):.5f})")
