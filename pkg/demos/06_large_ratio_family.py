"""A degree-3 family where cap(K_i)/|a_i| grows without bound.

R_p has residue a at the pole p and residues p - p^eta at +-ip.  The two
big residues push |R| close to 1 near the real axis, so the component
around p stretches along [p, p + a p^(1-eta)/2] even though its residue is
only a.  Capacity of a segment is a quarter of its length, so
cap(K_p)/a >= p^(1-eta)/8 -> infinity: no constant C(d) can bound
cap(K_i) <= C(d)|a_i| for all d-good functions.
"""
from lemnicap import counterexample_experiment

A, ETA = 1.0, 0.75
rep = counterexample_experiment(A, ETA, [1e2, 1e3, 1e4])

print(f"a = {A}, eta = {ETA}")
print(f"{'p':>8}{'3-good':>8}{'crit err':>11}{'interval':>10}"
      f"{'cap(K_p)':>11}{'>= a p^(1-eta)/8':>18}{'cap/|a|':>10}")
for r in rep.rows:
    print(f"{r.p:>8g}{str(r.good):>8}{r.crit_rel_err:>11.2e}"
          f"{str(r.segment_contained):>10}{r.cap:>11.4f}"
          f"{r.lower_bound:>18.4f}{r.ratio_over_residue:>10.4f}")

print("\nthe cap/|a| column is strictly increasing (~p^(1-eta)): the ratio is "
      "unbounded over the family")
print("critical points match -p and p - a^(1/3) w p^(2/3) (w^3 = 1) with "
      "errors shrinking as p grows")
