"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
summary lines.
"""
import time

import numpy as np

from lemnicap import bounds, harmonic, lemniscate, schwarz
from lemnicap.capacity import (
    Boundary,
    cap_panel,
    circle_boundary,
    segment_boundary,
)
from lemnicap.cli import main
from lemnicap.ratfunc import RationalFunction

SEED = 0xC0FFEE
R_PAIR = RationalFunction([2.0, -2.0], [1.0, 1.0])


def _line(name, ok, detail):
    print(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
    assert ok, f"{name}: {detail}"


def test_01_closed_form_capacities():
    t0 = time.time()
    est, _ = cap_panel(circle_boundary(0, 2.0, 256), panels=256)
    dt = time.time() - t0
    err_circle = abs(est.value - 2.0)
    est_seg, _ = cap_panel(segment_boundary(0.0, 2.0, 256), panels=256)
    err_seg = abs(est_seg.value - 0.5)
    _line(
        "criterion 1 (closed-form capacities)",
        err_circle <= 1e-4 and err_seg <= 1e-3 and dt < 1.0,
        f"circle err {err_circle:.2e} (<=1e-4, {dt:.2f}s), segment err {err_seg:.2e} (<=1e-3)",
    )


def test_02_equality_case():
    rng = np.random.default_rng(SEED)
    worst = 0.0
    for _ in range(5):
        a = rng.uniform(0.5, 3.0) * np.exp(2j * np.pi * rng.random())
        p = rng.uniform(-4, 4) + 1j * rng.uniform(-4, 4)
        R = RationalFunction([p], [a])
        rep = bounds.verify_lower_bounds(R)
        worst = max(worst, abs(rep.per_component[0].cap - abs(a)))
    _line(
        "criterion 2 (equality case cap(K_1)=|a|)",
        worst <= 1e-3,
        f"worst |cap - |a|| = {worst:.2e} over 5 random single-pole functions",
    )


def test_03_reflection_principle():
    t0 = time.time()
    rep = harmonic.verify_reflection(
        R_PAIR, arcs_per_curve=4, walks=100_000, seed=SEED
    )
    dt = time.time() - t0
    z = rep.z_scores()
    worst = max(float(v.max()) for v in z.values())
    _line(
        "criterion 3 (reflection principle)",
        rep.passed and dt < 60.0,
        f"8 arcs, worst z-score {worst:.2f} (<=3), {dt:.1f}s (<60s)",
    )


def test_04_energy_identity():
    rep = harmonic.verify_energy_identity(R_PAIR, walks=100_000, seed=SEED)
    total_err = abs(rep.total - (-2 * np.log(4)))
    cross_err = abs(rep.cross_energies[(0, 1)] - (-np.log(4)))
    _line(
        "criterion 4 (energy identity)",
        total_err <= 5e-2 and cross_err <= 2e-2,
        f"I(mu) err {total_err:.3f} (<=0.05), cross err {cross_err:.3f} (<=0.02)",
    )


def _random_family(n=100, seed=SEED):
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(n):
        d = int(rng.integers(1, 5))
        out.append(bounds.random_good_rational(d, rng, box=10.0))
    return out


FAMILY = _random_family()
FAMILY_REPORTS = {}


def test_05_lower_bounds_family():
    worst_comp = np.inf
    worst_whole = np.inf
    for k, R in enumerate(FAMILY):
        rep = bounds.verify_lower_bounds(R, panels=192, cells=384)
        FAMILY_REPORTS[k] = rep
        worst_comp = min(worst_comp, min(c.margin for c in rep.per_component))
        worst_whole = min(worst_whole, rep.whole_margin)
    _line(
        "criterion 5 (lower bounds, 100 random d-good)",
        worst_comp >= -1e-3 and worst_whole >= -1e-3,
        f"min component slack {worst_comp:.2e}, min whole slack {worst_whole:.2e} (>=-1e-3)",
    )


def test_06_upper_bound_family():
    exact = bounds.upper_bound_constant(2.0) == 64 / 3
    checked = 0
    worst_slack = np.inf
    for k, R in enumerate(FAMILY):
        rep = FAMILY_REPORTS.get(k) or bounds.verify_lower_bounds(R, panels=192, cells=384)
        for comp in rep.per_component:
            cert = bounds.certify_injectivity_radius(R, comp.index, cheap_only=True)
            if cert.r_star < 1.2:
                continue
            checked += 1
            slack = cert.constant * comp.residue_modulus - comp.cap
            worst_slack = min(worst_slack, slack)
    _line(
        "criterion 6 (upper bound with certified radius)",
        exact and checked > 0 and worst_slack >= 0.0,
        f"c(2)=64/3 exact: {exact}; {checked} components with r*>=1.2, min slack {worst_slack:.3g}",
    )


def test_07_epsilon_corollary():
    R = RationalFunction([3.0], [1.0])
    rep = bounds.epsilon_sweep(R, 0.0, [1e-1, 1e-2, 1e-3])
    _line(
        "criterion 7 (O(eps) corollary)",
        rep.ratio_spread < 0.2 and rep.bound_ok,
        f"cap/eps spread {rep.ratio_spread:.1%} (<20%), bounded by c(r*): {rep.bound_ok}",
    )


COUNTEREXAMPLE = {}


def test_08_counterexample():
    t0 = time.time()
    rep = bounds.counterexample_experiment(1.0, 0.75, [1e2, 1e3, 1e4])
    dt = time.time() - t0
    COUNTEREXAMPLE["rep"] = rep
    ratios = [r.ratio_over_residue for r in rep.rows]
    ok = (
        all(r.good for r in rep.rows)
        and all(r.segment_contained for r in rep.rows)
        and all(r.cap - r.lower_bound >= 0 for r in rep.rows)
        and all(b > a for a, b in zip(ratios, ratios[1:]))
        and dt < 120.0
    )
    _line(
        "criterion 8 (degree-3 counterexample)",
        ok,
        f"cap/|a| = {', '.join(f'{r:.3f}' for r in ratios)} increasing, {dt:.1f}s (<120s)",
    )


def test_09_critical_asymptotics():
    rep = COUNTEREXAMPLE.get("rep") or bounds.counterexample_experiment(
        1.0, 0.75, [1e2, 1e3, 1e4]
    )
    errs = [r.crit_rel_err for r in rep.rows]
    ok = all(b < a for a, b in zip(errs, errs[1:]))
    _line(
        "criterion 9 (critical-point asymptotics)",
        ok,
        f"relative errors {', '.join(f'{e:.2e}' for e in errs)} decreasing",
    )


def test_10_schwarz_sweep():
    sw = schwarz.sweep_F(R_PAIR, n_levels=24)
    mono = sw.monotone_within(1e-3)
    near0 = abs(sw.F[0] - 2.0)
    R2 = RationalFunction([1.0, -1.0], [1.0, -1.0])
    sw2 = schwarz.sweep_F(R2, n_levels=24)
    near0_m2 = abs(sw2.F[0] - np.sqrt(2))
    _line(
        "criterion 10 (capacity monotonicity sweep)",
        mono and near0 <= 1e-2 and sw2.monotone_within(1e-3) and near0_m2 <= 1e-2,
        f"monotone over {len(sw.levels)} levels; F(1e-3) errs {near0:.2e} (m=1), "
        f"{near0_m2:.2e} (m=2)",
    )


def test_11_property_suites(tmp_path):
    # capacity scaling / translation covariance
    base = circle_boundary(0.4 - 0.1j, 1.3, 192)
    v0, _ = cap_panel(base, panels=128)
    cov_ok = True
    for lam in (2.0, 1 + 1j):
        v1, _ = cap_panel(Boundary([lam * v for v in base.curves]), panels=128)
        cov_ok &= abs(v1.value - abs(lam) * v0.value) / (abs(lam) * v0.value) <= 1e-6
    v2, _ = cap_panel(Boundary([v + (7 - 2j) for v in base.curves]), panels=128)
    cov_ok &= abs(v2.value - v0.value) <= 1e-8

    # WoS probability sums and conformal invariance
    g = lemniscate.is_good(R_PAIR, 1.0)
    L, part = harmonic.make_arc_partition(g.lemniscate, 4)
    segs = harmonic.component_segments(L, part, 0)
    rep = harmonic.wos(segs, R_PAIR.poles[L.components[0].poles[0]], 50_000, SEED)
    sum_ok = abs(rep.estimates.sum() - 1.0) <= 3 * np.sqrt((rep.std_errors**2).sum()) + 1e-12

    th = 2 * np.pi * np.arange(384) / 384
    circle = np.exp(1j * th)
    labels = np.minimum(3, (4 * np.arange(384) / 384).astype(np.int64))
    s_direct = harmonic.SegmentSet([circle], [labels], 4)
    direct = harmonic.wos(s_direct, 0.25 + 0.3j, 100_000, SEED + 1)
    moved, src = harmonic.moebius_transport([circle], 0.25 + 0.3j, 2.5,
                                            domain_side="bounded")
    via = harmonic.wos(harmonic.SegmentSet(moved, [labels], 4), src, 100_000, SEED + 2)
    sigma = np.sqrt(direct.std_errors**2 + via.std_errors**2)
    conf_ok = bool(np.all(np.abs(direct.estimates - via.estimates) <= 3 * sigma + 2e-3))

    # determinism: byte-identical artifacts under a fixed seed
    d1, d2 = tmp_path / "a", tmp_path / "b"
    for d in (d1, d2):
        rc = main(["hm", "--r", "twopole", "--source", "inf", "--walks", "20000",
                   "--seed", "17", "--out", str(d)])
        assert rc == 0
    det_ok = (d1 / "hm.json").read_bytes() == (d2 / "hm.json").read_bytes()

    _line(
        "criterion 11 (property suites)",
        cov_ok and sum_ok and conf_ok and det_ok,
        f"covariance {cov_ok}, probability-sum {sum_ok}, conformal {conf_ok}, "
        f"deterministic {det_ok}",
    )
