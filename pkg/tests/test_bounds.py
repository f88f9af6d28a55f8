import numpy as np
import pytest

from lemnicap import bounds
from lemnicap.errors import NotGoodAtEpsilon
from lemnicap.ratfunc import RationalFunction, critical_data

R_PAIR = RationalFunction([2.0, -2.0], [1.0, 1.0])


class TestLowerBounds:
    def test_equality_case_d1(self):
        R = RationalFunction([0.0], [3.0])
        rep = bounds.verify_lower_bounds(R)
        assert rep.passed
        c = rep.per_component[0]
        assert c.cap == pytest.approx(3.0, abs=1e-3)
        assert rep.product_bound == pytest.approx(3.0)

    def test_two_pole(self):
        rep = bounds.verify_lower_bounds(R_PAIR)
        assert rep.passed
        for c in rep.per_component:
            assert c.cap >= c.residue_modulus - 1e-3
        assert rep.product_bound == pytest.approx(2.0)
        assert rep.cap_whole >= 2.0 - 1e-3

    def test_rescaled_level_form(self):
        # R/t is good for t above the critical moduli; t*cap(K_{i,t}) >= |a_i|
        from lemnicap import lemniscate as lem

        for t in (2.0, 4.0):
            scaled = R_PAIR.scaled(1.0 / t)
            rep = bounds.verify_lower_bounds(scaled)
            # components of {|R| >= t} scaled: cap(K_{i,t}) = cap_i of scaled
            for c in rep.per_component:
                assert t * c.cap >= np.abs(R_PAIR.residues[c.index]) - 1e-3

    def test_random_family_small(self):
        rng = np.random.default_rng(31)
        for _ in range(10):
            d = int(rng.integers(1, 5))
            R = bounds.random_good_rational(d, rng)
            rep = bounds.verify_lower_bounds(R, panels=192, cells=384)
            for c in rep.per_component:
                assert c.margin >= -1e-3
            assert rep.whole_margin >= -1e-3

    def test_scaling_consistency(self):
        rep0 = bounds.verify_lower_bounds(R_PAIR)
        lam = 2.0
        # z -> R(lam z): poles p/lam, residues a/lam
        S = RationalFunction(R_PAIR.poles / lam, R_PAIR.residues / lam)
        rep1 = bounds.verify_lower_bounds(S)
        for c0, c1 in zip(rep0.per_component, rep1.per_component):
            assert c1.cap == pytest.approx(c0.cap / lam, rel=1e-3)
            assert c1.ratio == pytest.approx(c0.ratio, rel=1e-3)


class TestGoodnessGenerator:
    def test_generated_functions_are_good(self):
        from lemnicap import lemniscate as lem

        rng = np.random.default_rng(44)
        for _ in range(5):
            d = int(rng.integers(2, 5))
            R = bounds.random_good_rational(d, rng)
            mods = critical_data(R).moduli
            assert np.all(mods < 1.0)
            assert lem.is_good(R, 1.0, cells=384).is_good


class TestInjectivity:
    def test_constant_value(self):
        assert bounds.upper_bound_constant(2.0) == 64 / 3

    def test_constant_diverges_near_1(self):
        assert bounds.upper_bound_constant(1.0001) > 1e12

    def test_two_pole_radius(self):
        cert = bounds.certify_injectivity_radius(R_PAIR, 0)
        # merging happens at level 0.5, i.e. r about 2 (up to the margin)
        assert 1.85 <= cert.r_star <= 2.1

    def test_d1_capped(self):
        R = RationalFunction([0.0], [1.0])
        cert = bounds.certify_injectivity_radius(R, 0)
        assert cert.r_star == pytest.approx(64.0)

    def test_upper_bound_holds(self):
        for i in (0, 1):
            rep = bounds.verify_upper_bound(R_PAIR, i)
            assert rep.passed
            assert rep.cap <= rep.bound

    def test_cheap_only_conservative(self):
        full = bounds.certify_injectivity_radius(R_PAIR, 0)
        cheap = bounds.certify_injectivity_radius(R_PAIR, 0, cheap_only=True)
        assert cheap.r_star <= full.r_star + 1e-9


class TestEpsilonSweep:
    def test_o_eps_decay(self):
        R = RationalFunction([3.0], [1.0])
        rep = bounds.epsilon_sweep(R, 0.0, [1e-1, 1e-2, 1e-3])
        assert rep.ratio_spread < 0.2
        assert rep.bound_ok
        # the limiting ratio is the capacity of the Moebius image circle
        assert rep.rows[-1].ratio == pytest.approx(9 / 8, abs=5e-3)

    def test_pure_disk_sanity(self):
        # single pole with residue eps: the component is the disk |z-p| <= eps
        for eps in (0.1, 0.01):
            R = RationalFunction([0.0], [eps])
            rep = bounds.verify_lower_bounds(R)
            assert rep.per_component[0].cap == pytest.approx(eps, rel=1e-4)

    def test_too_large_eps_rejected(self):
        R = RationalFunction([3.0], [1.0])
        with pytest.raises(NotGoodAtEpsilon):
            bounds.epsilon_sweep(R, 0.0, [2.5])


class TestCounterexample:
    def test_single_p(self):
        rep = bounds.counterexample_experiment(1.0, 0.75, [100.0])
        row = rep.rows[0]
        assert row.good and row.segment_contained
        assert row.cap >= row.lower_bound
        assert row.ratio_over_residue > 1.0

    def test_invalid_parameters(self):
        with pytest.raises(ValueError):
            bounds.counterexample_function(1.0, 0.5, 100.0)
        with pytest.raises(ValueError):
            bounds.counterexample_function(-1.0, 0.75, 100.0)
