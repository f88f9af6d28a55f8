import numpy as np
import pytest

from lemnicap.errors import DegenerateInput, PoleProximity
from lemnicap.ratfunc import (
    Polynomial,
    RationalFunction,
    as_fraction,
    critical_data,
    leading_coefficient_at_infinity,
    poly_roots,
    zeros,
)

R_SINGLE = RationalFunction([0.0], [1.0])
R_PAIR = RationalFunction([2.0, -2.0], [1.0, 1.0])
R_ODD = RationalFunction([1.0, -1.0], [1.0, -1.0])


def counterexample(a, eta, p):
    b = p - p**eta
    return RationalFunction([p, 1j * p, -1j * p], [a, b, b])


def random_rational(rng, d):
    while True:
        poles = rng.uniform(-5, 5, d) + 1j * rng.uniform(-5, 5, d)
        if d == 1:
            break
        dist = np.abs(poles[:, None] - poles[None, :])
        np.fill_diagonal(dist, np.inf)
        if dist.min() > 0.5:
            break
    residues = rng.uniform(0.3, 2.0, d) * np.exp(2j * np.pi * rng.random(d))
    return RationalFunction(poles, residues)


class TestEval:
    def test_single_pole(self):
        assert R_SINGLE.eval(2.0) == pytest.approx(0.5)

    def test_symmetric_cancellation(self):
        assert R_PAIR.eval(0.0) == pytest.approx(0.0)

    def test_hand_value(self):
        # 1/(2i-2) + 1/(2i+2) = -0.5i
        v = R_PAIR.eval(2j)
        assert v == pytest.approx(-0.5j)
        assert abs(v) == pytest.approx(0.5)

    def test_pole_guard(self):
        with pytest.raises(PoleProximity):
            R_SINGLE.eval(1e-14)

    def test_invalid_inputs(self):
        with pytest.raises(DegenerateInput):
            RationalFunction([1.0, 1.0], [1.0, 1.0])
        with pytest.raises(DegenerateInput):
            RationalFunction([1.0], [0.0])

    def test_json_roundtrip(self):
        s = R_PAIR.to_json()
        back = RationalFunction.from_json(s)
        assert np.allclose(back.poles, R_PAIR.poles)
        assert np.allclose(back.residues, R_PAIR.residues)


class TestFraction:
    def test_single(self):
        num, den = as_fraction(R_SINGLE)
        assert np.allclose(num.coeffs, [1.0])
        assert np.allclose(den.coeffs, [0.0, 1.0])

    def test_pair(self):
        num, den = as_fraction(R_PAIR)
        assert np.allclose(num.coeffs, [0.0, 2.0])
        assert np.allclose(den.coeffs, [-4.0, 0.0, 1.0])

    def test_odd(self):
        num, den = as_fraction(R_ODD)
        assert np.allclose(num.coeffs, [2.0])
        assert np.allclose(den.coeffs, [-1.0, 0.0, 1.0])

    def test_consistency_random(self):
        rng = np.random.default_rng(7)
        for _ in range(40):
            d = rng.integers(1, 7)
            R = random_rational(rng, d)
            num, den = as_fraction(R)
            z = rng.uniform(-8, 8, 30) + 1j * rng.uniform(-8, 8, 30)
            far = np.abs(z[:, None] - R.poles).min(axis=1) > 0.05
            z = z[far]
            lhs = R.eval(z, check=False)
            rhs = num(z) / den(z)
            assert np.max(np.abs(lhs - rhs) / (1 + np.abs(lhs))) < 1e-10


class TestRoots:
    def test_quadratic(self):
        r = poly_roots(Polynomial([-1.0, 0.0, 1.0]))
        assert sorted(np.round(r.real, 8)) == [-1.0, 1.0]

    def test_cube_roots_of_unity(self):
        r = poly_roots(Polynomial([-1.0, 0.0, 0.0, 1.0]))
        assert np.allclose(sorted(np.abs(r)), [1, 1, 1])
        assert np.allclose(np.sort_complex(r**3), [1, 1, 1], atol=1e-8)

    def test_double_root(self):
        # (z-3)^2 (z+1) = z^3 - 5 z^2 + 3 z + 9
        r = poly_roots(Polynomial([9.0, 3.0, -5.0, 1.0]))
        r = np.sort_complex(r)
        assert abs(r[0] + 1) < 1e-6
        assert abs(r[1] - 3) < 1e-6
        assert abs(r[2] - 3) < 1e-6

    def test_residual_invariant_random(self):
        rng = np.random.default_rng(3)
        for _ in range(50):
            deg = int(rng.integers(2, 12))
            c = rng.standard_normal(deg + 1) + 1j * rng.standard_normal(deg + 1)
            P = Polynomial(c)
            roots = poly_roots(P)
            scale = np.abs(c).max()
            res = np.abs(P(roots))
            bound = 1e-8 * scale * np.maximum(1.0, np.abs(roots)) ** deg
            assert np.all(res <= bound)

    def test_wide_dynamic_range(self):
        # quartic with roots near -1e4 and three near 1e4 - 464*omega
        p = 1e4
        R = counterexample(1.0, 0.75, p)
        cd = critical_data(R)
        assert len(cd.points) == 4
        near_minus = np.abs(cd.points + p) < 50
        assert near_minus.sum() == 1
        others = cd.points[~near_minus]
        predicted = p - p ** (2 / 3) * np.exp(2j * np.pi * np.arange(3) / 3)
        for pr in predicted:
            # next-order correction is O(p^((eta+1)/3)), a few percent here
            assert np.min(np.abs(others - pr)) < 0.15 * p ** (2 / 3)


class TestZeros:
    def test_pair(self):
        finite, m = zeros(R_PAIR)
        assert m == 1
        assert len(finite) == 1
        assert abs(finite[0]) < 1e-10

    def test_odd(self):
        finite, m = zeros(R_ODD)
        assert m == 2
        assert len(finite) == 0

    def test_single(self):
        finite, m = zeros(RationalFunction([0.0], [5.0]))
        assert m == 1
        assert len(finite) == 0

    def test_degree_count_random(self):
        rng = np.random.default_rng(11)
        for _ in range(1000):
            d = int(rng.integers(1, 9))
            R = random_rational(rng, d)
            finite, m = zeros(R)
            assert len(finite) + m == d


class TestCriticalData:
    def test_single_pole_empty(self):
        cd = critical_data(R_SINGLE)
        assert len(cd.points) == 0

    def test_pair(self):
        cd = critical_data(R_PAIR)
        pts = np.sort_complex(cd.points)
        assert np.allclose(pts, [-2j, 2j], atol=1e-8)
        assert np.allclose(cd.moduli, [0.5, 0.5], atol=1e-10)

    def test_count_random(self):
        rng = np.random.default_rng(5)
        for _ in range(60):
            d = int(rng.integers(2, 7))
            R = random_rational(rng, d)
            cd = critical_data(R)
            assert len(cd.points) == 2 * d - 2

    def test_moebius_covariance(self):
        rng = np.random.default_rng(9)
        for _ in range(20):
            d = int(rng.integers(2, 6))
            R = random_rational(rng, d)
            lam = 0.5 + 1.5 * rng.random() + 1j * rng.standard_normal()
            b = rng.standard_normal() + 1j * rng.standard_normal()
            # S(z) = R(lam z + b) has poles (p-b)/lam, residues a/lam
            S = RationalFunction((R.poles - b) / lam, R.residues / lam)
            cs = np.sort_complex(critical_data(S).points)
            cr = np.sort_complex((critical_data(R).points - b) / lam)
            assert np.max(np.abs(cs - cr)) < 1e-8 * (1 + np.abs(cr).max())


class TestLeadingCoefficient:
    def test_pair(self):
        m, c = leading_coefficient_at_infinity(R_PAIR)
        assert m == 1 and c == pytest.approx(2.0)

    def test_odd(self):
        m, c = leading_coefficient_at_infinity(R_ODD)
        assert m == 2 and c == pytest.approx(2.0)

    def test_single(self):
        m, c = leading_coefficient_at_infinity(RationalFunction([0.0], [5.0]))
        assert m == 1 and c == pytest.approx(5.0)

    def test_asymptotics(self):
        rng = np.random.default_rng(13)
        R = random_rational(rng, 4)
        m, c = leading_coefficient_at_infinity(R)
        z = 1e7 * np.exp(1j * 0.7)
        assert R.eval(z, check=False) * z**m == pytest.approx(c, rel=1e-5)
