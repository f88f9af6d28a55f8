import numpy as np
import pytest

from lemnicap import lemniscate as lem
from lemnicap._geom import arclengths, signed_area
from lemnicap.errors import LevelNearCriticalValue, OnBoundary, WindowTooSmall
from lemnicap.ratfunc import RationalFunction, critical_data

R_DISK = RationalFunction([1.0], [2.0])
R_PAIR = RationalFunction([2.0, -2.0], [1.0, 1.0])


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
        if dist.min() > 0.8:
            break
    residues = rng.uniform(0.3, 1.0, d) * np.exp(2j * np.pi * rng.random(d))
    return RationalFunction(poles, residues)


class TestTrace:
    def test_circle(self):
        L = lem.trace(R_DISK, 1.0)
        assert len(L.curves) == 1
        per = arclengths(L.curves[0])[-1]
        assert abs(per - 4 * np.pi) / (4 * np.pi) < 1e-3

    def test_level_accuracy(self):
        L = lem.trace(R_PAIR, 1.0)
        for v in L.curves:
            moduli = np.abs(R_PAIR.eval(v, check=False))
            assert np.max(np.abs(moduli - 1.0)) <= 1e-4

    def test_two_components_at_1(self):
        L = lem.trace(R_PAIR, 1.0)
        assert L.component_count == 2
        assert sorted(sum(L.pole_assignment.values(), [])) == [0, 1]

    def test_merged_below_critical(self):
        L = lem.trace(R_PAIR, 0.4)
        assert L.component_count == 1
        assert sorted(L.components[0].poles) == [0, 1]

    def test_refuses_critical_level(self):
        with pytest.raises(LevelNearCriticalValue):
            lem.trace(R_PAIR, 0.5)

    def test_explicit_window_too_small(self):
        with pytest.raises(WindowTooSmall):
            lem.trace(R_DISK, 1.0, window=(0.0, 2.0, -1.0, 1.0))

    def test_explicit_window_ok(self):
        L = lem.trace(R_DISK, 1.0, window=(-2.0, 4.0, -3.0, 3.0), cells=256)
        assert len(L.curves) == 1

    def test_area_monotone_in_level(self):
        areas = []
        for t in (0.3, 0.6, 0.8, 1.2, 2.0):
            areas.append(lem.trace(R_PAIR, t).enclosed_area())
        assert all(a1 >= a2 - 1e-6 for a1, a2 in zip(areas, areas[1:]))

    def test_resolution_stability(self):
        l1 = lem.trace(R_PAIR, 1.0, cells=256)
        l2 = lem.trace(R_PAIR, 1.0, cells=512)
        p1 = sum(arclengths(v)[-1] for v in l1.curves)
        p2 = sum(arclengths(v)[-1] for v in l2.curves)
        assert abs(p1 - p2) / p2 < 5e-3

    def test_orientation(self):
        L = lem.trace(R_PAIR, 0.4)
        for i, v in enumerate(L.curves):
            s = signed_area(v)
            if L.depths[i] % 2 == 0:
                assert s > 0
            else:
                assert s < 0


class TestGoodness:
    def test_pair_good_at_1(self):
        g = lem.is_good(R_PAIR, 1.0)
        assert g.is_good and g.component_count == 2
        assert not g.offending_critical_points

    def test_pair_bad_at_04(self):
        g = lem.is_good(R_PAIR, 0.4)
        assert not g.is_good
        assert len(g.offending_critical_points) == 2
        mods = sorted(m for _, m in g.offending_critical_points)
        assert mods == pytest.approx([0.5, 0.5], abs=1e-9)

    def test_counterexample_good(self):
        R = counterexample(1.0, 0.75, 1e4)
        g = lem.is_good(R, 1.0)
        assert g.is_good and g.component_count == 3

    def test_topology_matches_criterion(self):
        rng = np.random.default_rng(2024)
        checked = 0
        while checked < 200:
            d = int(rng.integers(2, 5))
            R = random_rational(rng, d)
            mods = critical_data(R).moduli
            t = float(rng.uniform(0.2, 1.5))
            if len(mods) and np.min(np.abs(mods - t)) < 1e-3 * t:
                continue
            L = lem.trace(R, t, cells=256)
            criterion = bool(np.all(mods < t))
            assert (L.component_count == d) == criterion, (
                f"d={d} t={t} mods={mods} comps={L.component_count}"
            )
            checked += 1


class TestContainment:
    def test_point_queries(self):
        L = lem.trace(R_DISK, 1.0)
        assert lem.contains_point(L, 1.0) == 0
        assert lem.contains_point(L, 10.0) is None

    def test_distinct_components(self):
        L = lem.trace(R_PAIR, 1.0)
        c1 = lem.contains_point(L, 2.0)
        c2 = lem.contains_point(L, -2.0)
        assert c1 is not None and c2 is not None and c1 != c2

    def test_on_boundary(self):
        L = lem.trace(R_DISK, 1.0)
        z = L.curves[0][0]
        with pytest.raises(OnBoundary):
            lem.contains_point(L, z)

    def test_segment_inside(self):
        R = RationalFunction([0.0], [1.0])
        L = lem.trace(R, 1.0)
        assert lem.contains_segment(L, -0.5, 0.5)
        assert not lem.contains_segment(L, 0.0, 2.0)

    def test_counterexample_interval(self):
        p = 1e4
        R = counterexample(1.0, 0.75, p)
        L = lem.trace(R, 1.0)
        assert lem.contains_segment(L, p, p + p**0.25 / 2)


class TestExport:
    def test_svg_and_json(self, tmp_path):
        L = lem.trace(R_PAIR, 1.0)
        path = tmp_path / "lem.svg"
        lem.export_svg(L, path, R=R_PAIR)
        text = path.read_text()
        assert text.startswith("<svg") and "polygon" in text
        obj = L.to_json_obj()
        assert obj["level"] == 1.0
        assert len(obj["curves"]) == 2
