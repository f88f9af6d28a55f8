"""Capacity inequality verifiers for good rational functions.

Covers the per-component lower bound cap(K_i) >= |a_i|, the whole-lemniscate
product lower bound, the injectivity-radius upper bound with its explicit
constant r^6 / ((r^2-1)(r-1)^4), the O(eps) decay of a small added residue,
and the degree-3 family with unbounded cap(K_i)/|a_i|.

Every capacity is computed by the panel method and cross-checked against the
Leja estimate; disagreement beyond 2% aborts with UnderResolved instead of
reporting a spurious violation.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import lemniscate as lem
from .capacity import Boundary, cap_fekete, cap_panel
from .errors import (
    LevelNearCriticalValue,
    NoRadiusFound,
    NotGood,
    NotGoodAtEpsilon,
    OnBoundary,
    TraceFailure,
    UnderResolved,
    WindowTooSmall,
)
from .ratfunc import RationalFunction, critical_data

METHOD_AGREEMENT_TOL = 0.02


def capacity_of(curves, panels: int = 256, fekete_n: int = 128,
                crosscheck: bool = True):
    """Panel capacity of a list of closed curves with a Leja cross-check.

    Returns (value, error_indicator)."""
    boundary = Boundary(list(curves))
    est, _ = cap_panel(boundary, panels=panels)
    if crosscheck:
        fek = cap_fekete(boundary, n=fekete_n)
        rel = abs(est.value - fek.value) / est.value
        if rel > METHOD_AGREEMENT_TOL:
            raise UnderResolved(
                f"PANEL {est.value:.6g} vs FEKETE {fek.value:.6g}: {rel:.2%} apart"
            )
    return est.value, est.error_indicator


def upper_bound_constant(r: float) -> float:
    """c(r) = r^6 / ((r^2 - 1)(r - 1)^4), the distortion constant."""
    if not r > 1:
        raise ValueError("r must exceed 1")
    return r**6 / ((r**2 - 1) * (r - 1) ** 4)


@dataclass(frozen=True)
class ComponentBound:
    index: int
    cap: float
    residue_modulus: float
    ratio: float
    lower_ok: bool
    margin: float


@dataclass(frozen=True)
class BoundsReport:
    per_component: list
    cap_whole: float
    product_bound: float
    whole_ok: bool
    whole_margin: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.whole_ok and all(c.lower_ok for c in self.per_component)

    def csv_rows(self):
        rows = [
            ["kind", "index", "cap", "reference", "ratio", "ok", "margin"]
        ]
        for c in self.per_component:
            rows.append(
                ["component", c.index, f"{c.cap:.8g}", f"{c.residue_modulus:.8g}",
                 f"{c.ratio:.8g}", int(c.lower_ok), f"{c.margin:.3g}"]
            )
        rows.append(
            ["whole", "", f"{self.cap_whole:.8g}", f"{self.product_bound:.8g}",
             f"{self.cap_whole / self.product_bound:.8g}", int(self.whole_ok),
             f"{self.whole_margin:.3g}"]
        )
        return rows


def product_lower_bound(R: RationalFunction) -> float:
    """[prod_{i != j} |p_i - p_j| * prod_i |a_i|]^(1/d^2)."""
    d = R.degree
    log_sum = float(np.sum(np.log(np.abs(R.residues))))
    if d > 1:
        diff = np.abs(R.poles[:, None] - R.poles[None, :])
        np.fill_diagonal(diff, 1.0)
        log_sum += float(np.sum(np.log(diff)))
    return float(np.exp(log_sum / d**2))


def verify_lower_bounds(R: RationalFunction, panels: int = 256,
                        cells: int = 512, tol_abs: float = 1e-3,
                        crosscheck: bool = True,
                        goodness=None) -> BoundsReport:
    """Check cap(K_i) >= |a_i| per component and the whole-set product bound."""
    g = goodness if goodness is not None else lem.is_good(R, 1.0, cells=cells)
    if not g.is_good:
        raise NotGood("R is not d-good at level 1")
    L = g.lemniscate

    per = []
    for comp in L.components:
        i = comp.poles[0]
        cap_i, err = capacity_of([L.curves[comp.outer]], panels=panels,
                                 crosscheck=crosscheck)
        ai = float(np.abs(R.residues[i]))
        tol = max(tol_abs, 3.0 * err)
        margin = cap_i - ai
        per.append(
            ComponentBound(
                index=i, cap=cap_i, residue_modulus=ai, ratio=cap_i / ai,
                lower_ok=margin >= -tol, margin=margin,
            )
        )
    per.sort(key=lambda c: c.index)

    outer = L.outer_curves()
    cap_k, err_k = capacity_of(outer, panels=max(panels, 128 * len(outer)),
                               crosscheck=crosscheck)
    bound = product_lower_bound(R)
    tol_k = max(tol_abs, 3.0 * err_k)
    return BoundsReport(
        per_component=per,
        cap_whole=cap_k,
        product_bound=bound,
        whole_ok=cap_k - bound >= -tol_k,
        whole_margin=cap_k - bound,
        tolerance=max(tol_abs, tol_k),
    )


@dataclass(frozen=True)
class InjectivityCertificate:
    """Largest certified r: the component of {|R| >= (1+margin)/r} around
    p_i holds exactly one pole and no finite critical point."""

    index: int
    r_star: float
    constant: float
    margin: float


def _component_clean(R, idx, level, cells):
    """Trace level set; True when the component at pole idx has one pole and
    no finite critical point inside.  Levels too close to a critical modulus
    (fragile topology) and failed traces count as dirty: conservative."""
    mods = critical_data(R).moduli
    if len(mods) and float(np.min(np.abs(mods - level))) < 2e-3 * level:
        return False
    try:
        L = lem.trace(R, level, cells=cells)
    except (LevelNearCriticalValue, TraceFailure, WindowTooSmall):
        return False
    comp_of_pole = None
    for cid, comp in enumerate(L.components):
        if idx in comp.poles:
            comp_of_pole = cid
            if len(comp.poles) != 1:
                return False
    if comp_of_pole is None:
        return False
    for c in critical_data(R).points:
        try:
            if lem.contains_point(L, c) == comp_of_pole:
                return False
        except OnBoundary:
            return False
    return True


def certify_injectivity_radius(R: RationalFunction, index: int,
                               margin: float = 0.01, r_max: float = 64.0,
                               grid_points: int = 40, cells: int = 384,
                               cheap_only: bool = False) -> InjectivityCertificate:
    """Largest r > 1 (on a conservative search grid) such that the component
    of {|R| >= (1+margin)/r} containing p_index is a one-pole,
    critical-point-free neighborhood of K_index.

    Levels above every critical modulus are provably clean (no tracing
    needed); beyond that each candidate is checked on a traced level set.
    cheap_only restricts to the provable regime (fast, conservative).
    """
    cd = critical_data(R)
    maxcrit = float(cd.moduli.max()) if len(cd.points) else 0.0

    def clean(r):
        level = (1.0 + margin) / r
        if level > maxcrit * (1.0 + 1e-9):
            return True
        if cheap_only:
            return False
        return _component_clean(R, index, level, cells)

    grid = np.geomspace(1.0 + 1e-3, r_max, grid_points)
    last_pass = None
    first_fail = None
    for r in grid:
        if clean(float(r)):
            last_pass = float(r)
        else:
            first_fail = float(r)
            break
    if last_pass is None:
        raise NoRadiusFound(f"no injectivity radius certified for component {index}")
    if first_fail is not None:
        lo, hi = last_pass, first_fail
        for _ in range(8):
            mid = float(np.sqrt(lo * hi))
            if clean(mid):
                lo = mid
            else:
                hi = mid
        last_pass = lo
    return InjectivityCertificate(
        index=index,
        r_star=last_pass,
        constant=upper_bound_constant(last_pass),
        margin=margin,
    )


@dataclass(frozen=True)
class UpperBoundReport:
    index: int
    cap: float
    residue_modulus: float
    r_star: float
    constant: float
    bound: float
    slack: float

    @property
    def passed(self) -> bool:
        return self.slack >= 0


def verify_upper_bound(R: RationalFunction, index: int,
                       certificate: InjectivityCertificate = None,
                       panels: int = 256, cells: int = 512,
                       goodness=None) -> UpperBoundReport:
    """Check cap(K_index) <= c(r_star) |a_index| for the certified radius."""
    cert = certificate or certify_injectivity_radius(R, index)
    g = goodness if goodness is not None else lem.is_good(R, 1.0, cells=cells)
    if not g.is_good:
        raise NotGood("R is not d-good at level 1")
    L = g.lemniscate
    comp = next(c for c in L.components if index in c.poles)
    cap_i, _err = capacity_of([L.curves[comp.outer]], panels=panels)
    ai = float(np.abs(R.residues[index]))
    bound = cert.constant * ai
    return UpperBoundReport(
        index=index, cap=cap_i, residue_modulus=ai, r_star=cert.r_star,
        constant=cert.constant, bound=bound, slack=bound - cap_i,
    )


def perturbed(R: RationalFunction, p: complex, eps: float) -> RationalFunction:
    """R + eps / (z - p)."""
    return RationalFunction(
        np.concatenate([R.poles, [complex(p)]]),
        np.concatenate([R.residues, [complex(eps)]]),
    )


@dataclass(frozen=True)
class EpsilonRow:
    eps: float
    cap: float
    ratio: float
    r_star: float
    constant: float


@dataclass(frozen=True)
class EpsilonSweepReport:
    rows: list
    ratio_spread: float

    @property
    def bound_ok(self) -> bool:
        return all(r.ratio <= r.constant for r in self.rows)

    def csv_rows(self):
        out = [["eps", "cap", "cap_over_eps", "r_star", "constant"]]
        for r in self.rows:
            out.append(
                [f"{r.eps:g}", f"{r.cap:.8g}", f"{r.ratio:.8g}",
                 f"{r.r_star:.6g}", f"{r.constant:.6g}"]
            )
        return out


def epsilon_sweep(R: RationalFunction, p: complex, eps_list,
                  panels: int = 256, cells: int = 512) -> EpsilonSweepReport:
    """cap(K_eps) for R + eps/(z-p): the cap/eps column stays bounded and
    below the certified distortion constant of the perturbed component."""
    base = lem.is_good(R, 1.0, cells=cells)
    if not base.is_good:
        raise NotGood("base function is not d-good at level 1")
    if abs(R.eval(p)) >= 1.0:
        raise ValueError("p must satisfy |R(p)| < 1")
    d = R.degree
    rows = []
    for eps in eps_list:
        R_eps = perturbed(R, p, float(eps))
        g = lem.is_good(R_eps, 1.0, cells=cells)
        if not g.is_good:
            raise NotGoodAtEpsilon(f"R_eps loses goodness at eps={eps:g}")
        L = g.lemniscate
        comp = next(c for c in L.components if d in c.poles)
        cap_e, _err = capacity_of([L.curves[comp.outer]], panels=panels)
        cert = certify_injectivity_radius(R_eps, d)
        rows.append(
            EpsilonRow(
                eps=float(eps), cap=cap_e, ratio=cap_e / float(eps),
                r_star=cert.r_star, constant=cert.constant,
            )
        )
    ratios = [r.ratio for r in rows]
    spread = max(ratios) / min(ratios) - 1.0
    return EpsilonSweepReport(rows=rows, ratio_spread=spread)


@dataclass(frozen=True)
class CounterexampleRow:
    p: float
    good: bool
    crit_rel_err: float
    segment_contained: bool
    cap: float
    lower_bound: float
    ratio_over_residue: float


@dataclass(frozen=True)
class CounterexampleReport:
    a: float
    eta: float
    rows: list

    @property
    def passed(self) -> bool:
        ratios = [r.ratio_over_residue for r in self.rows]
        errs = [r.crit_rel_err for r in self.rows]
        return (
            all(r.good for r in self.rows)
            and all(r.segment_contained for r in self.rows)
            and all(r.cap >= r.lower_bound for r in self.rows)
            and all(b > a for a, b in zip(ratios, ratios[1:]))
            and all(b < a for a, b in zip(errs, errs[1:]))
        )

    def csv_rows(self):
        out = [["p", "good", "crit_rel_err", "segment", "cap", "lower_bound",
                "cap_over_residue"]]
        for r in self.rows:
            out.append(
                [f"{r.p:g}", int(r.good), f"{r.crit_rel_err:.4g}",
                 int(r.segment_contained), f"{r.cap:.8g}",
                 f"{r.lower_bound:.8g}", f"{r.ratio_over_residue:.8g}"]
            )
        return out


def counterexample_function(a: float, eta: float, p: float) -> RationalFunction:
    """Degree-3 family with residues a at p and p - p^eta at +-ip."""
    if not (a > 0 and 2.0 / 3.0 < eta < 1.0 and p > 1.0):
        raise ValueError("need a > 0, eta in (2/3, 1), p > 1")
    b = p - p**eta
    return RationalFunction([p, 1j * p, -1j * p], [a, b, b])


def counterexample_experiment(a: float, eta: float, p_list,
                              panels: int = 256, cells: int = 512) -> CounterexampleReport:
    """For each p: goodness, critical-point asymptotics, interval containment
    and the capacity lower bound a p^(1-eta)/8 for the component at p."""
    rows = []
    for p in p_list:
        p = float(p)
        R = counterexample_function(a, eta, p)
        cd = critical_data(R)
        predicted = np.concatenate(
            [[-p], p - a ** (1 / 3) * p ** (2 / 3) * np.exp(2j * np.pi * np.arange(3) / 3)]
        )
        rel_err = max(
            float(np.min(np.abs(cd.points - q)) / abs(q)) for q in predicted
        )
        g = lem.is_good(R, 1.0, cells=cells)
        L = g.lemniscate
        seg_ok = False
        cap_p = float("nan")
        if g.is_good:
            seg_ok = lem.contains_segment(L, p, p + a * p ** (1 - eta) / 2)
            comp = next(c for c in L.components if 0 in c.poles)
            cap_p, _ = capacity_of([L.curves[comp.outer]], panels=panels)
        rows.append(
            CounterexampleRow(
                p=p, good=g.is_good, crit_rel_err=rel_err,
                segment_contained=seg_ok, cap=cap_p,
                lower_bound=a * p ** (1 - eta) / 8.0,
                ratio_over_residue=cap_p / a,
            )
        )
    return CounterexampleReport(a=a, eta=eta, rows=rows)


def random_good_rational(d: int, rng, box: float = 10.0,
                         safety: float = 0.7) -> RationalFunction:
    """Random d-good function: poles in a box x box square, random residues
    rescaled so every critical modulus is safety * 1 at most.

    Scaling all residues by s scales every critical value by s and leaves
    critical points fixed, so goodness at level 1 has a closed-form scale.
    """
    half = box / 2.0
    while True:
        poles = rng.uniform(-half, half, d) + 1j * rng.uniform(-half, half, d)
        if d == 1:
            break
        dist = np.abs(poles[:, None] - poles[None, :])
        np.fill_diagonal(dist, np.inf)
        if dist.min() > 0.08 * box:
            break
    residues = rng.uniform(0.3, 1.0, d) * np.exp(2j * np.pi * rng.random(d))
    R = RationalFunction(poles, residues)
    if d == 1:
        return R
    maxcrit = float(critical_data(R).moduli.max())
    return R.scaled(safety / maxcrit)
