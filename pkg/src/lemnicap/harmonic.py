"""Harmonic measure on polyline-bounded domains via walk-on-spheres.

The walker jumps to a uniform point on the largest disk around the current
position that avoids the boundary and absorbs within eps of it, tallying the
arc containing the nearest boundary point.  Distance queries go through a
uniform-grid acceleration structure: per-cell exact near-lists plus a
conservative lower bound for everything else (a valid, occasionally loose,
jump radius; exact near the boundary where absorption decisions happen).

Unbounded domains (the lemniscate exterior seen from infinity or from a
zero) are transported to bounded ones by z -> 1/(z - pivot) with the pivot
in a complementary component; harmonic measure pulls back arc-by-arc.

Randomness is a splitmix64 stream seeded per run, so fixed seeds give
bit-identical reports.
"""
from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from . import _geom
from . import lemniscate as lem
from .capacity import DiscreteMeasure, mutual_energy
from .errors import (
    CriticalValueOnCircle,
    NonAbsorbingWalk,
    NotGood,
    PivotInsideDomain,
    SourceOutsideDomain,
)
from .ratfunc import RationalFunction, critical_data, zeros

DEFAULT_SEED = 0xC0FFEE
LOST_WALK_FRACTION = 1e-3


# ---------------------------------------------------------------------------
# numba kernel


@njit(cache=True)
def _wos_kernel(ax, ay, bx, by, seg_arc, n_arcs, gx0, gy0, inv_cw, inv_ch,
                gnx, gny, cell_start, cell_items, far_lb, sx, sy, eps,
                max_steps, n_walks, seed):
    hits = np.zeros(n_arcs, dtype=np.int64)
    pxs = np.empty(n_walks, dtype=np.float64)
    pys = np.empty(n_walks, dtype=np.float64)
    lost = 0
    absorbed = 0
    state = np.uint64(seed) ^ np.uint64(0x9E3779B97F4A7C15)
    for _ in range(4):
        state = state + np.uint64(0x9E3779B97F4A7C15)
    for _w in range(n_walks):
        x = sx
        y = sy
        done = False
        for _step in range(max_steps):
            ci = int((x - gx0) * inv_cw)
            cj = int((y - gy0) * inv_ch)
            if ci < 0:
                ci = 0
            elif ci >= gnx:
                ci = gnx - 1
            if cj < 0:
                cj = 0
            elif cj >= gny:
                cj = gny - 1
            c = cj * gnx + ci
            best = far_lb[c]
            bestseg = -1
            for k in range(cell_start[c], cell_start[c + 1]):
                s = cell_items[k]
                dx = bx[s] - ax[s]
                dy = by[s] - ay[s]
                wx = x - ax[s]
                wy = y - ay[s]
                den = dx * dx + dy * dy
                if den > 0.0:
                    tp = (wx * dx + wy * dy) / den
                    if tp < 0.0:
                        tp = 0.0
                    elif tp > 1.0:
                        tp = 1.0
                else:
                    tp = 0.0
                ex = wx - tp * dx
                ey = wy - tp * dy
                dist = math.sqrt(ex * ex + ey * ey)
                if dist < best:
                    best = dist
                    bestseg = s
            if best < eps:
                if bestseg >= 0:
                    hits[seg_arc[bestseg]] += 1
                    pxs[absorbed] = x
                    pys[absorbed] = y
                    absorbed += 1
                    done = True
                break
            # splitmix64 step
            state = state + np.uint64(0x9E3779B97F4A7C15)
            z = state
            z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
            z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
            z = z ^ (z >> np.uint64(31))
            u = (z >> np.uint64(11)) * 1.1102230246251565e-16
            ang = 6.283185307179586 * u
            x += best * math.cos(ang)
            y += best * math.sin(ang)
        if not done:
            lost += 1
    return hits, pxs[:absorbed], pys[:absorbed], lost


# ---------------------------------------------------------------------------
# geometry container with the acceleration grid


class SegmentSet:
    """Flattened boundary segments with per-segment arc labels and a
    uniform-grid distance-acceleration structure."""

    def __init__(self, curves, seg_arc_per_curve, n_arcs, grid=96):
        a_list, b_list, label_list = [], [], []
        for v, labels in zip(curves, seg_arc_per_curve):
            aa, bb = _geom.segment_arrays(v, closed=True)
            a_list.append(aa)
            b_list.append(bb)
            label_list.append(np.asarray(labels, dtype=np.int64))
        a = np.concatenate(a_list)
        b = np.concatenate(b_list)
        self.ax, self.ay = a.real.copy(), a.imag.copy()
        self.bx, self.by = b.real.copy(), b.imag.copy()
        self.seg_arc = np.concatenate(label_list)
        self.n_arcs = int(n_arcs)
        self.curves = list(curves)

        allx = np.concatenate([self.ax, self.bx])
        ally = np.concatenate([self.ay, self.by])
        x0, x1 = allx.min(), allx.max()
        y0, y1 = ally.min(), ally.max()
        self.diameter = float(np.hypot(x1 - x0, y1 - y0))
        pad = 0.02 * self.diameter + 1e-300
        x0 -= pad
        x1 += pad
        y0 -= pad
        y1 += pad
        G = int(grid)
        self.gnx = self.gny = G
        self.gx0, self.gy0 = float(x0), float(y0)
        cw = (x1 - x0) / G
        ch = (y1 - y0) / G
        self.inv_cw, self.inv_ch = 1.0 / cw, 1.0 / ch

        mids = 0.5 * (a + b)
        half_len = 0.5 * np.abs(b - a)
        cell = max(cw, ch)
        half_diag = 0.5 * math.hypot(cw, ch)
        near_r = 2.0 * cell

        cx = x0 + cw * (np.arange(G) + 0.5)
        cy = y0 + ch * (np.arange(G) + 0.5)
        CX, CY = np.meshgrid(cx, cy)
        centers = (CX + 1j * CY).ravel()

        items = []
        starts = np.zeros(G * G + 1, dtype=np.int64)
        far_lb = np.empty(G * G, dtype=np.float64)
        chunk = 2048
        for lo in range(0, G * G, chunk):
            hi = min(lo + chunk, G * G)
            dmid = np.abs(centers[lo:hi, None] - mids[None, :]) - half_len[None, :]
            near = dmid <= near_r
            far = np.where(near, np.inf, dmid)
            flb = far.min(axis=1) - half_diag
            far_lb[lo:hi] = np.where(np.isfinite(flb), np.maximum(flb, 0.0), np.inf)
            for c in range(lo, hi):
                idx = np.nonzero(near[c - lo])[0]
                items.append(idx.astype(np.int64))
                starts[c + 1] = starts[c] + len(idx)
        self.cell_start = starts
        self.cell_items = (
            np.concatenate(items) if items else np.zeros(0, dtype=np.int64)
        )
        self.far_lb = far_lb

    def contains(self, z) -> bool:
        """Even-odd containment over all curves (odd parity = inside the
        bounded domain)."""
        parity = 0
        for v in self.curves:
            if _geom.points_in_polygon(np.array([complex(z)]), v)[0]:
                parity ^= 1
        return parity == 1

    def distance(self, z) -> float:
        return float(
            _geom.min_distance_to_curves(np.array([complex(z)]), self.curves)[0]
        )


@dataclass(frozen=True)
class Arc:
    curve: int
    s0: float
    s1: float


@dataclass(frozen=True)
class ArcPartition:
    """Half-open arclength-fraction arcs per curve, plus per-segment labels."""

    arcs: list
    seg_arc: dict  # curve id -> int64 array, one label per segment

    @property
    def n_arcs(self) -> int:
        return len(self.arcs)

    def labels_for(self, curve_ids):
        return [self.seg_arc[c] for c in curve_ids]

    def to_json_obj(self):
        return [[a.curve, a.s0, a.s1] for a in self.arcs]


def make_arc_partition(L: lem.Lemniscate, per_curve: int = 4):
    """Split every curve into equal-arclength arcs.

    Vertices are inserted at the arc boundaries so arcs are exact unions of
    segments; returns the refined lemniscate and the partition.
    """
    new_curves = []
    seg_arc = {}
    arcs = []
    arc_base = 0
    for ci, v in enumerate(L.curves):
        s = _geom.arclengths(v, closed=True)
        total = s[-1]
        targets = total * np.arange(1, per_curve) / per_curve
        ext = np.concatenate([v, v[:1]])
        pts = []
        ti = 0
        for k in range(len(v)):
            pts.append(ext[k])
            while ti < len(targets) and targets[ti] < s[k + 1]:
                if (
                    targets[ti] > s[k] + 1e-12 * total
                    and targets[ti] < s[k + 1] - 1e-12 * total
                ):
                    frac = (targets[ti] - s[k]) / (s[k + 1] - s[k])
                    pts.append(ext[k] + frac * (ext[k + 1] - ext[k]))
                ti += 1
        # labels from segment midpoints
        v2 = np.array(pts, dtype=complex)
        s2 = _geom.arclengths(v2, closed=True)
        mid_s = 0.5 * (s2[:-1] + s2[1:])
        lab2 = np.minimum(
            per_curve - 1, np.searchsorted(targets, mid_s, side="right")
        ).astype(np.int64)
        new_curves.append(v2)
        seg_arc[ci] = lab2 + arc_base
        for k in range(per_curve):
            arcs.append(Arc(ci, k / per_curve, (k + 1) / per_curve))
        arc_base += per_curve
    L2 = dataclasses.replace(L, curves=new_curves)
    return L2, ArcPartition(arcs, seg_arc)


@dataclass(frozen=True)
class HarmonicMeasureReport:
    source: object
    estimates: np.ndarray
    std_errors: np.ndarray
    walks: int
    seed: int
    lost: int
    points: np.ndarray

    def to_json_obj(self):
        src = None if self.source is None else [self.source.real, self.source.imag]
        return {
            "source": src,
            "estimates": list(self.estimates),
            "std_errors": list(self.std_errors),
            "walks": self.walks,
            "seed": self.seed,
            "lost": self.lost,
        }


def wos(segments: SegmentSet, source: complex, walks: int, seed: int = DEFAULT_SEED,
        eps_rel: float = 1e-6, max_steps: int = 40000) -> HarmonicMeasureReport:
    """Walk-on-spheres harmonic measure of the arcs from a source point.

    The domain is the bounded region with odd even-odd parity relative to
    the segment set's curves; source must lie strictly inside.
    """
    source = complex(source)
    eps = eps_rel * segments.diameter
    if not segments.contains(source):
        raise SourceOutsideDomain(f"source {source} not inside the domain")
    if segments.distance(source) <= eps:
        raise SourceOutsideDomain("source within absorption distance of the boundary")
    hits, pxs, pys, lost = _wos_kernel(
        segments.ax, segments.ay, segments.bx, segments.by, segments.seg_arc,
        segments.n_arcs, segments.gx0, segments.gy0, segments.inv_cw,
        segments.inv_ch, segments.gnx, segments.gny, segments.cell_start,
        segments.cell_items, segments.far_lb, source.real, source.imag, eps,
        max_steps, int(walks), np.uint64(seed & 0xFFFFFFFFFFFFFFFF),
    )
    if lost > LOST_WALK_FRACTION * walks:
        raise NonAbsorbingWalk(f"{lost} of {walks} walks exceeded the step cap")
    absorbed = int(hits.sum())
    est = hits / max(absorbed, 1)
    se = np.sqrt(np.maximum(est * (1 - est), 0.0) / max(absorbed, 1))
    return HarmonicMeasureReport(
        source=source,
        estimates=est,
        std_errors=se,
        walks=int(walks),
        seed=int(seed),
        lost=int(lost),
        points=pxs + 1j * pys,
    )


def component_segments(L: lem.Lemniscate, partition: ArcPartition, comp_id: int,
                       grid: int = 96) -> SegmentSet:
    """Segment set of one component's boundary (outer curve plus holes)."""
    comp = L.components[comp_id]
    ids = [comp.outer, *comp.holes]
    return SegmentSet(
        [L.curves[i] for i in ids],
        partition.labels_for(ids),
        partition.n_arcs,
        grid=grid,
    )


def moebius_transport(curves, source, pivot, domain_side="unbounded"):
    """Conjugate a harmonic-measure problem by T(z) = 1/(z - pivot).

    The image problem is bounded whenever the pivot lies strictly outside
    the closure of the domain: in a complementary bounded component when the
    domain is the unbounded side (the main use, with a pole as pivot), or
    anywhere off the closure when the domain is already bounded.  source
    None stands for infinity and maps to 0.  Arc labels carry over
    segment-by-segment since vertices map one-to-one.
    """
    pivot = complex(pivot)
    parity = 0
    for v in curves:
        if _geom.points_in_polygon(np.array([pivot]), v)[0]:
            parity ^= 1
    inside_domain = (parity == 0) if domain_side == "unbounded" else (parity == 1)
    if inside_domain:
        raise PivotInsideDomain("pivot lies in the domain")
    if float(_geom.min_distance_to_curves(np.array([pivot]), curves)[0]) == 0.0:
        raise PivotInsideDomain("pivot on the boundary")
    new_curves = [1.0 / (v - pivot) for v in curves]
    new_source = 0j if source is None else 1.0 / (complex(source) - pivot)
    return new_curves, new_source


def transported_segments(L: lem.Lemniscate, partition: ArcPartition, pivot,
                         grid: int = 96):
    """Transported segment set for the unbounded complement of {|R| >= t}."""
    ids = list(range(len(L.curves)))
    curves = [L.curves[i] for i in ids]
    moved, _ = moebius_transport(curves, None, pivot)
    return SegmentSet(moved, partition.labels_for(ids), partition.n_arcs, grid=grid)


def image_arc_measure(R: RationalFunction, L: lem.Lemniscate,
                      partition: ArcPartition) -> np.ndarray:
    """Normalized image arclength |d arg R| / 2pi of each arc on the circle.

    Summed over a full curve this is the number of enclosed poles (the
    winding count of R along the curve).
    """
    cd = critical_data(R)
    if len(cd.points) and np.any(np.abs(cd.moduli - L.level) <= 1e-6 * L.level):
        raise CriticalValueOnCircle("critical value on the target circle")
    out = np.zeros(partition.n_arcs)
    for ci, v in enumerate(L.curves):
        vals = R.eval(v, check=False) / L.level
        ratio = np.roll(vals, -1) / vals
        darg = np.abs(np.angle(ratio))
        np.add.at(out, partition.seg_arc[ci], darg / (2 * np.pi))
    return out


def poisson_disk_arc_measure(center, radius, source, theta0, theta1):
    """Harmonic measure of a circular arc from a point of a disk (Poisson
    kernel integral; numerical quadrature oracle)."""
    from scipy.integrate import quad

    w = (complex(source) - complex(center)) / radius
    r = abs(w)
    phi = math.atan2(w.imag, w.real)

    def kern(theta):
        return (1 - r * r) / (
            2 * math.pi * (1 - 2 * r * math.cos(theta - phi) + r * r)
        )

    val, _err = quad(kern, theta0, theta1, limit=200)
    return float(val)


# ---------------------------------------------------------------------------
# theorem verifiers


@dataclass(frozen=True)
class ReflectionReport:
    """Per-arc comparison of pole-side measure (A), zero-side measure (B)
    and the image-arclength oracle (C)."""

    arcs: list
    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    sigma: np.ndarray
    walks: int
    seed: int

    @property
    def max_AB(self):
        return float(np.max(np.abs(self.A - self.B)))

    @property
    def max_AC(self):
        return float(np.max(np.abs(self.A - self.C)))

    @property
    def max_BC(self):
        return float(np.max(np.abs(self.B - self.C)))

    def z_scores(self):
        s = np.maximum(self.sigma, 1e-15)
        return {
            "AB": np.abs(self.A - self.B) / s,
            "AC": np.abs(self.A - self.C) / s,
            "BC": np.abs(self.B - self.C) / s,
        }

    @property
    def passed(self) -> bool:
        z = self.z_scores()
        return all(float(np.max(v)) <= 3.0 for v in z.values())

    def to_json_obj(self):
        return {
            "arcs": [[a.curve, a.s0, a.s1] for a in self.arcs],
            "A": list(self.A),
            "B": list(self.B),
            "C": list(self.C),
            "sigma": list(self.sigma),
            "walks": self.walks,
            "seed": self.seed,
            "passed": self.passed,
        }


def _grouped_zeros(R):
    finite, m = zeros(R)
    groups = []
    for z in finite:
        for g in groups:
            if g[0] == z:
                g[1] += 1
                break
        else:
            groups.append([z, 1])
    return groups, m


def verify_reflection(R: RationalFunction, arcs_per_curve: int = 4,
                      walks: int = 100_000, seed: int = DEFAULT_SEED,
                      cells: int = 512, lemniscate=None) -> ReflectionReport:
    """Check sum_i w_{p_i}(E) = sum_j w_{zeta_j}(E) arc-by-arc at level 1.

    A sums walk-on-spheres measures from the poles inside their components;
    B sums measures from the zeros (including infinity, transported); C is
    the exact image-arclength oracle.
    """
    if lemniscate is None:
        g = lem.is_good(R, 1.0, cells=cells)
        if not g.is_good:
            raise NotGood("R is not d-good at level 1")
        L0 = g.lemniscate
    else:
        L0 = lemniscate
    L, part = make_arc_partition(L0, arcs_per_curve)
    n = part.n_arcs

    A = np.zeros(n)
    varA = np.zeros(n)
    for cid, comp in enumerate(L.components):
        segs = component_segments(L, part, cid)
        for k, pidx in enumerate(comp.poles):
            rep = wos(segs, R.poles[pidx], walks, seed + 1009 * (cid + 1) + k)
            A += rep.estimates
            varA += rep.std_errors**2

    pivot = R.poles[0]
    tsegs = transported_segments(L, part, pivot)
    groups, m = _grouped_zeros(R)
    sources = [(1.0 / (z - pivot), mult) for z, mult in groups]
    if m > 0:
        sources.append((0j, m))
    B = np.zeros(n)
    varB = np.zeros(n)
    for k, (src, mult) in enumerate(sources):
        rep = wos(tsegs, src, walks, seed + 7919 * (k + 1))
        B += mult * rep.estimates
        varB += (mult * rep.std_errors) ** 2

    C = image_arc_measure(R, L, part)
    sigma = np.sqrt(varA + varB)
    return ReflectionReport(
        arcs=part.arcs, A=A, B=B, C=C, sigma=sigma, walks=walks, seed=seed
    )


@dataclass(frozen=True)
class EnergyReport:
    """Monte Carlo check of the energy identity for mu = sum_i w_{p_i}."""

    self_energies: np.ndarray
    self_expected: np.ndarray
    cross_energies: dict
    cross_expected: dict
    total: float
    total_expected: float
    walks: int
    seed: int

    @property
    def max_self_error(self):
        return float(np.max(np.abs(self.self_energies - self.self_expected)))

    @property
    def max_cross_error(self):
        if not self.cross_energies:
            return 0.0
        return max(
            abs(self.cross_energies[k] - self.cross_expected[k])
            for k in self.cross_energies
        )

    @property
    def total_error(self):
        return abs(self.total - self.total_expected)

    def to_json_obj(self):
        return {
            "self_energies": list(self.self_energies),
            "self_expected": list(self.self_expected),
            "cross_energies": {f"{i},{j}": v for (i, j), v in self.cross_energies.items()},
            "cross_expected": {f"{i},{j}": v for (i, j), v in self.cross_expected.items()},
            "total": self.total,
            "total_expected": self.total_expected,
            "walks": self.walks,
            "seed": self.seed,
        }


def verify_energy_identity(R: RationalFunction, walks: int = 60_000,
                           seed: int = DEFAULT_SEED, cells: int = 512,
                           energy_points: int = 4000,
                           lemniscate=None) -> EnergyReport:
    """Sample w_{p_i} on each component and verify the energy identities:
    cross-energies log 1/|p_i - p_j|, self-energies log 1/|a_i| and the
    total I(mu) = sum_{i != j} log 1/|p_i - p_j| + sum_i log 1/|a_i|.
    """
    if lemniscate is None:
        g = lem.is_good(R, 1.0, cells=cells)
        if not g.is_good:
            raise NotGood("R is not d-good at level 1")
        L0 = g.lemniscate
    else:
        L0 = lemniscate
    L, part = make_arc_partition(L0, 1)
    d = R.degree

    pole_of_comp = {}
    measures = []
    for cid, comp in enumerate(L.components):
        segs = component_segments(L, part, cid)
        pidx = comp.poles[0]
        pole_of_comp[cid] = pidx
        rep = wos(segs, R.poles[pidx], walks, seed + 60013 * (cid + 1))
        pts = rep.points
        rng = np.random.default_rng(seed + cid)
        if len(pts) > energy_points:
            pts = pts[rng.choice(len(pts), energy_points, replace=False)]
        measures.append(
            DiscreteMeasure(pts, np.full(len(pts), 1.0 / len(pts)))
        )

    self_e = np.zeros(d)
    self_exp = np.zeros(d)
    for cid in range(d):
        pidx = pole_of_comp[cid]
        self_e[pidx] = mutual_energy(measures[cid])
        self_exp[pidx] = -np.log(np.abs(R.residues[pidx]))

    cross_e = {}
    cross_exp = {}
    for ci in range(d):
        for cj in range(ci + 1, d):
            i, j = pole_of_comp[ci], pole_of_comp[cj]
            i, j = min(i, j), max(i, j)
            cross_e[(i, j)] = mutual_energy(measures[ci], measures[cj])
            cross_exp[(i, j)] = -np.log(np.abs(R.poles[i] - R.poles[j]))

    total = float(self_e.sum() + 2.0 * sum(cross_e.values()))
    total_exp = float(self_exp.sum() + 2.0 * sum(cross_exp.values()))
    return EnergyReport(
        self_energies=self_e,
        self_expected=self_exp,
        cross_energies=cross_e,
        cross_expected=cross_exp,
        total=total,
        total_expected=total_exp,
        walks=walks,
        seed=seed,
    )
