"""Logarithmic capacity of polyline boundaries by two independent methods.

PANEL solves the discretized equilibrium problem: piecewise-constant charges
w_j >= 0 on boundary panels and a Robin constant gamma with

    sum_j w_j k(x_i, panel_j) = gamma   for all collocation points x_i,
    sum_j w_j = 1,

where k is the exact mean of -log|x - y| over the source panel (the diagonal
reduces to 1 - log(l/2)).  The solve is repeated at half the panel count and
Richardson-extrapolated: the scheme error is cleanly O(1/n^2).

FEKETE greedily selects Leja points on the boundary and evaluates the
pairwise-product transfinite-diameter estimate.  The raw n-point estimate
carries a universal exp(log n/(n-1)) excess (exact on circles), which is
divided out.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _geom
from .errors import CoincidentPoints, NegativeWeights, SingularSystem

# Negative panel charges below this fraction of the mean charge are
# discretization noise (clamped); anything larger flags under-resolution.
NEGATIVE_WEIGHT_REL_TOL = 1e-3


@dataclass(frozen=True)
class Boundary:
    """A collection of polyline curves; open curves model slits/segments."""

    curves: list
    closed: bool = True


def segment_boundary(z0: complex, z1: complex, points: int = 64) -> Boundary:
    """A straight segment as a degenerate one-sided open boundary."""
    v = np.linspace(complex(z0), complex(z1), points + 1)
    return Boundary([v], closed=False)


def circle_boundary(center: complex, radius: float, points: int = 256) -> Boundary:
    th = 2 * np.pi * np.arange(points) / points
    return Boundary([complex(center) + radius * np.exp(1j * th)])


def as_boundary(obj) -> Boundary:
    if isinstance(obj, Boundary):
        return obj
    if isinstance(obj, np.ndarray):
        return Boundary([obj])
    return Boundary(list(obj))


@dataclass(frozen=True)
class DiscreteMeasure:
    """Weighted point set; weights sum to 1."""

    support: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        s = np.asarray(self.support, dtype=complex)
        w = np.asarray(self.weights, dtype=float)
        if len(s) != len(w):
            raise ValueError("support and weights must have equal length")
        total = w.sum()
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"weights sum to {total}, expected 1")
        object.__setattr__(self, "support", s)
        object.__setattr__(self, "weights", w)

    def to_json_obj(self):
        return {
            "support": [[z.real, z.imag] for z in self.support],
            "weights": list(self.weights),
        }


@dataclass(frozen=True)
class CapacityEstimate:
    value: float
    method: str
    error_indicator: float

    @property
    def robin_constant(self) -> float:
        return -float(np.log(self.value))


def _panel_mean_log_dist(targets, a, b):
    """Mean over the segment [a, b] of log|target - y|, exact closed form.

    Column vector of the influence matrix; the self entry (target at the
    panel midpoint) evaluates to log(l/2) - 1.
    """
    d = b - a
    L = abs(d)
    mid = 0.5 * (a + b)
    w = (targets - mid) * (L / d)  # rotate: segment on the real axis
    x = w.real
    y = w.imag
    h = 0.5 * L
    xpa = x + h
    xma = x - h
    r1sq = xma * xma + y * y
    r2sq = xpa * xpa + y * y
    t1 = np.arctan2(y, xma)
    t2 = np.arctan2(y, xpa)
    term1 = np.where(r2sq > 0, 0.5 * xpa * np.log(np.where(r2sq > 0, r2sq, 1)), 0.0)
    term2 = np.where(r1sq > 0, 0.5 * xma * np.log(np.where(r1sq > 0, r1sq, 1)), 0.0)
    return (term1 - term2 - L + y * (t1 - t2)) / L


def _repanel(boundary: Boundary, total_panels: int):
    """Panel endpoint arrays per curve, arclength-distributed.

    Closed curves get uniform spacing; open curves get cosine grading toward
    their endpoints.
    """
    lengths = np.array(
        [
            _geom.arclengths(v, closed=boundary.closed)[-1]
            for v in boundary.curves
        ]
    )
    if np.any(lengths <= 0):
        raise SingularSystem("zero-length curve in boundary")
    quota = np.maximum(8, np.round(total_panels * lengths / lengths.sum()).astype(int))
    starts, ends = [], []
    for v, n in zip(boundary.curves, quota):
        if boundary.closed:
            pts = _geom.resample_closed(v, int(n))
            a, b = pts, np.roll(pts, -1)
        else:
            pts = _geom.resample_open_cosine(v, int(n))
            a, b = pts[:-1], pts[1:]
        starts.append(a)
        ends.append(b)
    return np.concatenate(starts), np.concatenate(ends)


def _solve_equilibrium(a, b):
    mids = 0.5 * (a + b)
    n = len(mids)
    M = np.zeros((n + 1, n + 1))
    for j in range(n):
        M[:n, j] = -_panel_mean_log_dist(mids, a[j], b[j])
    M[:n, n] = -1.0
    M[n, :n] = 1.0
    rhs = np.zeros(n + 1)
    rhs[n] = 1.0
    try:
        sol = np.linalg.solve(M, rhs)
    except np.linalg.LinAlgError as exc:
        raise SingularSystem(f"panel system singular: {exc}") from exc
    if not np.all(np.isfinite(sol)):
        raise SingularSystem("panel solve produced non-finite values")
    return sol[:n], float(sol[n]), mids


def cap_panel(boundary, panels: int = 256):
    """Panel-method capacity of a boundary (list of curves or Boundary).

    Returns (CapacityEstimate, DiscreteMeasure).  The estimate is the
    Richardson extrapolation of solves at `panels` and `panels // 2`;
    error_indicator is the change under that panel-count doubling.
    """
    boundary = as_boundary(boundary)
    if panels < 16:
        raise ValueError("total panels must be at least 16")
    a1, b1 = _repanel(boundary, panels)
    w, gamma_fine, mids = _solve_equilibrium(a1, b1)
    a2, b2 = _repanel(boundary, max(16, panels // 2))
    _, gamma_coarse, _ = _solve_equilibrium(a2, b2)

    wmin = w.min()
    mean_w = 1.0 / len(w)
    if wmin < -NEGATIVE_WEIGHT_REL_TOL * mean_w:
        raise NegativeWeights(
            f"negative panel charge {wmin:.3e} (mean {mean_w:.3e}); increase panels"
        )
    w = np.clip(w, 0.0, None)
    w = w / w.sum()

    v_fine = float(np.exp(-gamma_fine))
    v_coarse = float(np.exp(-gamma_coarse))
    value = v_fine + (v_fine - v_coarse) / 3.0  # O(1/n^2) extrapolation
    est = CapacityEstimate(
        value=value, method="PANEL", error_indicator=abs(v_fine - v_coarse)
    )
    return est, DiscreteMeasure(mids, w)


def cap_fekete(boundary, n: int = 160, candidates: int = 4096) -> CapacityEstimate:
    """Leja-point transfinite-diameter estimate of the capacity.

    Greedy Leja selection from an arclength-dense candidate set; the
    pairwise-product estimate (prod |x_i - x_j|)^(2/(n(n-1))) is divided by
    n^(1/(n-1)) (the universal finite-n excess, exact for circles).
    error_indicator compares against the half-n estimate.
    """
    boundary = as_boundary(boundary)
    if n < 8:
        raise ValueError("need at least 8 points")
    lengths = np.array(
        [_geom.arclengths(v, closed=boundary.closed)[-1] for v in boundary.curves]
    )
    quota = np.maximum(64, (candidates * lengths / lengths.sum()).astype(int))
    cand = []
    for v, m in zip(boundary.curves, quota):
        if boundary.closed:
            cand.append(_geom.resample_closed(v, int(m)))
        else:
            cand.append(_geom.resample_open_cosine(v, int(m)))
    cand = np.concatenate(cand)

    idx = int(np.argmax(np.abs(cand)))
    chosen = [idx]
    with np.errstate(divide="ignore"):
        logs = np.log(np.abs(cand - cand[idx]))
    logs[idx] = -np.inf
    partial = []  # running sum over i<j of log|x_i - x_j|
    total = 0.0
    for _ in range(1, n):
        j = int(np.argmax(logs))
        total += logs[j]
        partial.append(total)
        chosen.append(j)
        with np.errstate(divide="ignore"):
            logs = logs + np.log(np.abs(cand - cand[j]))
        logs[chosen] = -np.inf

    def estimate(k):
        s = partial[k - 2]
        raw = np.exp(2.0 * s / (k * (k - 1)))
        return float(raw * k ** (-1.0 / (k - 1)))

    value = estimate(n)
    half = estimate(max(8, n // 2))
    return CapacityEstimate(
        value=value, method="FEKETE", error_indicator=abs(value - half)
    )


def cap_polynomial_preimage(poly, cap_e: float) -> float:
    """Capacity of P^{-1}(E) from cap(E): (cap(E)/|a_n|)^(1/n)."""
    coeffs = np.asarray(poly.coeffs if hasattr(poly, "coeffs") else poly, dtype=complex)
    deg = len(coeffs) - 1
    if deg < 1 or coeffs[deg] == 0:
        raise ValueError("polynomial must have degree >= 1 with nonzero leading coefficient")
    return float((cap_e / abs(coeffs[deg])) ** (1.0 / deg))


def mutual_energy(mu: DiscreteMeasure, nu: DiscreteMeasure = None) -> float:
    """Logarithmic energy sum_ij w_i v_j log(1/|x_i - y_j|).

    With a single argument (or nu is mu) the diagonal is excluded and the
    off-diagonal weight renormalized (U-statistic): unbiased for iid samples.
    Distinct measures must have disjoint supports.
    """
    block = 1024
    if nu is None or nu is mu:
        x = mu.support
        w = mu.weights
        if len(x) < 2:
            raise CoincidentPoints("self-energy undefined for a single point mass")
        acc = 0.0
        mass = 0.0
        for lo in range(0, len(x), block):
            hi = min(lo + block, len(x))
            d = np.abs(x[lo:hi, None] - x[None, :])
            ww = w[lo:hi, None] * w[None, :]
            for k in range(lo, hi):  # zero the diagonal of this block
                d[k - lo, k] = 1.0
                ww[k - lo, k] = 0.0
            with np.errstate(divide="ignore"):
                acc += float(np.sum(ww * -np.log(d)))
            mass += float(ww.sum())
        if mass <= 0:
            raise CoincidentPoints("self-energy undefined: all mass coincident")
        return acc / mass
    acc = 0.0
    for lo in range(0, len(mu.support), block):
        hi = min(lo + block, len(mu.support))
        d = np.abs(mu.support[lo:hi, None] - nu.support[None, :])
        if d.min() == 0.0:
            raise CoincidentPoints("distinct measures share a support point")
        ww = mu.weights[lo:hi, None] * nu.weights[None, :]
        acc += float(np.sum(ww * -np.log(d)))
    return acc
