"""Rational functions in partial-fraction form.

The central object is R(z) = sum_i a_i / (z - p_i) with pairwise-distinct
simple poles p_i and nonzero residues a_i.  The partial-fraction data is the
source of truth; numerator/denominator polynomials are derived on demand.
"""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateInput, NonConvergence, PoleProximity

# Relative guard radius around each pole for checked evaluation.
POLE_GUARD = 1e-12

# Roots closer than this (relative to their scale) are merged into one
# cluster and reported with multiplicity.
ROOT_CLUSTER_TOL = 1e-6

_AERTH_SEED = 0xC0FFEE  # fixed perturbation stream, keeps runs reproducible


@dataclass(frozen=True)
class Polynomial:
    """Dense polynomial, coefficients in ascending degree order."""

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=complex)
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, z):
        if len(self.coeffs) == 0:
            return np.zeros_like(np.asarray(z, dtype=complex))
        return np.polynomial.polynomial.polyval(z, self.coeffs)

    def derivative(self) -> "Polynomial":
        if len(self.coeffs) <= 1:
            return Polynomial(np.zeros(0, dtype=complex))
        k = np.arange(1, len(self.coeffs))
        return Polynomial(self.coeffs[1:] * k)


def _trim(coeffs, rel_tol=1e-12):
    """Drop trailing (highest-degree) coefficients below rel_tol * max|c|."""
    c = np.asarray(coeffs, dtype=complex)
    if len(c) == 0:
        return c
    scale = np.abs(c).max()
    if scale == 0.0:
        return np.zeros(0, dtype=complex)
    keep = len(c)
    while keep > 0 and abs(c[keep - 1]) <= rel_tol * scale:
        keep -= 1
    return c[:keep].copy()


@dataclass(frozen=True)
class RationalFunction:
    """R(z) = sum a_i / (z - p_i), simple poles, vanishing at infinity."""

    poles: np.ndarray
    residues: np.ndarray

    def __post_init__(self):
        p = np.atleast_1d(np.asarray(self.poles, dtype=complex))
        a = np.atleast_1d(np.asarray(self.residues, dtype=complex))
        if len(p) != len(a) or len(p) == 0:
            raise DegenerateInput("poles and residues must have equal positive length")
        if np.any(np.abs(a) == 0.0):
            raise DegenerateInput("all residues must be nonzero")
        if len(p) > 1:
            dist = np.abs(p[:, None] - p[None, :])
            np.fill_diagonal(dist, np.inf)
            if dist.min() == 0.0:
                raise DegenerateInput("poles must be pairwise distinct")
        object.__setattr__(self, "poles", p)
        object.__setattr__(self, "residues", a)

    @property
    def degree(self) -> int:
        return len(self.poles)

    def __call__(self, z, check=False):
        return self.eval(z, check=check)

    def eval(self, z, check=True):
        """Evaluate R at z (scalar or array).

        With check=True, raises PoleProximity when z falls inside the guard
        radius POLE_GUARD * (1 + |p_i|) of a pole.  Internal grid evaluation
        uses check=False and tolerates infinities.
        """
        z = np.asarray(z, dtype=complex)
        diff = z[..., None] - self.poles
        if check:
            guard = POLE_GUARD * (1.0 + np.abs(self.poles))
            if np.any(np.abs(diff) < guard):
                raise PoleProximity("evaluation point too close to a pole")
        with np.errstate(divide="ignore", invalid="ignore"):
            vals = np.sum(self.residues / diff, axis=-1)
        if vals.ndim == 0:
            return complex(vals)
        return vals

    def deriv(self, z):
        """R'(z) = -sum a_i / (z - p_i)^2 (unchecked)."""
        z = np.asarray(z, dtype=complex)
        diff = z[..., None] - self.poles
        with np.errstate(divide="ignore", invalid="ignore"):
            vals = -np.sum(self.residues / (diff * diff), axis=-1)
        if vals.ndim == 0:
            return complex(vals)
        return vals

    def log_abs(self, z):
        """log|R(z)| with -inf at zeros and +inf at poles (unchecked)."""
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.log(np.abs(self.eval(z, check=False)))

    def scaled(self, factor) -> "RationalFunction":
        """The rational function factor * R."""
        return RationalFunction(self.poles.copy(), self.residues * factor)

    def moments(self, count=None) -> np.ndarray:
        """Laurent moments mu_k = sum a_i p_i^k, k = 0..count-1."""
        d = self.degree if count is None else count
        return np.array(
            [np.sum(self.residues * self.poles**k) for k in range(d)], dtype=complex
        )

    def to_json(self) -> str:
        obj = {
            "poles": [[z.real, z.imag] for z in self.poles],
            "residues": [[z.real, z.imag] for z in self.residues],
        }
        return json.dumps(obj, sort_keys=True)

    @staticmethod
    def from_json(text: str) -> "RationalFunction":
        obj = json.loads(text)
        poles = [complex(re, im) for re, im in obj["poles"]]
        residues = [complex(re, im) for re, im in obj["residues"]]
        return RationalFunction(np.array(poles), np.array(residues))


@dataclass(frozen=True)
class CriticalData:
    """Finite critical points of R with their values, index-aligned."""

    points: np.ndarray
    values: np.ndarray

    @property
    def moduli(self) -> np.ndarray:
        return np.abs(self.values)


def _poly_mul(a, b):
    if len(a) == 0 or len(b) == 0:
        return np.zeros(0, dtype=complex)
    return np.convolve(a, b)


def _prod_monic(roots):
    """Coefficients (ascending) of prod (z - r)."""
    c = np.array([1.0 + 0j])
    for r in roots:
        c = _poly_mul(c, np.array([-r, 1.0 + 0j]))
    return c


def as_fraction(R: RationalFunction):
    """Return (numerator, denominator) polynomials with denominator monic.

    denominator = prod (z - p_i); numerator = sum a_i prod_{j!=i} (z - p_j).
    The numerator is trimmed to its true degree d - m, where m is the order
    of the zero at infinity (leading coefficients of a cancelling sum are
    pure roundoff).
    """
    p, a = R.poles, R.residues
    d = R.degree
    den = _prod_monic(p)
    num = np.zeros(d, dtype=complex)
    for i in range(d):
        partial = _prod_monic(np.delete(p, i))
        num[: len(partial)] += a[i] * partial
    m, _ = leading_coefficient_at_infinity(R)
    num = num[: d - m + 1]  # degree d - m; higher coefficients are cancellation noise
    return Polynomial(num), Polynomial(den)


def _residual_bound(coeffs_asc, roots):
    scale = np.abs(coeffs_asc).max()
    deg = len(coeffs_asc) - 1
    vals = np.abs(np.polynomial.polynomial.polyval(roots, coeffs_asc))
    bounds = scale * np.maximum(1.0, np.abs(roots)) ** deg
    return np.max(vals / bounds)


def _aberth(coeffs_asc, max_iter=120, tol=5e-15):
    """Aberth-Ehrlich simultaneous iteration; returns roots or None on stall."""
    c = coeffs_asc / coeffs_asc[-1]
    n = len(c) - 1
    # initial circle: centroid shift plus coefficient-magnitude radius
    center = -c[-2] / n if n > 0 else 0.0
    with np.errstate(divide="ignore"):
        mags = np.abs(c[:-1])
        nz = mags > 0
        radius = 0.0
        if nz.any():
            ks = np.nonzero(nz)[0]
            radius = np.max(mags[ks] ** (1.0 / (n - ks)))
        radius = 2.0 * max(radius, 1e-3)
    rng = np.random.default_rng(_AERTH_SEED)
    ang = 2 * np.pi * (np.arange(n) + 0.35) / n + 0.01 * rng.standard_normal(n)
    z = center + radius * np.exp(1j * ang) * (1 + 0.01 * rng.standard_normal(n))
    for _ in range(max_iter):
        pv = np.polynomial.polynomial.polyval(z, c)
        dv = np.polynomial.polynomial.polyval(z, c[1:] * np.arange(1, n + 1))
        with np.errstate(divide="ignore", invalid="ignore"):
            newton = np.where(dv != 0, pv / np.where(dv != 0, dv, 1), 0.1 + 0j)
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, np.inf)
            s = np.sum(1.0 / diff, axis=1)
            delta = newton / (1.0 - newton * s)
        bad = ~np.isfinite(delta)
        delta[bad] = 0.05 * radius * np.exp(2j * np.pi * rng.random(bad.sum()))
        z = z - delta
        if np.all(np.abs(delta) <= tol * (1.0 + np.abs(z))):
            return z
    return None


def poly_roots(P: Polynomial, residual_tol=1e-8):
    """All roots of P with multiplicity.

    Aberth-Ehrlich iteration with a companion-matrix fallback when the
    simultaneous iteration stalls.  Near-coincident roots (within
    ROOT_CLUSTER_TOL relative) are clustered and returned as repeated copies
    of the cluster mean.  Raises NonConvergence when the worst scaled
    residual exceeds residual_tol.

    Only exactly-zero leading coefficients are dropped: a tiny-but-genuine
    leading coefficient (wide dynamic range) still determines the degree.
    """
    c = _trim(P.coeffs, rel_tol=0.0)
    if len(c) <= 1:
        raise DegenerateInput("poly_roots requires degree >= 1")
    roots = _aberth(c)
    if roots is None or _residual_bound(c, roots) > residual_tol:
        # companion fallback; np.roots wants descending coefficients
        roots = np.roots(c[::-1])
        for _ in range(8):  # Newton polish
            pv = np.polynomial.polynomial.polyval(roots, c / c[-1])
            dv = np.polynomial.polynomial.polyval(
                roots, (c / c[-1])[1:] * np.arange(1, len(c))
            )
            step = np.where(np.abs(dv) > 0, pv / np.where(dv != 0, dv, 1), 0)
            roots = roots - step
    worst = _residual_bound(c, roots)
    if worst > residual_tol:
        raise NonConvergence(
            f"root residual {worst:.3e} exceeds {residual_tol:.1e}", worst
        )
    return _cluster_roots(roots)


def _cluster_roots(roots):
    """Merge roots within ROOT_CLUSTER_TOL relative distance."""
    order = np.lexsort((roots.imag, roots.real))
    roots = roots[order]
    out = []
    used = np.zeros(len(roots), dtype=bool)
    for i in range(len(roots)):
        if used[i]:
            continue
        cluster = [roots[i]]
        used[i] = True
        for j in range(i + 1, len(roots)):
            if used[j]:
                continue
            scale = max(1.0, abs(roots[i]))
            if abs(roots[j] - roots[i]) <= ROOT_CLUSTER_TOL * scale:
                cluster.append(roots[j])
                used[j] = True
        mean = np.mean(cluster)
        out.extend([mean] * len(cluster))
    return np.array(out, dtype=complex)


def zeros(R: RationalFunction):
    """Finite zeros of R (with multiplicity) and the order of the zero at infinity.

    The total count of zeros on the sphere equals the degree d.
    """
    num, _den = as_fraction(R)
    m = R.degree - num.degree
    if num.degree >= 1:
        finite = poly_roots(num)
    else:
        finite = np.zeros(0, dtype=complex)
    return finite, m


def critical_data(R: RationalFunction) -> CriticalData:
    """Finite critical points of R (roots of the numerator of R') and values.

    For d = 1 there are no finite critical points.
    """
    p, a = R.poles, R.residues
    d = R.degree
    if d == 1:
        return CriticalData(np.zeros(0, dtype=complex), np.zeros(0, dtype=complex))
    # numerator of R' over prod (z - p_i)^2:  -sum a_i prod_{j != i} (z - p_j)^2
    num = np.zeros(2 * d - 1, dtype=complex)
    for i in range(d):
        partial = _prod_monic(np.delete(p, i))
        sq = _poly_mul(partial, partial)
        num[: len(sq)] += -a[i] * sq
    # R' ~ -m c_m z^(-m-1) at infinity, so the numerator degree is exactly
    # 2d - m - 1; higher coefficients are cancellation noise, and the true
    # leading coefficient may be tiny relative to the rest (wide-range poles).
    m, _ = leading_coefficient_at_infinity(R)
    num = num[: 2 * d - m]
    if len(num) <= 1:
        return CriticalData(np.zeros(0, dtype=complex), np.zeros(0, dtype=complex))
    pts = poly_roots(Polynomial(num))
    vals = R.eval(pts, check=False)
    return CriticalData(pts, np.asarray(vals, dtype=complex))


def leading_coefficient_at_infinity(R: RationalFunction):
    """Order m and coefficient c_m of the Laurent expansion R(z) ~ c_m / z^m.

    c_m = sum a_i p_i^(m-1) where m-1 is the first index with nonvanishing
    moment.  Raises DegenerateInput when all moments up to d-1 vanish, which
    is impossible for valid data and signals numerical inconsistency.
    """
    p, a = R.poles, R.residues
    d = R.degree
    for k in range(d):
        mu = np.sum(a * p**k)
        scale = np.sum(np.abs(a) * np.maximum(1.0, np.abs(p)) ** k)
        if abs(mu) > 1e-10 * scale:
            return k + 1, complex(mu)
    raise DegenerateInput("all moments up to d-1 vanish; inconsistent input")
