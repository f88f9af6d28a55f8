"""Monotonicity of t^(1/m) * cap(K_t) for a rational map vanishing at infinity.

K_t is the complement of the unbounded component of {|R| < t}; its capacity
equals the capacity of the outer boundary of the traced level set, so each
level costs one trace plus one panel solve.  The function is non-decreasing
on (0, 1) and constant, equal to |c_m|^(1/m), below the level where the
first finite zero joins the unbounded sublevel component.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _geom
from . import lemniscate as lem
from .capacity import Boundary, cap_panel
from .errors import LevelNearCriticalValue, OnBoundary
from .ratfunc import RationalFunction, critical_data, leading_coefficient_at_infinity, zeros

PLATEAU_TOL = 1e-2
CRITICAL_EXCLUSION = 1e-3  # relative exclusion window around critical moduli


def outer_boundary(L: lem.Lemniscate):
    """Curves not enclosed by any other curve (the capacity-carrying ones)."""
    return L.outer_curves()


def default_levels(R: RationalFunction, n: int = 24, tmin: float = 1e-3,
                   tmax: float = 0.98) -> np.ndarray:
    """Logarithmically spaced levels with critical moduli excluded."""
    grid = np.geomspace(tmin, tmax, n)
    mods = critical_data(R).moduli
    out = []
    for t in grid:
        if len(mods):
            rel = np.abs(mods - t) / t
            if rel.min() < CRITICAL_EXCLUSION:
                t = t * (1.0 + 3.0 * CRITICAL_EXCLUSION)
                if len(mods) and (np.abs(mods - t) / t).min() < CRITICAL_EXCLUSION:
                    continue
        out.append(float(t))
    return np.array(sorted(set(out)))


@dataclass(frozen=True)
class SweepResult:
    levels: np.ndarray
    caps: np.ndarray
    F: np.ndarray
    error_indicators: np.ndarray
    m: int
    c_m_modulus: float
    plateau_end: float
    zeros_clear: np.ndarray  # per level: no finite zero in the unbounded sublevel component
    outlines: list = None  # optional [(t, [outer curves])] for the overlay plot

    @property
    def plateau_target(self) -> float:
        return float(self.c_m_modulus ** (1.0 / self.m))

    def monotone_within(self, floor: float = 1e-3) -> bool:
        tol = max(floor, 3.0 * float(self.error_indicators.max(initial=0.0)))
        return bool(np.all(np.diff(self.F) >= -tol))

    def csv_rows(self):
        target = self.plateau_target
        rows = [["t", "cap", "F", "error_indicator", "plateau"]]
        for t, c, f, e in zip(self.levels, self.caps, self.F, self.error_indicators):
            rows.append(
                [f"{t:.8g}", f"{c:.8g}", f"{f:.8g}", f"{e:.3g}",
                 int(abs(f - target) <= PLATEAU_TOL)]
            )
        return rows


def sweep_F(R: RationalFunction, levels=None, n_levels: int = 24,
            tmin: float = 1e-3, tmax: float = 0.98, panels: int = 256,
            cells: int = 384, keep_outlines: bool = False) -> SweepResult:
    """Evaluate F(t) = t^(1/m) cap(K_t) over a level grid.

    Levels colliding with critical moduli are skipped with a note; the
    plateau end is the largest level still within PLATEAU_TOL of
    |c_m|^(1/m).
    """
    if levels is None:
        levels = default_levels(R, n_levels, tmin, tmax)
    levels = np.asarray(sorted(float(t) for t in levels))
    m, c_m = leading_coefficient_at_infinity(R)
    target = abs(c_m) ** (1.0 / m)
    finite_zeros, _ = zeros(R)

    used, caps, errs, zflags = [], [], [], []
    outlines = [] if keep_outlines else None
    for t in levels:
        try:
            L = lem.trace(R, float(t), cells=cells)
        except LevelNearCriticalValue:
            continue
        if keep_outlines:
            outlines.append((float(t), outer_boundary(L)))
        est, _mu = cap_panel(Boundary(outer_boundary(L)), panels=panels)
        used.append(float(t))
        caps.append(est.value)
        errs.append(est.error_indicator)
        clear = True
        for z in finite_zeros:
            try:
                if lem.contains_point(L, z) is not None:
                    continue  # zero inside K_t
            except OnBoundary:
                clear = False
                continue
            # outside K_t: in the unbounded component unless inside a hole
            inside_any = any(
                _geom.points_in_polygon(np.array([z]), v)[0] for v in L.curves
            )
            if not inside_any:
                clear = False
        zflags.append(clear)

    used = np.asarray(used)
    caps = np.asarray(caps)
    F = used ** (1.0 / m) * caps
    plateau_end = 0.0
    for t, f in zip(used, F):
        if abs(f - target) <= PLATEAU_TOL:
            plateau_end = max(plateau_end, float(t))
    return SweepResult(
        levels=used,
        caps=caps,
        F=F,
        error_indicators=np.asarray(errs),
        m=m,
        c_m_modulus=abs(c_m),
        plateau_end=plateau_end,
        zeros_clear=np.asarray(zflags, dtype=bool),
        outlines=outlines,
    )


def overlay_svg(result: SweepResult, path, size: int = 720):
    """All K_t outer boundaries across the sweep in one picture."""
    if not result.outlines:
        raise ValueError("sweep was run without keep_outlines=True")
    allv = np.concatenate([v for _t, cs in result.outlines for v in cs])
    x0, x1 = allv.real.min(), allv.real.max()
    y0, y1 = allv.imag.min(), allv.imag.max()
    pad = 0.05 * max(x1 - x0, y1 - y0)
    x0, x1, y0, y1 = x0 - pad, x1 + pad, y0 - pad, y1 + pad
    sc = size / max(x1 - x0, y1 - y0)
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{(x1 - x0) * sc:.1f}" '
        f'height="{(y1 - y0) * sc:.1f}" '
        f'viewBox="0 0 {(x1 - x0) * sc:.1f} {(y1 - y0) * sc:.1f}">',
        '<rect width="100%" height="100%" fill="white"/>',
    ]
    n = len(result.outlines)
    for k, (_t, curves) in enumerate(result.outlines):
        hue = int(240 * (1 - k / max(n - 1, 1)))
        for v in curves:
            pts = " ".join(
                f"{(z.real - x0) * sc:.2f},{(y1 - z.imag) * sc:.2f}" for z in v
            )
            lines.append(
                f'<polygon points="{pts}" fill="none" '
                f'stroke="hsl({hue},70%,45%)" stroke-width="1"/>'
            )
    lines.append("</svg>")
    with open(path, "w") as f:
        f.write("\n".join(lines) + "\n")
