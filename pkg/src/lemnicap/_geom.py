"""Polyline geometry helpers shared by the tracing, capacity and measure code.

Curves are numpy arrays of complex vertices.  Closed curves wrap implicitly
(last vertex connects back to the first); open curves do not.
"""
from __future__ import annotations

import numpy as np


def signed_area(v: np.ndarray) -> float:
    """Shoelace signed area of a closed polyline (positive = CCW)."""
    x, y = v.real, v.imag
    xn, yn = np.roll(x, -1), np.roll(y, -1)
    return 0.5 * float(np.sum(x * yn - xn * y))


def segment_arrays(v: np.ndarray, closed: bool = True):
    """Per-segment endpoint arrays (a, b)."""
    if closed:
        return v, np.roll(v, -1)
    return v[:-1], v[1:]


def arclengths(v: np.ndarray, closed: bool = True) -> np.ndarray:
    """Cumulative arclength at each vertex, starting from 0."""
    a, b = segment_arrays(v, closed)
    seg = np.abs(b - a)
    return np.concatenate(([0.0], np.cumsum(seg)))


def polyline_diameter(v: np.ndarray) -> float:
    return float(
        np.hypot(v.real.max() - v.real.min(), v.imag.max() - v.imag.min())
    )


def resample_closed(v: np.ndarray, n: int) -> np.ndarray:
    """n points at equal arclength spacing along a closed polyline."""
    s = arclengths(v, closed=True)
    total = s[-1]
    targets = total * np.arange(n) / n
    ext = np.concatenate([v, v[:1]])
    idx = np.searchsorted(s, targets, side="right") - 1
    idx = np.clip(idx, 0, len(v) - 1)
    seg_len = s[idx + 1] - s[idx]
    frac = np.where(seg_len > 0, (targets - s[idx]) / np.where(seg_len > 0, seg_len, 1), 0.0)
    return ext[idx] + frac * (ext[idx + 1] - ext[idx])


def resample_open_cosine(v: np.ndarray, n: int) -> np.ndarray:
    """n+1 points along an open polyline, cosine-graded toward both ends.

    Endpoint grading keeps piecewise-constant charge panels accurate for the
    inverse-square-root equilibrium density of an arc tip.
    """
    s = arclengths(v, closed=False)
    total = s[-1]
    targets = total * 0.5 * (1.0 - np.cos(np.pi * np.arange(n + 1) / n))
    idx = np.searchsorted(s, targets, side="right") - 1
    idx = np.clip(idx, 0, len(v) - 2)
    seg_len = s[idx + 1] - s[idx]
    frac = np.where(seg_len > 0, (targets - s[idx]) / np.where(seg_len > 0, seg_len, 1), 0.0)
    frac = np.clip(frac, 0.0, 1.0)
    return v[idx] + frac * (v[idx + 1] - v[idx])


def points_in_polygon(points: np.ndarray, poly: np.ndarray) -> np.ndarray:
    """Even-odd containment of each point in a closed polyline (boolean array)."""
    points = np.atleast_1d(np.asarray(points, dtype=complex))
    px = points.real[:, None]
    py = points.imag[:, None]
    x1, y1 = poly.real[None, :], poly.imag[None, :]
    x2 = np.roll(poly.real, -1)[None, :]
    y2 = np.roll(poly.imag, -1)[None, :]
    straddle = (y1 > py) != (y2 > py)
    with np.errstate(divide="ignore", invalid="ignore"):
        xin = x1 + (py - y1) * (x2 - x1) / np.where(y2 != y1, y2 - y1, 1.0)
    crossing = straddle & (px < xin)
    return crossing.sum(axis=1) % 2 == 1


def point_polyline_distance(points: np.ndarray, v: np.ndarray, closed: bool = True):
    """Min distance from each point to the polyline and the nearest segment index."""
    points = np.atleast_1d(np.asarray(points, dtype=complex))
    a, b = segment_arrays(v, closed)
    d = b - a
    den = np.maximum(np.abs(d) ** 2, 1e-300)
    w = points[:, None] - a[None, :]
    s = np.clip((w * d.conj()[None, :]).real / den[None, :], 0.0, 1.0)
    dist = np.abs(w - s * d[None, :])
    return dist.min(axis=1), dist.argmin(axis=1)


def min_distance_to_curves(points, curves, closed: bool = True):
    """Min distance from each point to a family of polylines."""
    best = np.full(np.atleast_1d(points).shape, np.inf)
    for v in curves:
        d, _ = point_polyline_distance(points, v, closed)
        best = np.minimum(best, d)
    return best
