"""Tracing level sets {|R(z)| = t} and the component structure of {|R| >= t}.

The tracer contours log|R| (uniform relative accuracy across the dynamic
range), runs marching squares per window, then projects every vertex onto
the exact level set by a Newton iteration and subdivides segments until the
midpoint satisfies the level tolerance.

Because pole spreads and component sizes can differ by orders of magnitude,
automatic mode traces one window per pole, grown until |R| on the window
frame stays below the level with a safety margin (so no curve can cross the
frame), and merges duplicate curves found by overlapping windows.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _geom
from .errors import (
    LevelNearCriticalValue,
    OnBoundary,
    TraceFailure,
    WindowTooSmall,
)
from .ratfunc import RationalFunction, critical_data

# Relative level accuracy guaranteed at vertices and segment midpoints.
TRACE_TOL = 1e-4

# Refuse levels this close (relative) to a critical modulus.
CRITICAL_LEVEL_TOL = 1e-6

# Fraction of the level that |R| must stay below on an auto window frame.
WINDOW_MARGIN = 0.05

# Traced loops smaller than this many grid cells are under-resolved noise
# from a window scaled for a different pole; the right window re-finds them.
MIN_LOOP_CELLS = 3.0


@dataclass(frozen=True)
class Component:
    """One connected component of {|R| >= t}: outer curve plus holes."""

    outer: int
    holes: tuple
    poles: tuple


@dataclass(frozen=True)
class Lemniscate:
    """Traced level set: closed curves with containment and pole structure."""

    level: float
    curves: list
    depths: np.ndarray
    parents: np.ndarray
    components: list
    scale: float

    @property
    def component_count(self) -> int:
        return len(self.components)

    @property
    def pole_assignment(self) -> dict:
        return {i: list(c.poles) for i, c in enumerate(self.components)}

    def outer_curves(self):
        """Curves not enclosed by any other curve (roots of the containment tree)."""
        return [self.curves[i] for i in range(len(self.curves)) if self.depths[i] == 0]

    def component_boundary(self, comp_id: int):
        """Outer curve plus hole curves of one component."""
        c = self.components[comp_id]
        return [self.curves[c.outer]] + [self.curves[h] for h in c.holes]

    def enclosed_area(self) -> float:
        """Total area of {|R| >= t}: outer areas minus hole areas."""
        area = 0.0
        for i, v in enumerate(self.curves):
            a = abs(_geom.signed_area(v))
            area += a if self.depths[i] % 2 == 0 else -a
        return area

    def to_json_obj(self) -> dict:
        return {
            "level": self.level,
            "curves": [[[z.real, z.imag] for z in v] for v in self.curves],
            "components": [
                {"outer": c.outer, "holes": list(c.holes), "poles": list(c.poles)}
                for c in self.components
            ],
        }


@dataclass(frozen=True)
class GoodnessReport:
    """Certificate that R is d-good at level t (or the obstruction)."""

    is_good: bool
    component_count: int
    offending_critical_points: list
    one_pole_each: bool
    lemniscate: Lemniscate = field(repr=False, default=None)


# ---------------------------------------------------------------------------
# marching squares

# local edges: B(ottom)=0, R(ight)=1, T(op)=2, L(eft)=3
_CASE_TABLE = {
    1: [(3, 0)],
    2: [(0, 1)],
    3: [(3, 1)],
    4: [(1, 2)],
    6: [(0, 2)],
    7: [(2, 3)],
    8: [(2, 3)],
    9: [(0, 2)],
    11: [(1, 2)],
    12: [(3, 1)],
    13: [(0, 1)],
    14: [(3, 0)],
}


def _edge_key(local, i, j):
    if local == 0:
        return ("h", i, j)
    if local == 2:
        return ("h", i, j + 1)
    if local == 3:
        return ("v", i, j)
    return ("v", i + 1, j)


def _edge_neighbor(cell, edge):
    """The cell on the other side of an edge.

    A horizontal edge (i, j) borders cells (i, j-1) and (i, j); a vertical
    edge (i, j) borders (i-1, j) and (i, j).
    """
    kind, ei, ej = edge
    if kind == "h":
        c1, c2 = (ei, ej - 1), (ei, ej)
    else:
        c1, c2 = (ei - 1, ej), (ei, ej)
    return c2 if cell == c1 else c1


def _march(F, xs, ys, center_sign):
    """Marching squares on grid F[j, i] at level 0.

    Returns (loops, clipped): closed loops as complex vertex arrays, and
    clipped chains that ran into the grid boundary.
    """
    F = np.where(F == 0.0, -1e-300, F)
    inside = F > 0.0
    b00 = inside[:-1, :-1]
    b10 = inside[:-1, 1:]
    b11 = inside[1:, 1:]
    b01 = inside[1:, :-1]
    case = (
        b00.astype(np.int8)
        + 2 * b10.astype(np.int8)
        + 4 * b11.astype(np.int8)
        + 8 * b01.astype(np.int8)
    )
    jj, ii = np.nonzero((case != 0) & (case != 15))

    cross_pos = {}

    def crossing(edge):
        pt = cross_pos.get(edge)
        if pt is not None:
            return pt
        kind, i, j = edge
        if kind == "h":
            f0, f1 = F[j, i], F[j, i + 1]
            tt = f0 / (f0 - f1)
            pt = complex(xs[i] + tt * (xs[i + 1] - xs[i]), ys[j])
        else:
            f0, f1 = F[j, i], F[j + 1, i]
            tt = f0 / (f0 - f1)
            pt = complex(xs[i], ys[j] + tt * (ys[j + 1] - ys[j]))
        cross_pos[edge] = pt
        return pt

    cellpairs = {}
    for j, i in zip(jj.tolist(), ii.tolist()):
        c = int(case[j, i])
        if c in (5, 10):
            pos = center_sign(0.5 * (xs[i] + xs[i + 1]), 0.5 * (ys[j] + ys[j + 1]))
            if c == 5:
                local = [(0, 1), (2, 3)] if pos else [(3, 0), (1, 2)]
            else:
                local = [(3, 0), (1, 2)] if pos else [(0, 1), (2, 3)]
        else:
            local = _CASE_TABLE[c]
        cellpairs[(i, j)] = [
            [_edge_key(a, i, j), _edge_key(b, i, j), False] for a, b in local
        ]

    loops = []
    clipped = []
    for start_cell in sorted(cellpairs):
        for start_pair in cellpairs[start_cell]:
            if start_pair[2]:
                continue
            pts = []
            cell, pair = start_cell, start_pair
            edge_in = pair[0]
            start_edge = edge_in
            closed = False
            while True:
                pair[2] = True
                pts.append(crossing(edge_in))
                edge_out = pair[1] if pair[0] == edge_in else pair[0]
                if edge_out == start_edge:
                    closed = True
                    break
                nxt = _edge_neighbor(cell, edge_out)
                if nxt is None or nxt not in cellpairs:
                    pts.append(crossing(edge_out))
                    break
                found = None
                for q in cellpairs[nxt]:
                    if not q[2] and (q[0] == edge_out or q[1] == edge_out):
                        found = q
                        break
                if found is None:
                    closed = edge_out == start_edge
                    if not closed:
                        pts.append(crossing(edge_out))
                    break
                cell, pair, edge_in = nxt, found, edge_out
            arr = np.array(pts, dtype=complex)
            if closed and len(arr) >= 3:
                loops.append(arr)
            else:
                clipped.append(arr)
    return loops, clipped


# ---------------------------------------------------------------------------
# level-set projection and refinement


def _project_to_level(R, z, logt, tol=1e-11, max_iter=60, step_cap=None):
    """Newton iteration moving points onto {log|R| = logt}."""
    z = np.array(z, dtype=complex)
    for _ in range(max_iter):
        vals = R.eval(z, check=False)
        with np.errstate(divide="ignore", invalid="ignore"):
            g = np.log(np.abs(vals)) - logt
        active = np.abs(g) > tol
        if not active.any():
            break
        psi = R.deriv(z[active]) / vals[active]
        step = g[active] / psi
        bad = ~np.isfinite(step)
        if bad.any():
            step[bad] = 0.0
        if step_cap is not None:
            mag = np.abs(step)
            big = mag > step_cap
            if big.any():
                step[big] *= step_cap / mag[big]
        z[active] = z[active] - step
    return z


def _refine_loop(R, loop, logt, tol_log, max_rounds=10, max_vertices=24000):
    """Insert projected midpoints until every segment midpoint is on-level."""
    # very coarse loops get an unconditional enrichment first
    while len(loop) < 16:
        mids = 0.5 * (loop + np.roll(loop, -1))
        mids = _project_to_level(R, mids, logt)
        out = np.empty(2 * len(loop), dtype=complex)
        out[0::2] = loop
        out[1::2] = mids
        loop = out
    for _ in range(max_rounds):
        nxt = np.roll(loop, -1)
        mids = 0.5 * (loop + nxt)
        with np.errstate(divide="ignore", invalid="ignore"):
            err = np.abs(R.log_abs(mids) - logt)
        bad = np.nonzero(~(err <= tol_log))[0]
        if len(bad) == 0 or len(loop) + len(bad) > max_vertices:
            break
        proj = _project_to_level(R, mids[bad], logt)
        loop = np.insert(loop, bad + 1, proj)
    return loop


# ---------------------------------------------------------------------------
# automatic windows


def _rigorous_radius(R, t):
    """Everything of {|R| >= t} is within this distance of some pole."""
    spread = 0.0
    if R.degree > 1:
        d = np.abs(R.poles[:, None] - R.poles[None, :])
        spread = float(d.max())
    return spread + 2.0 * float(np.sum(np.abs(R.residues))) / t + 1.0


def _pole_window(R, t, idx, n_rays=16, n_boundary=2048):
    """Square window centered at pole idx whose frame avoids {|R| >= t}."""
    p = R.poles[idx]
    r_rig = _rigorous_radius(R, t)
    r_min = max(1e-9 * r_rig, 1e-12 * (1.0 + abs(p)))
    radii = np.geomspace(r_min, r_rig, 110)
    ang = 2 * np.pi * (np.arange(n_rays) + 0.3) / n_rays
    zz = p + radii[None, :] * np.exp(1j * ang)[:, None]
    vals = np.abs(R.eval(zz, check=False))
    hit = vals >= t
    # first exit from the own component along each ray; the window must scale
    # with this component, not with far components crossed further out
    exits = np.where(hit.all(axis=1), len(radii) - 1, np.argmin(hit, axis=1))
    r_cross = float(radii[exits.max()])
    half = max(2.0 * r_cross, 8.0 * r_min)
    tmax = t * (1.0 - WINDOW_MARGIN)
    for _ in range(20):
        if half >= 1.2 * r_rig:
            half = 1.2 * r_rig
            break
        side = np.linspace(-half, half, n_boundary // 4)
        frame = np.concatenate(
            [
                p + side + 1j * half,
                p + side - 1j * half,
                p + 1j * side + half,
                p + 1j * side - half,
            ]
        )
        if np.abs(R.eval(frame, check=False)).max() <= tmax:
            break
        half *= 1.6
    return p, half


def _trace_in_window(R, logt, cx, cy, half_x, half_y, cells):
    xs = np.linspace(cx - half_x, cx + half_x, cells + 1)
    ys = np.linspace(cy - half_y, cy + half_y, cells + 1)
    X, Y = np.meshgrid(xs, ys)
    F = R.log_abs(X + 1j * Y) - logt
    F = np.where(np.isfinite(F), F, np.where(np.isnan(F), -745.0, F))
    F = np.clip(F, -745.0, 745.0)

    def center_sign(x, y):
        return R.log_abs(complex(x, y)) - logt > 0

    loops, clipped = _march(F, xs, ys, center_sign)
    cell_size = max(xs[1] - xs[0], ys[1] - ys[0])
    return loops, clipped, cell_size


def _dedupe(loops, cell_sizes):
    """Drop duplicate curves traced by overlapping windows; keep the finer one."""
    order = np.argsort(cell_sizes, kind="stable")
    kept = []
    kept_cells = []
    for k in order:
        v = loops[k]
        dup = False
        for w, cw in zip(kept, kept_cells):
            tol = 3.0 * max(cell_sizes[k], cw)
            # cheap bbox gate before the distance test
            if (
                v.real.min() > w.real.max() + tol
                or v.real.max() < w.real.min() - tol
                or v.imag.min() > w.imag.max() + tol
                or v.imag.max() < w.imag.min() - tol
            ):
                continue
            sample = v[:: max(1, len(v) // 12)][:12]
            d, _ = _geom.point_polyline_distance(sample, w)
            if d.max() <= tol:
                dup = True
                break
        if not dup:
            kept.append(v)
            kept_cells.append(cell_sizes[k])
    return kept


def _build_structure(level, curves, poles, strict=True):
    """Containment forest, orientation, components and pole assignment."""
    areas = np.array([abs(_geom.signed_area(v)) for v in curves])
    order = np.lexsort(
        (
            [float(np.mean(v).imag) for v in curves],
            [float(np.mean(v).real) for v in curves],
            -areas,
        )
    )
    curves = [curves[i] for i in order]
    areas = areas[order]
    n = len(curves)

    contains = np.zeros((n, n), dtype=bool)
    for a in range(n):
        for b in range(n):
            if a == b or areas[a] >= areas[b]:
                continue
            # is curve a inside curve b?
            contains[b, a] = bool(_geom.points_in_polygon(curves[a][:1], curves[b])[0])
    depths = contains.sum(axis=0)
    parents = np.full(n, -1, dtype=int)
    for a in range(n):
        holders = np.nonzero(contains[:, a])[0]
        if len(holders):
            parents[a] = holders[np.argmin(areas[holders])]

    oriented = []
    for i, v in enumerate(curves):
        s = _geom.signed_area(v)
        want_ccw = depths[i] % 2 == 0
        if (s > 0) != want_ccw:
            v = v[::-1].copy()
        oriented.append(v)
    curves = oriented

    comp_ids = [i for i in range(n) if depths[i] % 2 == 0]
    holes = {i: [] for i in comp_ids}
    for a in range(n):
        if depths[a] % 2 == 1 and parents[a] in holes:
            holes[parents[a]].append(a)

    assignment = {i: [] for i in comp_ids}
    unassigned = []
    for k, p in enumerate(poles):
        containers = [
            i for i in range(n) if _geom.points_in_polygon(np.array([p]), curves[i])[0]
        ]
        if not containers:
            unassigned.append(k)
            continue
        inner = min(containers, key=lambda i: areas[i])
        if depths[inner] % 2 == 1:
            raise TraceFailure(f"pole {k} landed inside a hole; trace inconsistent")
        assignment[inner].append(k)
    if strict and unassigned:
        raise TraceFailure(f"poles {unassigned} not enclosed by any traced curve")

    components = [
        Component(outer=i, holes=tuple(holes[i]), poles=tuple(assignment[i]))
        for i in comp_ids
    ]
    scale = max((_geom.polyline_diameter(v) for v in curves), default=1.0)
    return Lemniscate(
        level=level,
        curves=curves,
        depths=np.asarray(depths),
        parents=parents,
        components=components,
        scale=scale,
    )


def check_level(R: RationalFunction, t: float):
    """Raise LevelNearCriticalValue when t collides with a critical modulus."""
    cd = critical_data(R)
    if len(cd.points):
        m = cd.moduli
        if np.any(np.abs(m - t) <= CRITICAL_LEVEL_TOL * t):
            raise LevelNearCriticalValue(
                f"level {t} within {CRITICAL_LEVEL_TOL:g} (relative) of a critical modulus"
            )
    return cd


def trace(R: RationalFunction, t: float, window=None, cells: int = 512,
          level_tol: float = TRACE_TOL) -> Lemniscate:
    """Trace the lemniscate {|R(z)| = t} and build its component structure.

    window: None for automatic per-pole windows, or (x0, x1, y0, y1).
    cells: marching-squares grid resolution per window.
    Every returned vertex satisfies | |R(v)| - t | <= level_tol * t.
    """
    if not (t > 0):
        raise ValueError("level t must be positive")
    check_level(R, t)
    logt = float(np.log(t))
    tol_log = 0.9 * level_tol  # |log(|R|/t)| <= level_tol within rounding

    loops = []
    cell_of = []
    if window is not None:
        x0, x1, y0, y1 = window
        # {|R| >= t} must stay clear of the window frame
        side = np.linspace(0.0, 1.0, 4 * cells)
        frame = np.concatenate(
            [
                x0 + side * (x1 - x0) + 1j * y0,
                x0 + side * (x1 - x0) + 1j * y1,
                x0 + 1j * (y0 + side * (y1 - y0)),
                x1 + 1j * (y0 + side * (y1 - y0)),
            ]
        )
        if np.abs(R.eval(frame, check=False)).max() >= t:
            raise WindowTooSmall("{|R| >= t} touches the window boundary")
        got, clipped, cell = _trace_in_window(
            R, logt, 0.5 * (x0 + x1), 0.5 * (y0 + y1), 0.5 * (x1 - x0), 0.5 * (y1 - y0), cells
        )
        if clipped:
            raise WindowTooSmall("level set touches the window boundary")
        loops = got
        cell_of = [cell] * len(got)
        strict = False
    else:
        strict = True
        for i in range(R.degree):
            center, half = _pole_window(R, t, i)
            for attempt in range(5):
                got, clipped, cell = _trace_in_window(
                    R, logt, center.real, center.imag, half, half, cells
                )
                if not clipped:
                    break
                half *= 1.6
            else:
                raise WindowTooSmall(f"window at pole {i} keeps clipping the level set")
            for v in got:
                if _geom.polyline_diameter(v) >= MIN_LOOP_CELLS * cell:
                    loops.append(v)
                    cell_of.append(cell)

    if not loops:
        raise TraceFailure("no level curves found")

    loops = [
        _project_to_level(R, v, logt, step_cap=2.0 * c)
        for v, c in zip(loops, cell_of)
    ]
    loops = _dedupe(loops, np.array(cell_of))
    loops = [_refine_loop(R, v, logt, tol_log) for v in loops]
    return _build_structure(t, loops, R.poles, strict=strict)


def is_good(R: RationalFunction, t: float, cells: int = 512) -> GoodnessReport:
    """Check d-goodness at level t: critical moduli below t and d components
    with exactly one pole each (both criteria reported)."""
    cd = check_level(R, t)
    offending = [
        (complex(c), float(m))
        for c, m in zip(cd.points, cd.moduli)
        if m >= t
    ]
    L = trace(R, t, cells=cells)
    d = R.degree
    one_each = all(len(c.poles) == 1 for c in L.components)
    good = (L.component_count == d) and not offending and one_each
    return GoodnessReport(
        is_good=good,
        component_count=L.component_count,
        offending_critical_points=offending,
        one_pole_each=one_each,
        lemniscate=L,
    )


def contains_point(L: Lemniscate, z: complex, tol: float = None):
    """Component id containing z, or None when z is outside {|R| >= t}.

    Raises OnBoundary when z is within tol of a traced curve.
    """
    if tol is None:
        tol = 1e-9 * L.scale
    z = complex(z)
    dmin = _geom.min_distance_to_curves(np.array([z]), L.curves)[0]
    if dmin < tol:
        raise OnBoundary(f"point within {tol:g} of a curve")
    containers = [
        i
        for i, v in enumerate(L.curves)
        if _geom.points_in_polygon(np.array([z]), v)[0]
    ]
    if not containers:
        return None
    areas = [abs(_geom.signed_area(L.curves[i])) for i in containers]
    inner = containers[int(np.argmin(areas))]
    if L.depths[inner] % 2 == 1:
        return None
    for cid, comp in enumerate(L.components):
        if comp.outer == inner:
            return cid
    return None


def contains_segment(L: Lemniscate, z0: complex, z1: complex, samples: int = 64) -> bool:
    """True when every sample of [z0, z1] lies in one component of {|R| >= t}."""
    pts = np.linspace(0, 1, samples)
    ids = set()
    for s in pts:
        cid = contains_point(L, (1 - s) * complex(z0) + s * complex(z1))
        if cid is None:
            return False
        ids.add(cid)
    return len(ids) == 1


def export_svg(L: Lemniscate, path, R: RationalFunction = None, size: int = 720,
               zeros_of=None):
    """Write the traced curves (and optionally poles/zeros) as an SVG file."""
    xs = np.concatenate([v.real for v in L.curves])
    ys = np.concatenate([v.imag for v in L.curves])
    x0, x1 = xs.min(), xs.max()
    y0, y1 = ys.min(), ys.max()
    pad = 0.06 * max(x1 - x0, y1 - y0, 1e-9)
    x0, x1, y0, y1 = x0 - pad, x1 + pad, y0 - pad, y1 + pad
    w = x1 - x0
    h = y1 - y0
    sc = size / max(w, h)

    def tx(z):
        return (z.real - x0) * sc, (y1 - z.imag) * sc

    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w * sc:.1f}" '
        f'height="{h * sc:.1f}" viewBox="0 0 {w * sc:.1f} {h * sc:.1f}">',
        '<rect width="100%" height="100%" fill="white"/>',
    ]
    for i, v in enumerate(L.curves):
        pts = " ".join(f"{tx(z)[0]:.2f},{tx(z)[1]:.2f}" for z in v)
        color = "#1f77b4" if L.depths[i] % 2 == 0 else "#9467bd"
        lines.append(
            f'<polygon points="{pts}" fill="none" stroke="{color}" stroke-width="1.2"/>'
        )
    if R is not None:
        for p in R.poles:
            px, py = tx(p)
            lines.append(
                f'<circle cx="{px:.2f}" cy="{py:.2f}" r="3" fill="#d62728"/>'
            )
    if zeros_of is not None:
        for z in zeros_of:
            px, py = tx(complex(z))
            lines.append(
                f'<circle cx="{px:.2f}" cy="{py:.2f}" r="3" fill="#2ca02c"/>'
            )
    lines.append("</svg>")
    with open(path, "w") as f:
        f.write("\n".join(lines) + "\n")
