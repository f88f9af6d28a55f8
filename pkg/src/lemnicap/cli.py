"""Command-line front end: tracing, capacities, harmonic measure and the
one-shot verification suites.

Exit codes: 0 all assertions pass, 1 a verified inequality/identity fails
beyond tolerance, 2 numerical failure (tracing, under-resolution).
Fixed default seed keeps CSV/JSON/SVG outputs byte-identical across reruns.
"""
from __future__ import annotations

import argparse
import csv
import json
import os
import sys

from . import bounds, harmonic, lemniscate, schwarz
from .capacity import Boundary, cap_fekete, cap_panel
from .errors import LemnicapError
from .ratfunc import RationalFunction, zeros

DEFAULT_SEED = 0xC0FFEE

SAMPLES = {
    "disk": RationalFunction([1.0], [2.0]),
    "twopole": RationalFunction([2.0, -2.0], [1.0, 1.0]),
    "m2": RationalFunction([1.0, -1.0], [1.0, -1.0]),
}


def parse_rational(text: str) -> RationalFunction:
    """Inline JSON, a file path, or a named sample (disk, twopole, m2,
    counterexample:P)."""
    if text in SAMPLES:
        return SAMPLES[text]
    if text.startswith("counterexample:"):
        p = float(text.split(":", 1)[1])
        return bounds.counterexample_function(1.0, 0.75, p)
    if os.path.exists(text):
        with open(text) as f:
            return RationalFunction.from_json(f.read())
    return RationalFunction.from_json(text)


def _write_json(path, obj):
    with open(path, "w") as f:
        json.dump(obj, f, sort_keys=True, indent=1)
        f.write("\n")


def _write_csv(path, rows):
    with open(path, "w", newline="") as f:
        csv.writer(f).writerows(rows)


def _outdir(args):
    out = args.out or "."
    os.makedirs(out, exist_ok=True)
    return out


def cmd_trace(args) -> int:
    R = parse_rational(args.r)
    window = None
    if args.window:
        window = tuple(float(x) for x in args.window.split(","))
        if len(window) != 4:
            raise SystemExit("--window needs x0,x1,y0,y1")
    L = lemniscate.trace(R, args.t, window=window, cells=args.cells)
    good = lemniscate.is_good(R, args.t, cells=args.cells)
    out = _outdir(args)
    finite, _m = zeros(R)
    lemniscate.export_svg(L, os.path.join(out, "lemniscate.svg"), R=R, zeros_of=finite)
    _write_json(os.path.join(out, "lemniscate.json"), L.to_json_obj())
    print(f"level {args.t}: {len(L.curves)} curves, {L.component_count} components")
    print(f"pole assignment: {L.pole_assignment}")
    print(f"good: {good.is_good} (offending critical points: "
          f"{len(good.offending_critical_points)})")
    return 0


def cmd_cap(args) -> int:
    R = parse_rational(args.r)
    g = lemniscate.is_good(R, args.t, cells=args.cells)
    L = g.lemniscate
    rows = [["what", "method", "panels", "value", "robin_constant", "error_indicator"]]
    printable = []
    for cid, comp in enumerate(L.components):
        curves = [L.curves[comp.outer]]
        est, _ = cap_panel(Boundary(curves), panels=args.panels)
        fek = cap_fekete(Boundary(curves), n=args.fekete_n)
        rows.append([f"component_{cid}", "PANEL", args.panels, f"{est.value!r}",
                     f"{est.robin_constant!r}", f"{est.error_indicator!r}"])
        rows.append([f"component_{cid}", "FEKETE", args.fekete_n, f"{fek.value!r}",
                     f"{fek.robin_constant!r}", f"{fek.error_indicator!r}"])
        printable.append((f"component {cid} (pole {comp.poles})", est.value, fek.value))
    outer = L.outer_curves()
    est, _ = cap_panel(Boundary(outer), panels=max(args.panels, 128 * len(outer)))
    fek = cap_fekete(Boundary(outer), n=args.fekete_n)
    rows.append(["whole", "PANEL", args.panels, f"{est.value!r}",
                 f"{est.robin_constant!r}", f"{est.error_indicator!r}"])
    rows.append(["whole", "FEKETE", args.fekete_n, f"{fek.value!r}",
                 f"{fek.robin_constant!r}", f"{fek.error_indicator!r}"])
    printable.append(("whole lemniscate", est.value, fek.value))
    _write_csv(os.path.join(_outdir(args), "capacity.csv"), rows)
    for name, vp, vf in printable:
        print(f"{name}: PANEL {vp:.6g}  FEKETE {vf:.6g}  "
              f"({abs(vp - vf) / vp:.2%} apart)")
    return 0


def cmd_hm(args) -> int:
    R = parse_rational(args.r)
    g = lemniscate.is_good(R, args.t, cells=args.cells)
    L, part = harmonic.make_arc_partition(g.lemniscate, args.arcs)
    if args.source == "inf":
        source = None
    else:
        re, im = (float(x) for x in args.source.split(","))
        source = complex(re, im)

    if source is not None:
        cid = lemniscate.contains_point(L, source)
    else:
        cid = None
    if cid is not None:
        segs = harmonic.component_segments(L, part, cid)
        rep = harmonic.wos(segs, source, args.walks, args.seed)
    else:
        pivot = R.poles[0]
        segs = harmonic.transported_segments(L, part, pivot)
        curves = list(L.curves)
        _moved, src = harmonic.moebius_transport(curves, source, pivot)
        rep = harmonic.wos(segs, src, args.walks, args.seed)
    obj = rep.to_json_obj()
    obj["arcs"] = part.to_json_obj()
    _write_json(os.path.join(_outdir(args), "hm.json"), obj)
    for a, est, se in zip(part.arcs, rep.estimates, rep.std_errors):
        print(f"curve {a.curve} [{a.s0:.3f},{a.s1:.3f}): {est:.5f} +- {se:.5f}")
    return 0


def _verify_reflection(R, args, out):
    rep = harmonic.verify_reflection(
        R, arcs_per_curve=args.arcs, walks=args.walks, seed=args.seed,
        cells=args.cells,
    )
    _write_json(os.path.join(out, "reflection.json"), rep.to_json_obj())
    z = rep.z_scores()
    worst = max(float(v.max()) for v in z.values())
    print(f"reflection: max|A-B|={rep.max_AB:.2e} max|A-C|={rep.max_AC:.2e} "
          f"max|B-C|={rep.max_BC:.2e} worst z={worst:.2f} "
          f"-> {'PASS' if rep.passed else 'FAIL'}")
    return rep.passed


def _verify_energy(R, args, out):
    rep = harmonic.verify_energy_identity(
        R, walks=args.walks, seed=args.seed, cells=args.cells
    )
    _write_json(os.path.join(out, "energy.json"), rep.to_json_obj())
    ok = (
        rep.max_self_error <= 2e-2
        and rep.max_cross_error <= 2e-2
        and rep.total_error <= 5e-2
    )
    print(f"energy: total {rep.total:.4f} vs {rep.total_expected:.4f} "
          f"(self err {rep.max_self_error:.3f}, cross err {rep.max_cross_error:.3f}) "
          f"-> {'PASS' if ok else 'FAIL'}")
    return ok


def _verify_lower(R, args, out):
    rep = bounds.verify_lower_bounds(R, panels=args.panels, cells=args.cells)
    _write_csv(os.path.join(out, "lower_bounds.csv"), rep.csv_rows())
    print(f"lower bounds: cap(K)={rep.cap_whole:.5g} >= {rep.product_bound:.5g}; "
          f"{len(rep.per_component)} components "
          f"-> {'PASS' if rep.passed else 'FAIL'}")
    return rep.passed


def _verify_upper(R, args, out):
    ok = True
    rows = [["component", "cap", "residue", "r_star", "constant", "bound", "slack"]]
    g = lemniscate.is_good(R, 1.0, cells=args.cells)
    for i in range(R.degree):
        cert = bounds.certify_injectivity_radius(R, i)
        rep = bounds.verify_upper_bound(R, i, certificate=cert, panels=args.panels,
                                        goodness=g)
        rows.append([i, f"{rep.cap!r}", f"{rep.residue_modulus!r}",
                     f"{rep.r_star!r}", f"{rep.constant!r}", f"{rep.bound!r}",
                     f"{rep.slack!r}"])
        ok = ok and rep.passed
        print(f"upper bound comp {i}: cap {rep.cap:.5g} <= "
              f"c({rep.r_star:.3g})*|a| = {rep.bound:.5g} "
              f"-> {'PASS' if rep.passed else 'FAIL'}")
    _write_csv(os.path.join(out, "upper_bound.csv"), rows)
    return ok


def _verify_schwarz(R, args, out):
    sw = schwarz.sweep_F(R, n_levels=args.levels, tmin=args.tmin, tmax=args.tmax,
                         panels=args.panels, cells=args.cells)
    _write_csv(os.path.join(out, "schwarz.csv"), sw.csv_rows())
    mono = sw.monotone_within()
    plateau_ok = abs(sw.F[0] - sw.plateau_target) <= schwarz.PLATEAU_TOL
    print(f"schwarz: F monotone={mono}, F({sw.levels[0]:.2g})={sw.F[0]:.5g} "
          f"vs |c_m|^(1/m)={sw.plateau_target:.5g}, plateau ends ~{sw.plateau_end:.3g} "
          f"-> {'PASS' if mono and plateau_ok else 'FAIL'}")
    return mono and plateau_ok


def _verify_epsilon(args, out):
    R = parse_rational(args.eps_r) if args.eps_r else RationalFunction([3.0], [1.0])
    p = complex(args.eps_p) if args.eps_p else 0j
    eps_list = [float(x) for x in args.eps.split(",")]
    rep = bounds.epsilon_sweep(R, p, eps_list, panels=args.panels, cells=args.cells)
    _write_csv(os.path.join(out, "epsilon.csv"), rep.csv_rows())
    ok = rep.ratio_spread < 0.2 and rep.bound_ok
    print(f"epsilon sweep: cap/eps in "
          f"[{min(r.ratio for r in rep.rows):.5g}, {max(r.ratio for r in rep.rows):.5g}] "
          f"(spread {rep.ratio_spread:.1%}), bound ok={rep.bound_ok} "
          f"-> {'PASS' if ok else 'FAIL'}")
    return ok


def _verify_counterexample(args, out):
    p_list = [float(x) for x in args.p.split(",")]
    rep = bounds.counterexample_experiment(args.a, args.eta, p_list,
                                           panels=args.panels, cells=args.cells)
    _write_csv(os.path.join(out, "counterexample.csv"), rep.csv_rows())
    ratios = ", ".join(f"{r.ratio_over_residue:.4g}" for r in rep.rows)
    print(f"counterexample (a={args.a}, eta={args.eta}): cap/|a| = {ratios} "
          f"-> {'PASS' if rep.passed else 'FAIL'}")
    return rep.passed


def cmd_verify(args) -> int:
    out = _outdir(args)
    R = parse_rational(args.r)
    which = args.which
    results = []
    if which in ("reflection", "all"):
        results.append(_verify_reflection(R, args, out))
    if which in ("energy", "all"):
        results.append(_verify_energy(R, args, out))
    if which in ("lower", "all"):
        results.append(_verify_lower(R, args, out))
    if which in ("upper", "all"):
        results.append(_verify_upper(R, args, out))
    if which in ("schwarz", "all"):
        results.append(_verify_schwarz(R, args, out))
    if which in ("epsilon", "all"):
        results.append(_verify_epsilon(args, out))
    if which in ("counterexample", "all"):
        results.append(_verify_counterexample(args, out))
    return 0 if all(results) else 1


def cmd_sweep(args) -> int:
    R = parse_rational(args.r)
    out = _outdir(args)
    sw = schwarz.sweep_F(R, n_levels=args.levels, tmin=args.tmin, tmax=args.tmax,
                         panels=args.panels, cells=args.cells, keep_outlines=True)
    _write_csv(os.path.join(out, "sweep.csv"), sw.csv_rows())
    schwarz.overlay_svg(sw, os.path.join(out, "sweep.svg"))
    print(f"m={sw.m} |c_m|^(1/m)={sw.plateau_target:.6g} "
          f"plateau up to ~{sw.plateau_end:.3g}; monotone={sw.monotone_within()}")
    return 0


def build_parser():
    ap = argparse.ArgumentParser(
        prog="lemnicap",
        description="Lemniscates, capacities and harmonic measures of rational functions",
    )
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--seed", type=lambda s: int(s, 0), default=DEFAULT_SEED)
    shared.add_argument("--out", default=None, help="output directory")
    shared.add_argument("--json", action="store_true",
                        help="reserved; outputs are JSON/CSV/SVG")
    sub = ap.add_subparsers(dest="command", required=True)

    common = dict(cells=384, panels=256)

    p = sub.add_parser("trace", parents=[shared],
                       help="trace a lemniscate, write SVG + JSON")
    p.add_argument("--r", default="twopole")
    p.add_argument("--t", type=float, default=1.0)
    p.add_argument("--window", default=None, help="x0,x1,y0,y1")
    p.add_argument("--cells", type=int, default=512)
    p.set_defaults(func=cmd_trace)

    p = sub.add_parser("cap", parents=[shared], help="capacity table (PANEL + FEKETE)")
    p.add_argument("--r", default="twopole")
    p.add_argument("--t", type=float, default=1.0)
    p.add_argument("--cells", type=int, default=common["cells"])
    p.add_argument("--panels", type=int, default=common["panels"])
    p.add_argument("--fekete-n", dest="fekete_n", type=int, default=160)
    p.set_defaults(func=cmd_cap)

    p = sub.add_parser("hm", parents=[shared], help="harmonic measure of arcs from a source")
    p.add_argument("--r", default="twopole")
    p.add_argument("--t", type=float, default=1.0)
    p.add_argument("--source", default="inf", help="'re,im' or 'inf'")
    p.add_argument("--arcs", type=int, default=4, help="arcs per curve")
    p.add_argument("--walks", type=int, default=100_000)
    p.add_argument("--cells", type=int, default=common["cells"])
    p.set_defaults(func=cmd_hm)

    p = sub.add_parser("verify", parents=[shared], help="run a theorem verification suite")
    p.add_argument("which", choices=["reflection", "energy", "lower", "upper",
                                     "schwarz", "epsilon", "counterexample", "all"])
    p.add_argument("--r", default="twopole")
    p.add_argument("--arcs", type=int, default=4)
    p.add_argument("--walks", type=int, default=100_000)
    p.add_argument("--cells", type=int, default=common["cells"])
    p.add_argument("--panels", type=int, default=common["panels"])
    p.add_argument("--levels", type=int, default=24)
    p.add_argument("--tmin", type=float, default=1e-3)
    p.add_argument("--tmax", type=float, default=0.98)
    p.add_argument("--a", type=float, default=1.0)
    p.add_argument("--eta", type=float, default=0.75)
    p.add_argument("--p", default="100,1000,10000")
    p.add_argument("--eps", default="0.1,0.01,0.001")
    p.add_argument("--eps-r", dest="eps_r", default=None,
                   help="base function for the epsilon sweep (default 1/(z-3))")
    p.add_argument("--eps-p", dest="eps_p", default=None,
                   help="added pole location (default 0)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", parents=[shared], help="capacity monotonicity sweep, CSV + SVG")
    p.add_argument("--r", default="twopole")
    p.add_argument("--levels", type=int, default=24)
    p.add_argument("--tmin", type=float, default=1e-3)
    p.add_argument("--tmax", type=float, default=0.98)
    p.add_argument("--cells", type=int, default=common["cells"])
    p.add_argument("--panels", type=int, default=common["panels"])
    p.set_defaults(func=cmd_sweep)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except LemnicapError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
