"""Command-line front end.

Exit codes: 0 for a positive verdict, 1 for a negative one, 2 for bad input.
Reports go to stdout or ``--out``; diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import io
import json
import logging
import math
import os
import sys
from fractions import Fraction

import numpy as np

from . import scalar as S
from .errors import InputError, SpectraKitError
from .fourier import Interval, as_domain, chi, ft
from .geometry import ConvexPolygon, hexagon, octagon, unit_square
from .hsets import h3_enumerate, h3_set, h_enumerate, h_membership, h3_membership, h_set, check_gamma_condition
from .inputs import load_domain, load_job, load_points, load_polygon, load_polytope_any
from .packing import GridSpec, open_rectangle, sum_profile, tiling_check
from .pointsets import PointSet, check_orthogonality, integer_window, lattice_window, write_csv
from .product import (
    extract_factor_spectrum,
    hexagon_dual_basis,
    hexagon_interval_job,
    square_interval_job,
    theorem4_audit,
)
from .serialization import dumps
from .windows import canonical_window, classify_spectral, is_window

log = logging.getLogger("spectra_kit")

EXIT_OK, EXIT_NEGATIVE, EXIT_INPUT = 0, 1, 2

DEFAULT_CONFIG = {
    "mode": "exact",
    "tol": None,
    "grid": {"steps": 40, "box": None},
    "seed": 0,
    "format": None,
    "verbosity": 0,
}


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(f"{self.prog}: {message}")


# -- configuration ------------------------------------------------------------------

def load_config(path) -> dict:
    cfg = json.loads(json.dumps(DEFAULT_CONFIG))
    if path:
        with open(path) as fh:
            user = json.load(fh)
        unknown = set(user) - set(cfg)
        if unknown:
            raise InputError(f"unknown config keys: {sorted(unknown)}")
        for key, val in user.items():
            if key == "grid":
                cfg["grid"].update(val)
            else:
                cfg[key] = val
    if cfg["mode"] not in ("exact", "float"):
        raise InputError("config mode must be 'exact' or 'float'")
    if cfg["format"] not in (None, "json", "csv"):
        raise InputError("config format must be 'json' or 'csv'")
    return cfg


def _effective(args, cfg: dict) -> dict:
    out = dict(cfg)
    for key in ("tol", "seed", "format"):
        val = getattr(args, key, None)
        if val is not None:
            out[key] = val
    out["verbosity"] = max(int(cfg.get("verbosity") or 0), args.verbose)
    return out


# -- small parsers ------------------------------------------------------------------

def _vector(text: str) -> tuple:
    try:
        return tuple(S.parse_scalar(c.strip()) for c in text.split(",") if c.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"cannot parse vector {text!r}: {exc}") from None


def _box_arg(text: str) -> list:
    """``"lo,hi;lo,hi"`` to a list of pairs."""
    out = []
    for side in text.split(";"):
        v = _vector(side)
        if len(v) != 2:
            raise InputError(f"box side {side!r} needs two numbers")
        out.append(v)
    return out


def _radius(text: str) -> float:
    return math.inf if text.strip().lower() in ("inf", "infinity") else float(text)


def _fmt_float(x: float) -> str:
    return format(float(x), ".17g")


# -- subcommands --------------------------------------------------------------------

def cmd_classify(args, cfg):
    A = load_polygon(args.polygon)
    res = classify_spectral(A)
    return dumps(res), EXIT_OK if res.spectral else EXIT_NEGATIVE


def cmd_window(args, cfg):
    A = load_polygon(args.polygon)
    if args.rect:
        hu, hv = _vector(args.rect)
        W = open_rectangle(hu, hv)
        coords = "original" if args.coords == "auto" else args.coords
    else:
        W = canonical_window(A, args.edge)
        coords = args.coords
    check = is_window(A, W, coords=coords, edge_index=args.edge)
    report = {"window": W, "coords": coords, "check": check}
    return dumps(report), EXIT_OK if check.ok else EXIT_NEGATIVE


def cmd_hset(args, cfg):
    P = load_polytope_any(args.polytope)
    planar = isinstance(P, ConvexPolygon)
    H = h_set(P) if planar else h3_set(P)
    if args.families:
        return json.dumps(H.to_json(), indent=2), EXIT_OK
    if args.probe:
        t = _vector(args.probe)
        if len(t) != H.dim:
            raise InputError(f"probe point must have {H.dim} coordinates")
        member = h_membership(H, t) if planar else h3_membership(H, t)
        report = {"point": t, "member": member, "kind": H.kind}
        return dumps(report), EXIT_OK if member else EXIT_NEGATIVE
    if args.radius is None:
        raise InputError("hset needs one of --radius, --probe or --families")
    radius = S.parse_scalar(args.radius)
    pts = h_enumerate(H, radius=radius) if planar else h3_enumerate(H, radius=radius)
    if cfg["format"] == "csv":
        return write_csv(pts), EXIT_OK
    return dumps(pts), EXIT_OK


def cmd_ft_eval(args, cfg):
    dom = as_domain(load_domain(args.domain))
    if args.chi:
        return dumps({"chi": chi(dom), "measure": dom.measure}), EXIT_OK
    if args.points:
        xs = load_points(args.points).points
    elif args.xi:
        xs = [_vector(v) for v in args.xi]
    else:
        raise InputError("ft-eval needs --xi, --points or --chi")
    arr = np.array([[float(c) for c in x] for x in xs], dtype=float).reshape(-1, dom.dim)
    vals = np.atleast_1d(ft(dom, arr))
    if cfg["format"] == "json":
        rows = [{"xi": x, "re": float(v.real), "im": float(v.imag), "abs": float(abs(v))} for x, v in zip(xs, vals)]
        return dumps(rows), EXIT_OK
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([f"xi{i}" for i in range(dom.dim)] + ["re", "im", "abs"])
    for x, v in zip(xs, vals):
        w.writerow([S.format_scalar(c) for c in x] + [_fmt_float(v.real), _fmt_float(v.imag), _fmt_float(abs(v))])
    return buf.getvalue(), EXIT_OK


def cmd_verify_spectrum(args, cfg):
    dom = as_domain(load_domain(args.domain))
    L = load_points(args.points, _box_arg(args.points_box) if args.points_box else None)
    if L.dim != dom.dim:
        raise InputError(f"points have dimension {L.dim}, domain has {dom.dim}")
    box = _box_arg(args.box) if args.box else (cfg["grid"].get("box") or [(0, 1)] * dom.dim)
    steps = args.steps or cfg["grid"].get("steps") or 40
    grid = GridSpec(box, steps, cfg["seed"])
    tol = cfg["tol"] if cfg["tol"] is not None else 5e-3
    R = None if args.trunc_radius is None else _radius(args.trunc_radius)
    tail = args.tail or ("none" if R is not None and math.isinf(R) else "richardson")
    tiling = tiling_check(dom, L, grid, tol=tol, truncation_radius=R, tail_correction=tail)
    orth = check_orthogonality(dom, L, args.orth_tol)
    if args.dump_csv:
        X, sums = sum_profile(dom, L, grid, R)
        with open(args.dump_csv, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow([f"x{i}" for i in range(dom.dim)] + ["sum"])
            for x, s in zip(X, sums):
                w.writerow([_fmt_float(c) for c in x] + [_fmt_float(s)])
    report = {"orthogonality": orth, "tiling": tiling, "ok": orth.ok and tiling.ok}
    return dumps(report), EXIT_OK if report["ok"] else EXIT_NEGATIVE


def _job(args, cfg):
    job = load_job(args.job)
    if args.seed is not None:
        job.seed = args.seed
    if cfg["tol"] is not None:
        job.tol_tile = float(cfg["tol"])
    return job


def cmd_extract(args, cfg):
    samples = extract_factor_spectrum(_job(args, cfg))
    return dumps(samples), EXIT_OK if all(s.ok for s in samples) else EXIT_NEGATIVE


def cmd_audit(args, cfg):
    report = theorem4_audit(_job(args, cfg))
    return dumps(report), EXIT_OK if report.passed else EXIT_NEGATIVE


# -- demo -------------------------------------------------------------------------------

def _demo_rows(seed: int, tol):
    tile_tol = 5e-3 if tol is None else float(tol)
    rows = []

    def row(name, expected, observed, ok):
        rows.append({"check": name, "expected": expected, "observed": observed, "status": "PASS" if ok else "FAIL"})

    for label, A, want_spectral, want_ratio in (
        ("square", unit_square(), True, Fraction(1)),
        ("hexagon(0,1)", hexagon(), True, Fraction(1)),
        ("octagon", octagon(), False, Fraction(7, 6)),
    ):
        res = classify_spectral(A)
        row(f"classify {label}", f"spectral={want_spectral} ratio={want_ratio}",
            f"spectral={res.spectral} ratio={S.format_scalar(res.ratio)}",
            res.spectral == want_spectral and res.ratio == want_ratio)

    hexa = hexagon()
    check = is_window(hexa, canonical_window(hexa))
    row("canonical window of hexagon(0,1)", "certified", "certified" if check.ok else f"witness {check.witness}", check.ok)
    cond = check_gamma_condition(h_set(hexa), lattice_window(hexagon_dual_basis(), [(-3, 4)] * 2))
    row("dual lattice differences avoid H(hexagon)", "0 violators", f"{cond.violator_count} violators", cond.ok)

    grid2 = GridSpec([(0, 1)] * 2, 12, seed)
    t_sq = tiling_check(unit_square(), integer_window(2, 24), grid2, tol=tile_tol)
    row("power(square) + Z^2 tiles", f"dev <= {tile_tol:g}", f"dev {t_sq.max_abs_dev_from_1:.3e}", t_sq.ok)
    Z = PointSet.from_points([(k,) for k in range(-400, 401)], [(-400, 400)])
    t_int = tiling_check(Interval(0, 1), Z, GridSpec([(0, 1)], 200, seed), tol=tile_tol)
    row("power(interval) + Z tiles", f"dev <= {tile_tol:g}", f"dev {t_int.max_abs_dev_from_1:.3e}", t_int.ok)

    for label, job in (
        ("square x interval", square_interval_job(seed=seed, n_samples=8, tol_tile=tile_tol)),
        ("hexagon x interval", hexagon_interval_job(seed=seed, n_samples=8, tol_tile=tile_tol)),
    ):
        audit = theorem4_audit(job)
        failed = [str(s.step) for s in audit.steps if s.passed is False]
        row(f"product audit {label}", "all steps pass", "all steps pass" if not failed else "failed " + ",".join(failed),
            audit.passed)
    return rows


def _table(rows) -> str:
    cols = ("status", "check", "expected", "observed")
    widths = {c: max(len(c), *(len(str(r[c])) for r in rows)) for c in cols}
    line = lambda r: "  ".join(str(r[c]).ljust(widths[c]) for c in cols).rstrip()
    head = {c: c.upper() for c in cols}
    return "\n".join([line(head), line({c: "-" * widths[c] for c in cols})] + [line(r) for r in rows]) + "\n"


def _write_plot_data(outdir: str, seed: int) -> list:
    os.makedirs(outdir, exist_ok=True)
    written = []
    H = h_set(hexagon())
    path = os.path.join(outdir, "h_hexagon_scatter.csv")
    with open(path, "w", newline="") as fh:
        fh.write("x,y\n" + write_csv(h_enumerate(H, radius=3)))
    written.append(path)
    X, sums = sum_profile(unit_square(), integer_window(2, 24), GridSpec([(0, 1)] * 2, 25, seed))
    path = os.path.join(outdir, "tiling_square_heat.csv")
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["x", "y", "sum"])
        for x, s in zip(X, sums):
            w.writerow([_fmt_float(x[0]), _fmt_float(x[1]), _fmt_float(s)])
    written.append(path)
    return written


def cmd_demo(args, cfg):
    rows = _demo_rows(cfg["seed"], cfg["tol"])
    ok = all(r["status"] == "PASS" for r in rows)
    files = _write_plot_data(args.outdir, cfg["seed"]) if args.outdir else []
    if cfg["format"] == "json":
        return json.dumps({"rows": rows, "all_pass": ok, "plot_data": files}, indent=2), EXIT_OK if ok else EXIT_NEGATIVE
    text = _table(rows) + f"\n{sum(r['status'] == 'PASS' for r in rows)}/{len(rows)} checks passed\n"
    for f in files:
        text += f"plot data: {f}\n"
    return text, EXIT_OK if ok else EXIT_NEGATIVE


# -- parser -------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--config", help="JSON config: mode, tol, grid, seed, format, verbosity")
    common.add_argument("--seed", type=int, help="random seed (grid jitter, shift samples)")
    common.add_argument("--tol", type=float, help="tiling tolerance override")
    common.add_argument("--format", choices=("json", "csv"), help="output format where both exist")
    common.add_argument("-v", "--verbose", action="count", default=0, help="log progress to stderr")

    p = _Parser(prog="spectra-kit", description="Spectral sets, tilings, H-sets and windows.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("classify", parents=[common], help="spectral classification of a convex polygon")
    c.add_argument("polygon", help="polygon JSON file")
    c.set_defaults(func=cmd_classify)

    c = sub.add_parser("window", parents=[common], help="build or certify a window")
    c.add_argument("polygon", help="polygon JSON file")
    c.add_argument("--edge", type=int, default=0, help="normalization edge")
    c.add_argument("--rect", help="half-widths 'hu,hv' of an open rectangle to certify instead")
    c.add_argument("--coords", choices=("auto", "canonical", "original"), default="auto",
                   help="frame of --rect: normalized polygon or the file as given")
    c.set_defaults(func=cmd_window)

    c = sub.add_parser("hset", parents=[common], help="enumerate or probe H(A)")
    c.add_argument("polytope", help="polygon or 3D polytope JSON")
    c.add_argument("--radius", help="enumerate points of norm <= radius")
    c.add_argument("--probe", help="membership query 'x,y[,z]'")
    c.add_argument("--families", action="store_true", help="dump the symbolic families as JSON")
    c.set_defaults(func=cmd_hset, format_default="csv")

    c = sub.add_parser("ft-eval", parents=[common], help="evaluate the Fourier transform of a domain")
    c.add_argument("domain", help="domain JSON")
    c.add_argument("--xi", action="append", help="frequency 'a,b'; repeatable")
    c.add_argument("--points", help="CSV of frequencies")
    c.add_argument("--chi", action="store_true", help="estimate the smallest zero norm instead")
    c.set_defaults(func=cmd_ft_eval, format_default="csv")

    c = sub.add_parser("verify-spectrum", parents=[common], help="orthogonality and tiling of a candidate spectrum")
    c.add_argument("--domain", required=True, help="domain JSON")
    c.add_argument("--points", required=True, help="CSV of spectrum points")
    c.add_argument("--points-box", help="validity box of the points 'lo,hi;lo,hi' (default: bounding box)")
    c.add_argument("--box", help="sample grid box 'lo,hi;lo,hi' (default: unit cube)")
    c.add_argument("--steps", type=int, help="grid steps per axis")
    c.add_argument("--trunc-radius", help="sup-norm truncation radius, or 'inf'")
    c.add_argument("--tail", choices=("richardson", "none"), help="tail correction")
    c.add_argument("--orth-tol", type=float, default=1e-9, help="orthogonality tolerance relative to |domain|")
    c.add_argument("--dump-csv", help="write (x, sum) rows here")
    c.set_defaults(func=cmd_verify_spectrum)

    c = sub.add_parser("extract", parents=[common], help="cut-and-project factor spectra of a product job")
    c.add_argument("job", help="job JSON")
    c.set_defaults(func=cmd_extract)

    c = sub.add_parser("audit", parents=[common], help="six-step audit of a product job")
    c.add_argument("job", help="job JSON")
    c.set_defaults(func=cmd_audit)

    c = sub.add_parser("demo", parents=[common], help="deterministic tour of bundled shapes")
    c.add_argument("--outdir", help="directory for CSV plot data")
    c.set_defaults(func=cmd_demo, format_default="csv")
    return p


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
    except _UsageError as exc:
        print(exc, file=stderr)
        return EXIT_INPUT
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    try:
        cfg = _effective(args, load_config(args.config))
        cfg["format"] = cfg["format"] or getattr(args, "format_default", "json")
        handler = logging.StreamHandler(stderr)
        handler.setFormatter(logging.Formatter("%(levelname)s %(message)s"))
        log.handlers[:] = [handler]
        log.setLevel(logging.DEBUG if cfg["verbosity"] >= 2 else logging.INFO if cfg["verbosity"] else logging.WARNING)
        log.info("running %s", args.command)
        mode = S.float_mode() if cfg["mode"] == "float" else contextlib.nullcontext()
        with mode:
            text, code = args.func(args, cfg)
    except (SpectraKitError, ValueError, KeyError, TypeError, OSError, json.JSONDecodeError, ZeroDivisionError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=stderr)
        return EXIT_INPUT
    if not text.endswith("\n"):
        text += "\n"
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    log.info("exit code %d", code)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
