"""Command-line front end.

Every command writes plot-ready rows ``(x, curve_id, value, error_estimate)``
as CSV (run metadata in a leading ``#`` comment line) or JSON. Output
bytes depend only on the arguments, never on thread count or timing.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import __version__, laplace, montecarlo, saturation, thermo, validation
from .errors import QuadratureError, SweepError

SCHEMA_VERSION = 1


# --------------------------------------------------------------------------
# grids and serialisation
# --------------------------------------------------------------------------


def lambda_grid(lo: float, hi: float, points: int, log: bool) -> list[float]:
    if points < 1:
        raise ValueError("need at least one grid point")
    if hi < lo:
        raise ValueError("lambda-max must be >= lambda-min")
    if log:
        if lo <= 0:
            raise ValueError("log grid needs lambda-min > 0")
        grid = np.geomspace(lo, hi, points)
    else:
        grid = np.linspace(lo, hi, points)
    return [float(v) for v in grid]


def parse_s_grid(text: str) -> list[float]:
    """``start:stop:count`` (inclusive, linear) or a comma-separated list."""
    if ":" in text:
        start, stop, count = text.split(":")
        return [float(v) for v in np.linspace(float(start), float(stop), int(count))]
    vals = [float(v) for v in text.split(",") if v.strip()]
    if not vals:
        raise ValueError("empty s grid")
    return vals


def fmt(x) -> str:
    if x is None:
        return ""
    x = float(x)
    if math.isnan(x):
        return "nan"
    return format(x, ".17g")


def render(rows, columns, run_spec, fmt_name: str) -> str:
    if fmt_name == "json":
        doc = {
            "schema_version": SCHEMA_VERSION,
            "run_spec": run_spec,
            "columns": columns,
            "rows": [[r[0], r[1], float(r[2]), None if r[3] is None else float(r[3])]
                     for r in rows],
        }
        return json.dumps(doc, indent=1, sort_keys=True) + "\n"
    buf = io.StringIO()
    buf.write("# " + json.dumps({"schema_version": SCHEMA_VERSION, "run_spec": run_spec},
                                sort_keys=True) + "\n")
    buf.write(",".join(columns) + "\n")
    for x, curve, value, err in rows:
        buf.write(f"{fmt(x)},{curve},{fmt(value)},{fmt(err)}\n")
    return buf.getvalue()


def read_rows(text: str):
    """Parse CSV or JSON output back into (run_spec, rows)."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        doc = json.loads(text)
        return doc["run_spec"], [tuple(r) for r in doc["rows"]]
    lines = text.splitlines()
    meta = json.loads(lines[0][2:])
    rows = []
    for line in lines[2:]:
        x, curve, value, err = line.split(",")
        rows.append((float(x), curve, float(value), float(err) if err else None))
    return meta["run_spec"], rows


def _write(text: str, out: str):
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _pool_map(fn, items, threads):
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


# --------------------------------------------------------------------------
# curve builders
# --------------------------------------------------------------------------


def eta0_rows(lams):
    return [(lam, "eta0", laplace.eta0(lam), 0.0) for lam in lams]


def laplace_rows(lams):
    return [(lam, "laplace", laplace.lp_energy_thermodynamic(lam), 0.0) for lam in lams]


def quadrature_rows(n, lams, method, threads):
    res = thermo.sweep(n, lams, method, threads=threads)
    return [(r.lam, f"{method}_N{n}", r.normalized_shift, r.error_estimate) for r in res]


def mc_rows(n, lams, seed, sweeps, chains, threads):
    burn = max(1000, sweeps // 50)

    def one(item):
        i, lam = item
        cfg = montecarlo.McConfig(n, lam, sweeps=sweeps + burn, burn_in=burn,
                                  seed=seed + i, chains=chains)
        return montecarlo.run_chain(cfg)

    res = _pool_map(one, enumerate(lams), threads)
    for i, (lam, e) in enumerate(zip(lams, res)):
        if not e.ok:
            print(f"warning: lambda[{i}]={lam:g}: " + "; ".join(e.diagnostics),
                  file=sys.stderr)
    return [(lam, f"mc_N{n}", e.shift_mean, e.stderr) for lam, e in zip(lams, res)]


def saturation_rows(ns, s_grid):
    rows = []
    for n in ns:
        for r in saturation.sweep_saturation(n, s_grid):
            rows.append((r.s, f"sat_N{n}", r.shift_sat, 0.0))
    return rows


def fig2_rows(lams, threads):
    rows = laplace_rows(lams)
    rows += quadrature_rows(10, lams, "exact", threads)
    rows += quadrature_rows(10, lams, "gauss", threads)
    rows += quadrature_rows(100, lams, "gauss", threads)
    rows += eta0_rows(lams)
    return rows


def fig3_rows(s_grid):
    rows = saturation_rows((100, 1000), s_grid)
    rows += [(s, "omega_min", -1.0, 0.0) for s in s_grid]
    rows += [(s, "omega_iso", -math.sqrt(0.5), 0.0) for s in s_grid]
    return rows


# --------------------------------------------------------------------------
# argument parsing
# --------------------------------------------------------------------------


def _add_output(p):
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", default="-", help="output path ('-' for stdout)")
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1)


def _add_lambda_grid(p, lo=0.05, hi=20.0, points=60, log=True):
    p.add_argument("--lambda-min", type=float, default=lo)
    p.add_argument("--lambda-max", type=float, default=hi)
    p.add_argument("--lambda-points", type=int, default=points)
    p.add_argument("--log-grid", action=argparse.BooleanOptionalAction, default=log)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="cavity-polymer",
        description="Alignment transition of planar dipoles in a single-mode cavity.")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eta0", help="order parameter eta0(lambda)")
    _add_lambda_grid(p)
    _add_output(p)

    p = sub.add_parser("lp-energy", help="normalised lower-polariton shift vs lambda")
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--method", choices=("laplace", "gauss", "exact", "mc"), default="gauss")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--sweeps", type=int, default=200_000, help="MC sweeps per chain")
    p.add_argument("--chains", type=int, default=4)
    _add_lambda_grid(p)
    _add_output(p)

    p = sub.add_parser("saturation", help="saturated lower-polariton shift vs s")
    p.add_argument("--n", type=int, nargs="+", default=[100])
    p.add_argument("--s-grid", default="0.01:0.5:50")
    _add_output(p)

    p = sub.add_parser("reproduce-fig2", help="all lower-polariton curves and eta0")
    _add_lambda_grid(p)
    _add_output(p)

    p = sub.add_parser("reproduce-fig3", help="saturation curves for N=100 and N=1000")
    p.add_argument("--s-grid", default="0.01:0.5:50")
    _add_output(p)

    p = sub.add_parser("validate", help="cross-method consistency report (JSON)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mc-sweeps", type=int, default=1_000_000)
    p.add_argument("--out", default="-")
    p.add_argument("--inject-critical-lambda", type=float, default=None,
                   help=argparse.SUPPRESS)
    return ap


def _run_spec(args) -> dict:
    spec = {k: v for k, v in sorted(vars(args).items())
            if k not in ("out", "threads", "format") and v is not None}
    spec["version"] = __version__
    return spec


def _validate(args) -> int:
    critical = (laplace.CRITICAL_LAMBDA if args.inject_critical_lambda is None
                else args.inject_critical_lambda)
    checks = validation.run_all(seed=args.seed, mc_sweeps=args.mc_sweeps,
                                critical_lambda=critical)
    gating = [c for c in checks if c.gating]
    report = {
        "schema_version": SCHEMA_VERSION,
        "run_spec": _run_spec(args),
        "passed": all(c.passed for c in gating),
        "failures": [c.name for c in gating if not c.passed],
        "checks": [c.as_dict() for c in checks],
    }
    _write(json.dumps(report, indent=1, sort_keys=True) + "\n", args.out)
    return 0 if report["passed"] else 1


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _dispatch(args)
    except (SweepError, QuadratureError, ValueError) as exc:
        print(f"cavity-polymer: error: {exc}", file=sys.stderr)
        return 2


def _dispatch(args) -> int:
    if args.command == "validate":
        return _validate(args)

    threads = max(1, args.threads)
    if args.command in ("reproduce-fig3", "saturation"):
        s_grid = parse_s_grid(args.s_grid)
        rows = (fig3_rows(s_grid) if args.command == "reproduce-fig3"
                else saturation_rows(args.n, s_grid))
        columns = ["s", "curve_id", "value", "error_estimate"]
    else:
        lams = lambda_grid(args.lambda_min, args.lambda_max, args.lambda_points,
                           args.log_grid)
        if args.command == "eta0":
            rows = eta0_rows(lams)
        elif args.command == "reproduce-fig2":
            rows = fig2_rows(lams, threads)
        elif args.method == "laplace":
            rows = laplace_rows(lams)
        elif args.method == "mc":
            rows = mc_rows(args.n, lams, args.seed, args.sweeps, args.chains, threads)
        else:
            rows = quadrature_rows(args.n, lams, args.method, threads)
        columns = ["lambda", "curve_id", "value", "error_estimate"]

    order = {}
    for r in rows:
        order.setdefault(r[1], len(order))
    rows.sort(key=lambda r: (order[r[1]], r[0]))
    _write(render(rows, columns, _run_spec(args), args.format), args.out)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
