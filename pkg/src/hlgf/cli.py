"""Command-line interface: ``hlgf eval | sweep | table | bench``.

Exit status is 0 on success, 1 on a numerical failure and 2 on a usage error.
``HLGF_MAX_EVALS`` in the environment caps every quadrature budget.
"""
import argparse
import csv
import io
import json
import math
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace

import numpy as np

from .contour import DEFAULT_PARAMS, GreenQuery, LatticeModel, classify, green
from .errors import HLGFError
from .levin import bessel_power_problem, levin_green, levin_integrate
from .oracle import BZOracleConfig, bz_green, time_green
from .quadrature import QuadConfig, integrate_finite
from .reference_values import REFERENCE_VALUES
from .specfun import bessel_j

EXIT_OK, EXIT_NUMERIC, EXIT_USAGE = 0, 1, 2
TABLE_TOLERANCE = 1e-9
METHODS = ("contour", "levin", "bz", "time")


class UsageError(Exception):
    pass


# ------------------------------------------------------------------ parsing

def _ints(text):
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _floats(text):
    try:
        return tuple(float(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _omega_range(text):
    parts = text.split(":")
    try:
        lo, hi, steps = float(parts[0]), float(parts[1]), int(parts[2])
    except (IndexError, ValueError):
        raise argparse.ArgumentTypeError(f"expected MIN:MAX:STEPS, got {text!r}")
    if len(parts) != 3 or steps < 1 or lo > hi:
        raise argparse.ArgumentTypeError(f"need MIN <= MAX and STEPS >= 1, got {text!r}")
    return lo, hi, steps


def _common_parser():
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("-d", type=int, help="lattice dimension")
    p.add_argument("--omegas", type=_floats, help="couplings, e.g. 1,0.5,0.25 (default all 1)")
    p.add_argument("--r", type=_ints, help="lattice vector, e.g. 1,1,0")
    p.add_argument("--method", choices=METHODS, default="contour")
    p.add_argument("--tol", type=float, default=1e-12, help="relative tolerance (default 1e-12)")
    p.add_argument("--split-T", type=float, default=DEFAULT_PARAMS.split_T, dest="split_T")
    p.add_argument("--eta", type=float, default=None,
                   help=f"imaginary shift for --method bz, extrapolated from eta and eta/2 "
                        f"(default {BZOracleConfig.eta} with four levels)")
    p.add_argument("--t-max", type=float, default=1000.0, dest="t_max",
                   help="cutoff for --method time/levin")
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.add_argument("--out", help="write output to PATH instead of stdout")
    return p


def build_parser():
    common = _common_parser()
    parser = argparse.ArgumentParser(
        prog="hlgf", description="Hypercubic lattice Green functions G_r(omega).")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", parents=[common], help="evaluate one G_r(omega)")
    p.add_argument("--omega", type=float, required=True)

    p = sub.add_parser("sweep", parents=[common], help="CSV over a frequency grid")
    p.add_argument("--omega-range", type=_omega_range, required=True, dest="omega_range",
                   metavar="MIN:MAX:STEPS")
    p.add_argument("--jobs", type=int, default=1, help="worker processes")

    p = sub.add_parser("table", parents=[common], help="regression against reference values")
    p.add_argument("--perturb", type=float, default=0.0, help=argparse.SUPPRESS)

    sub.add_parser("bench", parents=[common], help="effort comparison on a d=4 problem")
    return parser


def _quad_config(tol):
    if not tol > 0:
        raise UsageError("--tol must be positive")
    max_evals = QuadConfig.max_evals
    env = os.environ.get("HLGF_MAX_EVALS")
    if env:
        try:
            max_evals = int(env)
        except ValueError:
            raise UsageError(f"HLGF_MAX_EVALS must be an integer, got {env!r}")
    try:
        return QuadConfig(abs_tol=0.1 * tol, rel_tol=tol, max_evals=max_evals)
    except ValueError as exc:
        raise UsageError(str(exc))


def _model(args):
    """Lattice from ``-d``/``--omegas``/``--r``; the dimension must agree."""
    dims = {name: n for name, n in (("-d", args.d),
                                    ("--omegas", args.omegas and len(args.omegas)),
                                    ("--r", args.r and len(args.r))) if n}
    if len(set(dims.values())) > 1:
        raise UsageError("dimension mismatch: " + ", ".join(f"{k} gives {v}" for k, v in dims.items()))
    if not dims:
        raise UsageError("give -d, --omegas or --r")
    d = next(iter(dims.values()))
    try:
        return LatticeModel(args.omegas or (1.0,) * d)
    except ValueError as exc:
        raise UsageError(str(exc))


def _query(args, omega):
    model = _model(args)
    if args.r is None:
        raise UsageError("--r is required")
    return GreenQuery(model, args.r, omega)


def _params(args):
    try:
        return replace(DEFAULT_PARAMS, split_T=args.split_T)
    except ValueError as exc:
        raise UsageError(str(exc))


# ------------------------------------------------------------------ evaluation

def evaluate(query, method="contour", params=DEFAULT_PARAMS, cfg=QuadConfig(), eta=None,
             t_max=1000.0):
    """One record ``{omega, r, re, im, regime, evals, err_estimate}``."""
    regime = classify(query, params).value
    if method == "contour":
        g = green(query, params, cfg)
        value, evals, err = g.value, g.evals, g.err_estimate
    elif method == "levin":
        value, err = levin_green(query, t_max=t_max, cfg=cfg)
        evals = 0
    elif method == "bz":
        # An explicit shift gets the two-level (eta, eta/2) linear extrapolation;
        # deeper levels at small eta exceed the grid budget.
        bz_cfg = BZOracleConfig() if eta is None else BZOracleConfig(eta=eta, levels=2)
        value, evals, err = bz_green(query, bz_cfg), 0, math.nan
    elif method == "time":
        res = time_green(query, t_max, cfg)
        value, evals, err = res.value, res.evals, res.err_estimate + res.tail_bound
    else:
        raise ValueError(f"unknown method {method!r}")
    return {"omega": query.omega, "r": list(query.r), "re": value.real, "im": value.imag,
            "regime": regime, "evals": int(evals), "err_estimate": float(err)}


def _fmt(x):
    return f"{x:.12g}"


def _emit(text, out):
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_eval(args):
    query = _query(args, args.omega)
    rec = evaluate(query, args.method, _params(args), _quad_config(args.tol), args.eta, args.t_max)
    if args.json:
        text = json.dumps(rec) + "\n"
    else:
        r = ",".join(str(x) for x in rec["r"])
        text = (f"omega  {_fmt(rec['omega'])}\nr      {r}\nre     {_fmt(rec['re'])}\n"
                f"im     {_fmt(rec['im'])}\nregime {rec['regime']}\nevals  {rec['evals']}\n"
                f"err    {_fmt(rec['err_estimate'])}\n")
    _emit(text, args.out)
    return EXIT_OK


SWEEP_HEADER = ("omega", "re", "im", "regime", "evals", "err")


def sweep_grid(lo, hi, steps):
    if steps == 1:
        return [lo]
    return [lo + (hi - lo) * k / (steps - 1) for k in range(steps)]


def _sweep_row(job):
    query, method, params, cfg, eta, t_max = job
    try:
        rec = evaluate(query, method, params, cfg, eta, t_max)
    except HLGFError as exc:
        return [repr(query.omega), "nan", "nan", classify(query, params).value, "0", "nan"], str(exc)
    return [repr(rec["omega"]), repr(rec["re"]), repr(rec["im"]), rec["regime"],
            str(rec["evals"]), repr(rec["err_estimate"])], None


def format_csv(rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SWEEP_HEADER)
    w.writerows(rows)
    return buf.getvalue()


def cmd_sweep(args):
    lo, hi, steps = args.omega_range
    params, cfg = _params(args), _quad_config(args.tol)
    jobs = [(_query(args, w), args.method, params, cfg, args.eta, args.t_max)
            for w in sweep_grid(lo, hi, steps)]
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            results = list(pool.map(_sweep_row, jobs))
    else:
        results = [_sweep_row(j) for j in jobs]
    for (row, err) in results:
        if err:
            print(f"hlgf sweep: omega={row[0]}: {err}", file=sys.stderr)
    _emit(format_csv([row for row, _ in results]), args.out)
    return EXIT_OK


def run_table(params=DEFAULT_PARAMS, cfg=QuadConfig(), perturb=0.0):
    """Recompute every reference value; a list of result dicts."""
    out = []
    for ref in REFERENCE_VALUES:
        model = LatticeModel((1.0 + perturb,) * ref.d)
        query = GreenQuery(model, ref.r, ref.omega)
        value = green(query, params, cfg).value
        out.append({"name": ref.name, "computed": [value.real, value.imag],
                    "reference": [float(ref.re), float(ref.im)],
                    "delta": abs(value - ref.value)})
    return out


def cmd_table(args):
    rows = run_table(_params(args), _quad_config(args.tol), args.perturb)
    failed = [r for r in rows if not r["delta"] <= TABLE_TOLERANCE]
    if args.json:
        text = json.dumps(rows, indent=1) + "\n"
    else:
        lines = [f"{'name':<14} {'computed':>40} {'reference':>40} {'|delta|':>10}"]
        for r in rows:
            c = complex(*r["computed"])
            ref = complex(*r["reference"])
            mark = "" if r["delta"] <= TABLE_TOLERANCE else "  FAIL"
            lines.append(f"{r['name']:<14} {_fmt(c.real):>19} {_fmt(c.imag):>19}i "
                         f"{_fmt(ref.real):>19} {_fmt(ref.imag):>19}i {r['delta']:10.2e}{mark}")
        lines.append(f"{len(rows) - len(failed)}/{len(rows)} within {TABLE_TOLERANCE:g}")
        text = "\n".join(lines) + "\n"
    _emit(text, args.out)
    return EXIT_NUMERIC if failed else EXIT_OK


BENCH_QUERY = GreenQuery(LatticeModel.isotropic(4), (1, 2, 2, 3), 1.0)
BENCH_NAIVE_EVALS = 50_000
BENCH_NAIVE_T_MAX = 10_000.0


def run_bench(cfg=QuadConfig()):
    out = {}
    t0 = time.perf_counter()
    g3 = green(BENCH_QUERY, replace(DEFAULT_PARAMS, split_T=3.0), cfg)
    g2 = green(BENCH_QUERY, replace(DEFAULT_PARAMS, split_T=2.0), cfg)
    out["contour"] = {
        "value": [g3.value.real, g3.value.imag],
        "evals": g3.evals,
        "evals_by_piece": {k: v.evals for k, v in g3.pieces.items()},
        "split_T_disagreement": abs(g3.value - g2.value),
        "seconds": time.perf_counter() - t0,
    }
    t0 = time.perf_counter()
    naive_cfg = replace(cfg, max_evals=BENCH_NAIVE_EVALS)
    naive = time_green(BENCH_QUERY, BENCH_NAIVE_T_MAX, naive_cfg, partial_ok=True)
    out["naive"] = {
        "value": [naive.value.real, naive.value.imag],
        "evals": naive.evals,
        "relative_error": abs(naive.value - g3.value) / abs(g3.value),
        "seconds": time.perf_counter() - t0,
    }
    out["levin"] = levin_demo()
    return out


def levin_demo(ms=(11, 21)):
    """``int_10^100 e^{1.5it} J_0(t)^4 dt`` by Levin (5-term basis) vs adaptive quadrature."""
    problem = bessel_power_problem(4, 1.5, 10.0, 100.0)
    exact = integrate_finite(lambda t: np.exp(1.5j * t) * bessel_j(0, t) ** 4, 10.0, 100.0,
                             QuadConfig(abs_tol=1e-15, rel_tol=1e-13)).value
    return {"reference": [exact.real, exact.imag],
            "abs_error": {str(m): abs(levin_integrate(problem, m) - exact) for m in ms}}


def cmd_bench(args):
    res = run_bench(_quad_config(args.tol))
    if args.json:
        text = json.dumps(res, indent=1) + "\n"
    else:
        c, n, lv = res["contour"], res["naive"], res["levin"]
        text = (f"contour: evals={c['evals']} {c['evals_by_piece']} "
                f"|G(T=3)-G(T=2)|={c['split_T_disagreement']:.2e} ({c['seconds']:.2f} s)\n"
                f"naive:   evals={n['evals']} relative error={n['relative_error']:.2e} "
                f"({n['seconds']:.2f} s)\n"
                + "".join(f"levin:   m={m} abs error={e:.2e}\n" for m, e in lv["abs_error"].items()))
    _emit(text, args.out)
    return EXIT_OK


COMMANDS = {"eval": cmd_eval, "sweep": cmd_sweep, "table": cmd_table, "bench": cmd_bench}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)          # exits with status 2 on bad flags
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        parser.error(str(exc))
    except HLGFError as exc:
        print(f"hlgf {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
