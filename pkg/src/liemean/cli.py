"""Command-line interface: ``liemean {bch,mu,verify,sl2-demo,dims}``.

Exit codes: 0 success, 1 verification failure, 2 usage error or a request
rejected by the resource guard.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys

from . import __version__, gauge, kernels
from .bch import bch_multi
from .liealg import LieSeries, generators
from .lyndon import format_word, witt_dimension
from .mean import DEFAULT_BASIS_CAP, ResourceLimitError, iteration_errors, mu_universal, power_iterate, set_cache_dir
from .verify import DEFAULTS, SUITES, results_json, run_suite, summary

CACHE_ENV = "LIEMEAN_CACHE_DIR"
EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
MAX_BCH_DEGREE = 10
MAX_BCH_ARITY = 4


class UsageError(Exception):
    pass


def _basis_size(n: int, max_degree: int) -> int:
    return sum(witt_dimension(n, d) for d in range(1, max_degree + 1))


def _guard(n: int, max_degree: int, cap: int) -> None:
    size = _basis_size(n, max_degree)
    if size > cap:
        raise ResourceLimitError(
            f"{size} basis words on {n} generators up to degree {max_degree} exceed the cap of {cap}; "
            "raise --basis-cap to proceed"
        )


def _emit_series(series: LieSeries, fmt: str) -> None:
    print(series.to_json() if fmt == "json" else series.to_text())


def cmd_bch(args) -> int:
    if not 1 <= args.degree <= MAX_BCH_DEGREE:
        raise UsageError(f"--degree must be in 1..{MAX_BCH_DEGREE}")
    if not 1 <= args.arity <= MAX_BCH_ARITY:
        raise UsageError(f"--arity must be in 1..{MAX_BCH_ARITY}")
    _guard(args.arity, args.degree, args.basis_cap)
    _emit_series(bch_multi(generators(args.arity, args.degree)), args.format)
    return EXIT_OK


def _float_terms(series: LieSeries) -> list[dict]:
    return [{"word": format_word(w, series.n), "value": float(c)} for w, c in series.sorted_terms()]


def cmd_mu(args) -> int:
    if args.n < 2:
        raise UsageError("-n must be >= 2")
    if args.degree < 1:
        raise UsageError("--degree must be >= 1")
    _guard(args.n, args.degree, args.basis_cap)
    if args.method == "fixed_point":
        _emit_series(mu_universal(args.n, args.degree), args.format)
        return EXIT_OK
    if args.n < 3:
        raise UsageError("--method iterate needs -n >= 3")
    if args.steps < 0:
        raise UsageError("--steps must be >= 0")
    state = power_iterate(args.n, args.degree, args.steps)
    errors = iteration_errors(args.n, args.degree, args.steps)
    ratios = [b / a if a else math.nan for a, b in zip(errors, errors[1:])]
    if args.format == "json":
        print(json.dumps({
            "n": args.n,
            "degree": args.degree,
            "steps": args.steps,
            "iterates": [{"n": s.n, "degree": s.max_degree, "terms": _float_terms(s)} for s in state],
            "errors": errors,
            "ratios": ratios,
        }, indent=2))
    else:
        for i, s in enumerate(state, 1):
            print(f"x{i}^{args.steps} = {s.to_text()}")
        print(f"{'k':>4} {'error':>12} {'ratio':>8}")
        for k, e in enumerate(errors):
            r = f"{ratios[k - 1]:8.4f}" if k else " " * 8
            print(f"{k:>4} {e:>12.4e} {r}")
    return EXIT_OK


def cmd_verify(args) -> int:
    names = list(SUITES) if "all" in args.suite else args.suite
    results = []
    for name in names:
        params = {"n": args.n, "m": args.m, "degree": args.degree, "seed": args.seed}
        accepted = set(DEFAULTS[name]) | ({"seed"} if name == "bch-identities" else set())
        results.append(run_suite(name, **{k: v for k, v in params.items() if k in accepted}))
    print(results_json(results))
    if not args.quiet:
        print(summary(results), file=sys.stderr)
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAIL


def cmd_sl2_demo(args) -> int:
    if args.dump_curve:
        count = gauge.write_curve_csv(args.dump_curve, args.samples)
        print(f"wrote {count} curve samples to {args.dump_curve}", file=sys.stderr)
    if args.max_degree < 2:
        raise UsageError("--max-degree must be >= 2")
    degrees = list(range(2, args.max_degree + 1, 2))
    if args.endpoints:
        elements = [gauge.w_element("limit_20"), gauge.w_element("limit_01")]
    else:
        elements = [gauge.w_element(args.branch, args.t1), gauge.w_element(args.branch, args.t2)]
    report = gauge.mean_flow_check(elements, degrees, asserted=not args.endpoints)
    g, h = (gauge.sl2_exp(el.matrix) for el in elements)
    k = gauge.group_mean2(g, h)
    group = {
        "target_defect": abs(gauge.mobius(k, gauge.SOURCE) - gauge.TARGET),
        "symmetry_defect": float(abs(k - gauge.group_mean2(h, g)).max()),
        "distance_to_exp_mean": {
            str(r.degree): float(abs(gauge.sl2_exp(gauge.sl2(r.a, r.b, r.c)) - k).max()) for r in report.rows
        },
    }
    if args.format == "json":
        data = report.to_dict()
        data["group_mean"] = group
        print(json.dumps(data, indent=2))
    else:
        for el in elements:
            print(f"input {el.branch:<9} t={el.t:+.4f}  b={el.b:.9f}  c={el.c:.9f}")
        print(report.table())
        print(f"group mean: |k(-1+i) - (1+i)| = {group['target_defect']:.3e}, "
              f"symmetry defect {group['symmetry_defect']:.3e}")
        for deg, dist in group["distance_to_exp_mean"].items():
            print(f"  D={deg}: max|exp(m_D) - k| = {dist:.3e}")
        verdict = {True: "PASS", False: "FAIL", None: "TREND ONLY"}[report.passed]
        print(f"mean flow check: {verdict}")
    return EXIT_FAIL if report.passed is False else EXIT_OK


def cmd_dims(args) -> int:
    if args.n < 1 or args.degree < 1:
        raise UsageError("-n and --degree must be >= 1")
    rows = []
    total = 0
    for d in range(1, args.degree + 1):
        w = witt_dimension(args.n, d)
        total += w
        rows.append({"degree": d, "brackets": d - 1, "dimension": w, "cumulative": total})
    if args.format == "json":
        print(json.dumps({"n": args.n, "rows": rows}, indent=2))
    else:
        print(f"{'degree':>6} {'brackets':>8} {'dimension':>10} {'cumulative':>11}")
        for r in rows:
            print(f"{r['degree']:>6} {r['brackets']:>8} {r['dimension']:>10} {r['cumulative']:>11}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="liemean", description="Universal averages in free Lie algebras.")
    p.add_argument("--version", action="version", version=f"liemean {__version__} ({kernels.BACKEND} kernels)")
    p.add_argument("--cache-dir", default=os.environ.get(CACHE_ENV),
                   help=f"persist mu_n series as JSON here (default: ${CACHE_ENV})")
    p.add_argument("--log-level", default="WARNING", choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("bch", help="BCH(x1, .., xk) truncated at a degree")
    b.add_argument("--degree", type=int, required=True)
    b.add_argument("--arity", type=int, default=2)
    b.add_argument("--format", choices=["text", "json"], default="text")
    b.add_argument("--basis-cap", type=int, default=DEFAULT_BASIS_CAP)
    b.set_defaults(func=cmd_bch)

    m = sub.add_parser("mu", help="universal average mu_n truncated at a degree")
    m.add_argument("-n", type=int, required=True)
    m.add_argument("--degree", type=int, required=True)
    m.add_argument("--method", choices=["fixed_point", "iterate"], default="fixed_point")
    m.add_argument("--steps", type=int, default=10)
    m.add_argument("--format", choices=["text", "json"], default="text")
    m.add_argument("--basis-cap", type=int, default=DEFAULT_BASIS_CAP)
    m.set_defaults(func=cmd_mu)

    v = sub.add_parser("verify", help="run verification suites (JSON on stdout, summary on stderr)")
    v.add_argument("--suite", action="append", choices=[*SUITES, "all"], required=True)
    v.add_argument("-n", type=int)
    v.add_argument("-m", type=int)
    v.add_argument("--degree", type=int)
    v.add_argument("--seed", type=int)
    v.add_argument("--quiet", action="store_true", help="suppress the stderr summary")
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("sl2-demo", help="mean of two W elements in sl(2, R)")
    s.add_argument("--t1", type=float, default=0.2)
    s.add_argument("--t2", type=float, default=0.3)
    s.add_argument("--branch", choices=["bc_pos", "bc_neg"], default="bc_neg")
    s.add_argument("--max-degree", type=int, default=8)
    s.add_argument("--endpoints", action="store_true", help="use the (2,0) and (0,1) limit elements")
    s.add_argument("--dump-curve", metavar="CSV", help="write samples of the W curve as CSV")
    s.add_argument("--samples", type=int, default=200)
    s.add_argument("--format", choices=["text", "json"], default="text")
    s.set_defaults(func=cmd_sl2_demo)

    d = sub.add_parser("dims", help="free Lie algebra dimensions per degree")
    d.add_argument("-n", type=int, required=True)
    d.add_argument("--degree", type=int, required=True)
    d.add_argument("--format", choices=["text", "json"], default="text")
    d.set_defaults(func=cmd_dims)
    return p


def main(argv=None) -> int:
    for stream in (sys.stdout, sys.stderr):
        if hasattr(stream, "reconfigure"):
            stream.reconfigure(encoding="utf-8")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=args.log_level, format="%(levelname)s %(name)s: %(message)s")
    if args.cache_dir:
        set_cache_dir(args.cache_dir)
    try:
        return args.func(args)
    except (UsageError, ValueError, ResourceLimitError, KeyError) as exc:
        print(f"liemean: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except gauge.GaugeError as exc:
        print(f"liemean: numeric failure: {exc}", file=sys.stderr)
        return EXIT_FAIL
    finally:
        set_cache_dir(None)
