"""Command-line entry point: ``specconc run|bound|spectrum|selftest|gen``.

Exit codes: 0 success, 1 a normative bound was violated or a self-test
failed, 2 invalid configuration or arguments, 3 any other runtime error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from pathlib import Path

import numpy as np
import yaml

from . import __version__, config
from ._accel import backend_name
from .bounds import BoundKind, BoundTag, evaluate_bound, exponent
from .ensembles import SampleHandle, WalshBernoulli, sample
from .errors import ConfigError, SpecConcError
from .functionals import builtin
from .linalg import format_float, read_matrix_csv, symmetric_eigenvalues, wishart
from .verify import (
    binomial_exact_law_test,
    check_bounded_difference,
    check_dilation_identity,
    check_rank_inequalities,
    check_trace_lipschitz,
    clopper_pearson,
    default_rank_bound,
    estimate_center,
    estimate_tail,
    exact_binomial_tail,
    reports_to_csv,
    statistic_values,
)

log = logging.getLogger("specconc")

EXIT_OK = 0
EXIT_VIOLATED = 1
EXIT_CONFIG = 2
EXIT_RUNTIME = 3

SELFTEST_ALPHA = 0.001


def _kv(items, what):
    out = {}
    for item in items:
        key, sep, val = item.partition("=")
        if not sep or not key:
            raise ConfigError(what, f"expected key=value, got {item!r}")
        out[key] = yaml.safe_load(val)
    return out


# -- run -----------------------------------------------------------------------


def run_experiment(exp, out_dir, fmt="both"):
    """Run a validated experiment and write its outputs.  Returns (reports, paths)."""
    t0 = time.perf_counter()
    center = estimate_center(
        exp.spec,
        exp.function,
        exp.pilot_reps,
        exp.seed,
        exp.center_kind,
        workers=exp.workers,
        fast_path=exp.fast_path,
    )
    log.info("center %s = %r (pilot %d, se %.3g)", center.kind, center.value, center.pilot_reps, center.standard_error_proxy)
    reports = estimate_tail(
        exp.spec,
        exp.function,
        center,
        exp.epsilons,
        exp.reps,
        exp.seed,
        exp.ci_level,
        exp.bounds,
        workers=exp.workers,
        fast_path=exp.fast_path,
    )
    log.info("estimated %d tail points in %.1fs", len(reports), time.perf_counter() - t0)

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = []
    if fmt in ("csv", "both"):
        path = out_dir / exp.outputs["csv"]
        path.write_text(reports_to_csv(reports))
        paths.append(path)
    if fmt in ("json", "both"):
        doc = {
            "config": exp.resolved,
            "seeds": {
                "master": exp.seed,
                "pilot_indices": [0, center.pilot_reps],
                "estimation_indices": [center.pilot_reps, center.pilot_reps + exp.reps],
            },
            "center": {
                "kind": center.kind,
                "value": center.value,
                "pilot_reps": center.pilot_reps,
                "standard_error": center.standard_error_proxy,
            },
            "reports": [r.to_dict() for r in reports],
            "violated": any(r.violated for r in reports),
        }
        path = out_dir / exp.outputs["json"]
        path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
        paths.append(path)
    return reports, paths


def cmd_run(args):
    exp = config.load_experiment(args.config, seed=args.seed, workers=args.workers)
    reports, paths = run_experiment(exp, args.out, args.format)
    for r in reports:
        marks = " ".join(f"{b.tag}={b.violated_text()}" for b in r.bounds)
        print(f"eps={format_float(r.epsilon)} estimate={r.estimate:.6g} "
              f"ci=[{r.ci_low:.6g}, {r.ci_high:.6g}] {marks}".rstrip())
    for p in paths:
        print(f"wrote {p}")
    if any(r.violated for r in reports):
        print("VIOLATED: a tail estimate exceeds a normative bound", file=sys.stderr)
        return EXIT_VIOLATED
    return EXIT_OK


# -- bound ---------------------------------------------------------------------


def cmd_bound(args):
    try:
        tag = BoundTag(args.tag)
    except ValueError:
        raise ConfigError("tag", f"unknown bound {args.tag!r}; choose from {[t.value for t in BoundTag]}") from None
    kind = BoundKind(tag, _kv(args.params, "params"))
    lines = ["epsilon,exponent,bound"]
    for eps in args.eps:
        lines.append(
            f"{format_float(eps)},{format_float(exponent(kind, eps))},{format_float(evaluate_bound(kind, eps))}"
        )
    print("\n".join(lines))
    return EXIT_OK


# -- spectrum ------------------------------------------------------------------


def cmd_spectrum(args):
    arr = read_matrix_csv(args.matrix)
    if args.wishart:
        spec = symmetric_eigenvalues(wishart(arr))
    else:
        if arr.shape[0] != arr.shape[1] or not np.array_equal(arr, arr.T):
            raise ConfigError("matrix", "not symmetric; pass --wishart to use X'X/m")
        spec = symmetric_eigenvalues(arr)
    text = "\n".join(format_float(v) for v in spec.values) + "\n"
    if args.out_file:
        Path(args.out_file).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


# -- gen -----------------------------------------------------------------------


def cmd_gen(args):
    if args.config:
        exp = config.load_experiment(args.config, seed=args.seed)
        spec, seed = exp.spec, exp.seed
    else:
        if not args.kind:
            raise ConfigError("kind", "give an ensemble kind or --config")
        raw = {"kind": args.kind, **_kv(args.params, "params")}
        spec, _ = config._ensemble(raw, Path.cwd())
        seed = 0 if args.seed is None else args.seed
    mat = np.asarray(sample(SampleHandle(spec, seed, args.rep)).values)
    if args.statistic:
        mat = spec.statistic_dense(mat)
    text = "\n".join(",".join(format_float(v) for v in row) for row in mat) + "\n"
    if args.out_file:
        Path(args.out_file).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


# -- selftest ------------------------------------------------------------------


def selftest(trials=1000, seed=0, n_max=32, quick=False):
    """Run every verification suite; returns a list of (name, passed, summary)."""
    from .ensembles import MA2, IndependentRows, SequentialGraph

    results = []

    def add(report):
        results.append((report.name, report.passed, report.summary().split(": ", 1)[1]))

    sym, gram = check_rank_inequalities(trials, seed, n_max)
    add(sym)
    add(gram)
    add(check_trace_lipschitz(trials, seed, n_max, builtin("abs")))

    small = max(50, trials // 10)
    for m, n in ((12, 8), (8, 12), (10, 10)):
        rep = check_dilation_identity(IndependentRows(n, m, "uniform"), builtin("sqrt_abs"), small, seed)
        rep.name = f"dilation_identity_{m}x{n}"
        add(rep)

    ind = builtin("indicator(0.5)")
    for spec in (
        WalshBernoulli(4),
        IndependentRows(16, 16, "common_factor"),
        MA2(16, 16, 0.3 * np.eye(16, k=-1)),
        SequentialGraph(16),
    ):
        kol, fun = check_bounded_difference(spec, ind, small, seed, default_rank_bound(spec))
        kol.name = f"{kol.name}[{spec.kind}]"
        fun.name = f"{fun.name}[{spec.kind}]"
        add(kol)
        add(fun)

    k = 3 if quick else 4
    gof = binomial_exact_law_test(k, 2000 if quick else 5000, seed, SELFTEST_ALPHA)
    results.append(
        (f"binomial_law[k={k}]", gof.passed, f"chi2={gof.statistic:.3f} dof={gof.dof} p={gof.p_value:.4g}")
    )

    # exact n = 8 tails against Monte Carlo intervals; like the law test, the
    # family false-alarm rate is 0.001 (Bonferroni over the grid)
    grid = (0.125, 0.25, 0.375)
    reps = 2000 if quick else 20000
    values = statistic_values(WalshBernoulli(3), builtin("exceed(0.5)"), seed, range(reps))
    level = 1.0 - SELFTEST_ALPHA / len(grid)
    ok = True
    parts = []
    for eps in grid:
        exact = exact_binomial_tail(8, eps)
        hits = int(np.count_nonzero(np.abs(values - 0.5) >= eps - 1e-12))
        lo, hi = clopper_pearson(hits, reps, level)
        ok &= lo <= exact <= hi
        parts.append(f"eps={eps}: exact={exact:.6g} ci=[{lo:.4g}, {hi:.4g}]")
    results.append(("exact_tails[n=8]", ok, "; ".join(parts)))
    return results


def cmd_selftest(args):
    results = selftest(args.trials, args.seed if args.seed is not None else 0, quick=args.quick)
    for name, passed, summary in results:
        print(f"{'PASS' if passed else 'FAIL'} {name}: {summary}")
    return EXIT_OK if all(p for _, p, _ in results) else EXIT_VIOLATED


# -- parser --------------------------------------------------------------------


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-v", "--verbose", action="count", default=0, help="more logging")

    parser = argparse.ArgumentParser(
        prog="specconc", description="Concentration of spectral measures: simulation and bound checks."
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", parents=[common], help="run a tail-estimation experiment")
    p.add_argument("--config", required=True, help="YAML or JSON experiment file")
    p.add_argument("--out", default=".", help="output directory (default: current)")
    p.add_argument("--seed", type=int, help="override the master seed")
    p.add_argument("--workers", type=int, help="override the worker count")
    p.add_argument("--format", choices=("csv", "json", "both"), default="both")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("bound", parents=[common], help="evaluate a tail bound on an eps grid")
    p.add_argument("tag", help="bound tag, e.g. T1_LIP")
    p.add_argument("params", nargs="*", help="constants as key=value")
    p.add_argument("--eps", type=float, nargs="+", required=True)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("spectrum", parents=[common], help="eigenvalues of a matrix CSV")
    p.add_argument("matrix", help="CSV file")
    p.add_argument("--wishart", action="store_true", help="use X'X/m instead of the matrix itself")
    p.add_argument("-o", "--output", dest="out_file", help="write values here instead of stdout")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("selftest", parents=[common], help="run the verification suites")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int)
    p.add_argument("--quick", action="store_true", help="smaller sample sizes")
    p.set_defaults(func=cmd_selftest)

    p = sub.add_parser("gen", parents=[common], help="emit one sampled matrix as CSV")
    p.add_argument("kind", nargs="?", help="ensemble kind (omit with --config)")
    p.add_argument("params", nargs="*", help="ensemble parameters as key=value")
    p.add_argument("--config", help="take the ensemble from an experiment file")
    p.add_argument("--seed", type=int)
    p.add_argument("--rep", type=int, default=0, help="replication index")
    p.add_argument("--statistic", action="store_true", help="emit S instead of X (or M)")
    p.add_argument("-o", "--output", dest="out_file")
    p.set_defaults(func=cmd_gen)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    level = logging.WARNING - 10 * min(args.verbose, 2)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    log.debug("backend %s", backend_name())
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (SpecConcError, ValueError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
