"""Compare the numba Jacobi kernel, its pure-numpy fallback and LAPACK.

    python benchmarks/bench_eigensolver.py [--sizes 8 16 32 64] [--batch 64] [--repeat 3]

Reports the best-of-repeat time per matrix and the largest deviation from
LAPACK.  The numpy fallback is what runs with SPECCONC_DISABLE_NUMBA=1.
"""

import argparse
import time

import numpy as np

from specconc._accel import NUMBA_AVAILABLE
from specconc.linalg import DEFAULT_TOL, MAX_SWEEPS
from specconc.linalg._kernels import jacobi_eigvals_batch


def best_time(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[8, 16, 32, 64])
    ap.add_argument("--batch", type=int, default=64)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    rng = np.random.default_rng(args.seed)
    if NUMBA_AVAILABLE:  # compile outside the timed region
        jacobi_eigvals_batch(np.eye(2)[None], DEFAULT_TOL, MAX_SWEEPS, True)

    print(f"{'n':>4} {'backend':>8} {'ms/matrix':>10} {'speedup':>8} {'max|err|':>10}")
    for n in args.sizes:
        g = rng.uniform(-1.0, 1.0, (args.batch, n, n))
        stack = (g + np.swapaxes(g, 1, 2)) / 2.0
        t_lapack, ref = best_time(lambda: np.linalg.eigvalsh(stack), args.repeat)
        rows = [("lapack", t_lapack, 0.0)]
        backends = [("numpy", False)] + ([("numba", True)] if NUMBA_AVAILABLE else [])
        t_numpy = None
        for name, flag in backends:
            t, (vals, ok, _) = best_time(
                lambda: jacobi_eigvals_batch(stack, DEFAULT_TOL, MAX_SWEEPS, flag), args.repeat
            )
            assert ok.all()
            if name == "numpy":
                t_numpy = t
            rows.append((name, t, float(np.max(np.abs(vals - ref)))))
        for name, t, err in rows:
            speed = t_numpy / t if t_numpy else float("nan")
            print(f"{n:>4} {name:>8} {1e3 * t / args.batch:>10.3f} {speed:>7.1f}x {err:>10.1e}")


if __name__ == "__main__":
    main()
