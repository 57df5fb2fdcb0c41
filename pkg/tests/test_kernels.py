import os
import subprocess
import sys

import numpy as np
import pytest

from specconc._accel import NUMBA_AVAILABLE
from specconc.linalg._kernels import jacobi_eigvals_batch, round_robin_pairs


def _random_sym(rng, count, n):
    g = rng.standard_normal((count, n, n))
    return (g + np.swapaxes(g, 1, 2)) / 2.0


@pytest.mark.parametrize("n", [1, 2, 3, 4, 7, 8, 15, 16])
def test_round_robin_covers_each_pair_once(n):
    pairs = round_robin_pairs(n)
    seen = set()
    for rnd in pairs:
        idx = rnd.ravel()
        # disjoint within a round
        assert len(set(idx.tolist())) == idx.size
        for p, q in rnd:
            assert p < q
            seen.add((int(p), int(q)))
    expected = {(p, q) for p in range(n) for q in range(p + 1, n)}
    assert seen == expected
    assert sum(len(r) for r in pairs) == len(expected)


@pytest.mark.parametrize("use_numba", [False, pytest.param(True, marks=pytest.mark.skipif(not NUMBA_AVAILABLE, reason="numba missing"))])
@pytest.mark.parametrize("n", [1, 2, 5, 16, 33, 64])
def test_matches_lapack(use_numba, n):
    rng = np.random.default_rng(n)
    stack = _random_sym(rng, 6, n)
    vals, ok, sweeps = jacobi_eigvals_batch(stack, 1e-12, 64, use_numba)
    assert ok.all()
    ref = np.linalg.eigvalsh(stack)
    scale = np.linalg.norm(stack, axis=(1, 2))[:, None]
    assert np.all(np.abs(vals - ref) <= 1e-11 * np.maximum(scale, 1.0))
    assert np.all(np.diff(vals, axis=1) >= 0)


@pytest.mark.skipif(not NUMBA_AVAILABLE, reason="numba missing")
def test_backends_bitwise_equal():
    rng = np.random.default_rng(3)
    for n in (3, 10, 31):
        stack = _random_sym(rng, 4, n)
        a = jacobi_eigvals_batch(stack, 1e-12, 64, True)
        b = jacobi_eigvals_batch(stack, 1e-12, 64, False)
        assert np.array_equal(a[0], b[0])
        assert np.array_equal(a[2], b[2])


@pytest.mark.parametrize("use_numba", [False, True])
def test_sweep_budget_reports_nonconvergence(use_numba):
    if use_numba and not NUMBA_AVAILABLE:
        pytest.skip("numba missing")
    stack = _random_sym(np.random.default_rng(1), 2, 12)
    _, ok, sweeps = jacobi_eigvals_batch(stack, 1e-12, 1, use_numba)
    assert not ok.any()
    assert np.all(sweeps == 1)


def test_zero_and_diagonal_need_no_sweeps():
    stack = np.stack([np.zeros((4, 4)), np.diag([3.0, -1.0, 2.0, 0.0])])
    vals, ok, sweeps = jacobi_eigvals_batch(stack, 1e-12, 64)
    assert ok.all()
    assert np.array_equal(vals[1], [-1.0, 0.0, 2.0, 3.0])
    assert np.array_equal(vals[0], np.zeros(4))
    assert np.all(sweeps == 0)


def test_input_not_modified():
    stack = _random_sym(np.random.default_rng(2), 2, 6)
    copy = stack.copy()
    jacobi_eigvals_batch(stack, 1e-12, 64)
    assert np.array_equal(stack, copy)


def test_env_flag_selects_numpy_backend():
    code = "from specconc import backend_name; print(backend_name())"
    env = dict(os.environ, SPECCONC_DISABLE_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "numpy"
