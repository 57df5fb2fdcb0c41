"""Cyclic Jacobi eigenvalue kernels.

Both backends sweep the same round-robin (tournament) ordering: every round
rotates ``n // 2`` disjoint index pairs, first updating all affected rows and
then all affected columns.  Disjoint rotations commute, so the round equals
applying the rotations one at a time, and the numpy twin can vectorise a whole
round over a batch of matrices.

Convergence: stop when the off-diagonal Frobenius norm is at most
``tol * ||A||_F``.  Rotations whose pivot satisfies ``|a_pq| <= tol*||A||_F/n``
are skipped; if every pivot is that small the stopping rule already holds.
Eigenvalues with magnitude at most ``tol * ||A||_F`` (the solver's resolution)
are returned as exact zeros.
"""

import math
from functools import lru_cache

import numpy as np

from .._accel import USE_NUMBA, njit


@lru_cache(maxsize=64)
def round_robin_pairs(n):
    """Return an int64 array ``(rounds, n // 2, 2)`` of disjoint pairs ``p < q``.

    Each unordered pair of ``range(n)`` appears exactly once per sweep.
    """
    if n < 2:
        return np.zeros((0, 0, 2), dtype=np.int64)
    size = n + (n % 2)
    players = list(range(size))
    rounds = []
    for _ in range(size - 1):
        pairs = []
        for k in range(size // 2):
            a, b = players[k], players[size - 1 - k]
            if a < n and b < n:
                pairs.append((min(a, b), max(a, b)))
        pairs.sort()
        rounds.append(pairs)
        players = [players[0], players[-1]] + players[1:-1]
    out = np.array(rounds, dtype=np.int64)
    out.setflags(write=False)
    return out


@njit
def _jacobi_one(a, pairs, tol, max_sweeps, out):
    n = a.shape[0]
    fro2 = 0.0
    for i in range(n):
        for j in range(n):
            fro2 += a[i, j] * a[i, j]
    scale = math.sqrt(fro2)
    thresh = tol * scale
    skip = thresh / n
    half = pairs.shape[1]
    cs = np.empty(half)
    sn = np.empty(half)
    rot = np.zeros(half, dtype=np.bool_)
    converged = False
    sweeps = 0
    while True:
        off2 = 0.0
        for i in range(n):
            for j in range(n):
                if i != j:
                    off2 += a[i, j] * a[i, j]
        if math.sqrt(off2) <= thresh:
            converged = True
            break
        if sweeps >= max_sweeps:
            break
        sweeps += 1
        for r in range(pairs.shape[0]):
            any_rot = False
            for k in range(half):
                p = pairs[r, k, 0]
                q = pairs[r, k, 1]
                apq = a[p, q]
                if abs(apq) > skip:
                    theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                    t = 1.0 / (abs(theta) + math.sqrt(theta * theta + 1.0))
                    if theta < 0.0:
                        t = -t
                    c = 1.0 / math.sqrt(t * t + 1.0)
                    cs[k] = c
                    sn[k] = t * c
                    rot[k] = True
                    any_rot = True
                else:
                    rot[k] = False
            if not any_rot:
                continue
            for k in range(half):
                if rot[k]:
                    p = pairs[r, k, 0]
                    q = pairs[r, k, 1]
                    c = cs[k]
                    s = sn[k]
                    for j in range(n):
                        x = a[p, j]
                        y = a[q, j]
                        a[p, j] = c * x - s * y
                        a[q, j] = s * x + c * y
            for k in range(half):
                if rot[k]:
                    p = pairs[r, k, 0]
                    q = pairs[r, k, 1]
                    c = cs[k]
                    s = sn[k]
                    for i in range(n):
                        x = a[i, p]
                        y = a[i, q]
                        a[i, p] = x * c - y * s
                        a[i, q] = x * s + y * c
            for k in range(half):
                if rot[k]:
                    p = pairs[r, k, 0]
                    q = pairs[r, k, 1]
                    a[p, q] = 0.0
                    a[q, p] = 0.0
    for i in range(n):
        d = a[i, i]
        out[i] = 0.0 if abs(d) <= thresh else d
    out.sort()
    return converged, sweeps


@njit
def _jacobi_batch_numba(stack, pairs, tol, max_sweeps):
    count = stack.shape[0]
    n = stack.shape[1]
    vals = np.empty((count, n))
    ok = np.empty(count, dtype=np.bool_)
    sweeps = np.empty(count, dtype=np.int64)
    for b in range(count):
        work = stack[b].copy()
        conv, sw = _jacobi_one(work, pairs, tol, max_sweeps, vals[b])
        ok[b] = conv
        sweeps[b] = sw
    return vals, ok, sweeps


def _offdiag_norm(a):
    sq = a * a
    idx = np.arange(a.shape[1])
    sq[:, idx, idx] = 0.0
    return np.sqrt(sq.sum(axis=2).sum(axis=1))


def _jacobi_batch_numpy(stack, pairs, tol, max_sweeps):
    a = np.array(stack, dtype=np.float64, copy=True)
    count, n, _ = a.shape
    scale = np.sqrt((a * a).sum(axis=2).sum(axis=1))
    thresh = tol * scale
    skip = thresh / max(n, 1)
    sweeps = np.zeros(count, dtype=np.int64)
    active = _offdiag_norm(a) > thresh
    while active.any():
        stalled = active & (sweeps >= max_sweeps)
        active &= ~stalled
        if not active.any():
            break
        sweeps += active
        for r in range(pairs.shape[0]):
            P = pairs[r, :, 0]
            Q = pairs[r, :, 1]
            apq = a[:, P, Q]
            rot = (np.abs(apq) > skip[:, None]) & active[:, None]
            if not rot.any():
                continue
            app = a[:, P, P]
            aqq = a[:, Q, Q]
            theta = (aqq - app) / (2.0 * np.where(rot, apq, 1.0))
            t = 1.0 / (np.abs(theta) + np.sqrt(theta * theta + 1.0))
            t = np.where(theta < 0.0, -t, t)
            c = 1.0 / np.sqrt(t * t + 1.0)
            s = t * c
            c = np.where(rot, c, 1.0)
            s = np.where(rot, s, 0.0)
            xr = a[:, P, :]
            yr = a[:, Q, :]
            cr = c[:, :, None]
            sr = s[:, :, None]
            a[:, P, :] = np.where(rot[:, :, None], cr * xr - sr * yr, xr)
            a[:, Q, :] = np.where(rot[:, :, None], sr * xr + cr * yr, yr)
            xc = a[:, :, P]
            yc = a[:, :, Q]
            cc = c[:, None, :]
            sc = s[:, None, :]
            rc = rot[:, None, :]
            a[:, :, P] = np.where(rc, xc * cc - yc * sc, xc)
            a[:, :, Q] = np.where(rc, xc * sc + yc * cc, yc)
            a[:, P, Q] = np.where(rot, 0.0, a[:, P, Q])
            a[:, Q, P] = np.where(rot, 0.0, a[:, Q, P])
        active &= _offdiag_norm(a) > thresh
    converged = _offdiag_norm(a) <= thresh
    vals = np.einsum("bii->bi", a).copy()
    vals[np.abs(vals) <= thresh[:, None]] = 0.0
    vals.sort(axis=1)
    return vals, converged, sweeps


def jacobi_eigvals_batch(stack, tol, max_sweeps, use_numba=None):
    """Eigenvalues of a stack of symmetric matrices, each row sorted ascending.

    Returns ``(values, converged, sweeps)``; the caller decides how to report
    non-convergence.  Each matrix is processed independently of its batch
    mates, so results do not depend on how replications are chunked.
    """
    stack = np.ascontiguousarray(stack, dtype=np.float64)
    if stack.ndim != 3 or stack.shape[1] != stack.shape[2]:
        raise ValueError(f"expected a (count, n, n) stack, got shape {stack.shape}")
    pairs = round_robin_pairs(stack.shape[1])
    if pairs.size == 0:
        pairs = np.zeros((0, 1, 2), dtype=np.int64)
    if use_numba is None:
        use_numba = USE_NUMBA
    if use_numba:
        return _jacobi_batch_numba(stack, pairs, float(tol), int(max_sweeps))
    return _jacobi_batch_numpy(stack, pairs, float(tol), int(max_sweeps))
