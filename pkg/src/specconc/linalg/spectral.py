"""Eigenvalues and spectral-measure arithmetic."""

import numpy as np

from ..errors import DimensionMismatch, DomainViolation, NonConvergence
from ._kernels import jacobi_eigvals_batch
from .matrices import DataMatrix, Spectrum, SymMatrix, wishart_dense

DEFAULT_TOL = 1e-12
MAX_SWEEPS = 64


def eigvalsh_batch(stack, tol=DEFAULT_TOL, max_sweeps=MAX_SWEEPS, use_numba=None):
    """Sorted eigenvalues for each matrix in a ``(count, n, n)`` symmetric stack.

    Raises
    ------
    NonConvergence
        If any matrix still exceeds the off-diagonal threshold after
        ``max_sweeps`` sweeps.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    stack = np.asarray(stack, dtype=np.float64)
    if not np.all(np.isfinite(stack)):
        raise ValueError("matrix stack has non-finite entries")
    vals, ok, sweeps = jacobi_eigvals_batch(stack, tol, max_sweeps, use_numba)
    if not np.all(ok):
        bad = int(np.flatnonzero(~ok)[0])
        raise NonConvergence(
            f"Jacobi sweep budget {max_sweeps} exhausted (batch item {bad}, "
            f"{int(sweeps[bad])} sweeps)"
        )
    return vals


def symmetric_eigenvalues(A, tol=DEFAULT_TOL, max_sweeps=MAX_SWEEPS):
    """All eigenvalues of a symmetric matrix via cyclic Jacobi rotations.

    Parameters
    ----------
    A : SymMatrix or array_like
        Only the upper triangle is read.
    tol : float
        Stop once the off-diagonal Frobenius norm is at most ``tol * ||A||_F``.

    Returns
    -------
    Spectrum
    """
    if not isinstance(A, SymMatrix):
        A = SymMatrix(A)
    vals = eigvalsh_batch(A.values[None], tol, max_sweeps)
    return Spectrum(vals[0])


def cdf_counts(values, points, side="right"):
    """Number of sorted ``values`` that are ``<= points`` (``< points`` for side='left')."""
    return np.searchsorted(values, points, side=side)


def spectral_cdf(s, lam):
    """``#{i : lambda_i <= lam} / n``; right-continuous, ties counted with multiplicity."""
    return int(cdf_counts(s.values, lam)) / s.n


def _check_domain(values, f):
    lo, hi = f.domain
    if np.any(values <= lo) or np.any(values >= hi):
        bad = values[(values <= lo) | (values >= hi)][0]
        raise DomainViolation(f"eigenvalue {bad!r} outside the domain ({lo}, {hi}) of {f.name}")


def spectral_functional(s, f):
    """Mean of ``f`` over the eigenvalues in ``s``."""
    _check_domain(s.values, f)
    return float(np.mean(f(s.values)))


def spectral_functional_batch(values, f):
    """Row means of ``f`` over a ``(count, n)`` array of eigenvalues."""
    values = np.asarray(values, dtype=np.float64)
    _check_domain(values, f)
    return np.mean(f(values), axis=-1)


def kolmogorov_count(v1, v2, atol=0.0):
    """``n * sup |F_1 - F_2|`` for two sorted value arrays of equal length n.

    With ``atol > 0`` jumps are matched up to ``atol``:
    ``max_x max(N_1(x) - N_2(x + atol), N_2(x) - N_1(x + atol))``.  This never
    exceeds the exact count and equals it once ``atol`` separates genuine
    jumps from rounding-level splits of repeated eigenvalues.
    """
    v1 = np.asarray(v1)
    v2 = np.asarray(v2)
    if v1.shape != v2.shape:
        raise DimensionMismatch(f"spectra have lengths {v1.size} and {v2.size}")
    if v1.size == 0:
        return 0
    if atol == 0.0:
        pts = np.union1d(v1, v2)
        right = np.abs(cdf_counts(v1, pts) - cdf_counts(v2, pts))
        left = np.abs(cdf_counts(v1, pts, "left") - cdf_counts(v2, pts, "left"))
        return int(max(right.max(), left.max()))
    up = cdf_counts(v1, v1) - cdf_counts(v2, v1 + atol)
    down = cdf_counts(v2, v2) - cdf_counts(v1, v2 + atol)
    return int(max(up.max(), down.max(), 0))


def kolmogorov_distance(s1, s2):
    """Sup-norm distance between the spectral CDFs of two same-size spectra."""
    if s1.n != s2.n:
        raise DimensionMismatch(f"spectra have lengths {s1.n} and {s2.n}")
    return kolmogorov_count(s1.values, s2.values) / s1.n


def singular_values(X, tol=DEFAULT_TOL, m=None):
    """Singular values of ``X/sqrt(m)``: square roots of the eigenvalues of ``X'X/m``.

    Returns ``n`` values, so ``n - rows`` zeros appear when ``rows < n``.
    ``m`` overrides the normalizer (default: the row count).
    """
    x = X.values if isinstance(X, DataMatrix) else np.atleast_2d(np.asarray(X, dtype=np.float64))
    vals = eigvalsh_batch(wishart_dense(x, m)[None], tol)[0]
    # PSD by construction; the solver only returns tiny negatives as exact zeros.
    return Spectrum(np.sqrt(np.maximum(vals, 0.0)))


def operator_norm(A, tol=1e-12, max_iter=10_000):
    """Largest singular value of ``A`` by power iteration on ``A'A``.

    The start vector is fixed, so the result is deterministic.  Iteration stops
    when the relative change of the estimate is at most ``tol``.
    """
    a = np.atleast_2d(np.asarray(getattr(A, "values", A), dtype=np.float64))
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    if tol <= 0:
        raise ValueError("tol must be positive")
    if not np.any(a):
        return 0.0
    n = a.shape[1]
    v = np.random.Generator(np.random.Philox(key=0x5EED)).standard_normal(n)
    v /= np.linalg.norm(v)
    sigma = 0.0
    for _ in range(max_iter):
        w = a.T @ (a @ v)
        norm_w = np.linalg.norm(w)
        if norm_w == 0.0:
            # start vector in the null space of A'A; restart along a column
            v = a[np.argmax(np.abs(a).sum(axis=1))].copy()
            v /= np.linalg.norm(v)
            continue
        v = w / norm_w
        new_sigma = float(np.sqrt(norm_w))
        if abs(new_sigma - sigma) <= tol * new_sigma:
            return new_sigma
        sigma = new_sigma
    raise NonConvergence(f"power iteration did not converge in {max_iter} iterations")
