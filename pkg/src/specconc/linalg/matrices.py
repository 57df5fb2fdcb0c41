"""Matrix value types, Wishart formation, dilation and CSV I/O."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..errors import BoundViolation


def _frozen(arr):
    arr = np.array(arr, dtype=np.float64, copy=True)
    arr.setflags(write=False)
    return arr


def _require_finite(arr, what):
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{what} has non-finite entries")


@dataclass(frozen=True, eq=False)
class SymMatrix:
    """Real symmetric matrix built from the upper triangle of its input.

    Only entries with ``i <= j`` of the source are read; the lower triangle is
    mirrored, so ``values == values.T`` holds exactly.
    """

    values: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.values, dtype=np.float64)
        if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
            raise ValueError(f"symmetric matrix must be square and non-empty, got {a.shape}")
        _require_finite(a, "symmetric matrix")
        upper = np.triu(a)
        object.__setattr__(self, "values", _frozen(upper + np.triu(a, 1).T))

    @classmethod
    def from_upper(cls, packed, n):
        """Build from the packed row-major upper triangle (length n(n+1)/2)."""
        packed = np.asarray(packed, dtype=np.float64)
        if packed.shape != (n * (n + 1) // 2,):
            raise ValueError("packed upper triangle has the wrong length")
        a = np.zeros((n, n))
        a[np.triu_indices(n)] = packed
        return cls(a)

    @property
    def n(self):
        return self.values.shape[0]

    def upper(self):
        """Packed row-major upper triangle, diagonal included."""
        return self.values[np.triu_indices(self.n)].copy()


@dataclass(frozen=True, eq=False)
class DataMatrix:
    """An ``m x n`` observation matrix; rows are the independent blocks.

    With ``bounded=True`` every entry must satisfy ``|X_ij| <= 1``.
    """

    values: np.ndarray
    bounded: bool = False

    def __post_init__(self):
        x = np.asarray(self.values, dtype=np.float64)
        if x.ndim == 1:
            x = x[None, :]
        if x.ndim != 2 or min(x.shape) < 1:
            raise ValueError(f"data matrix must be 2-d and non-empty, got {x.shape}")
        _require_finite(x, "data matrix")
        if self.bounded and np.any(np.abs(x) > 1.0):
            raise BoundViolation("bounded data matrix has an entry with |x| > 1")
        object.__setattr__(self, "values", _frozen(x))

    @property
    def m(self):
        return self.values.shape[0]

    @property
    def n(self):
        return self.values.shape[1]


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Eigenvalues sorted nondecreasing, counted with multiplicity."""

    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64).ravel()
        if v.size < 1:
            raise ValueError("spectrum must be non-empty")
        _require_finite(v, "spectrum")
        object.__setattr__(self, "values", _frozen(np.sort(v)))

    def __len__(self):
        return self.values.size

    @property
    def n(self):
        return self.values.size


def _as_array(x):
    if isinstance(x, (SymMatrix, DataMatrix)):
        return x.values
    return np.asarray(x, dtype=np.float64)


def _normalizer(x, m):
    m = x.shape[-2] if m is None else m
    if not m > 0:
        raise ValueError(f"normalizer m must be positive, got {m}")
    return m


def wishart_dense(x, m=None):
    """``X'X/m`` as an exactly symmetric ndarray (upper triangle mirrored).

    Accepts a single ``(m, n)`` matrix or a ``(count, m, n)`` stack.  ``m``
    defaults to the number of rows.
    """
    x = np.asarray(x, dtype=np.float64)
    m = _normalizer(x, m)
    prod = np.swapaxes(x, -1, -2) @ x / m
    upper = np.triu(prod)
    return upper + np.swapaxes(np.triu(prod, 1), -1, -2)


def wishart(X, m=None):
    """Sample covariance ``S = X'X/m`` of an ``m x n`` data matrix.

    ``m`` overrides the normalizer (default: the row count).
    """
    x = _as_array(X)
    if x.ndim == 1:
        x = x[None, :]
    _require_finite(x, "data matrix")
    return SymMatrix(wishart_dense(x, m))


def dilation_dense(x, m=None):
    """The ``(rows+n)``-square matrix ``[[0, X'], [X, 0]] / sqrt(m)``."""
    x = np.asarray(x, dtype=np.float64)
    rows, n = x.shape
    scale = np.sqrt(_normalizer(x, m))
    out = np.zeros((rows + n, rows + n))
    scaled = x / scale
    out[:n, n:] = scaled.T
    out[n:, :n] = scaled
    return out


def dilation(X, m=None):
    """Symmetric dilation of ``X`` scaled by ``1/sqrt(m)``.

    Its spectrum is ``{+-sigma_i(X/sqrt(m))}`` plus ``|rows - n|`` zeros.
    """
    x = _as_array(X)
    if x.ndim == 1:
        x = x[None, :]
    _require_finite(x, "data matrix")
    return SymMatrix(dilation_dense(x, m))


def read_matrix_csv(path):
    """Read a row-major, headerless CSV matrix."""
    arr = np.loadtxt(Path(path), delimiter=",", ndmin=2, dtype=np.float64)
    _require_finite(arr, f"matrix file {path}")
    return arr


def format_float(v):
    """Shortest round-tripping text for ``v``; integral values drop ``.0``."""
    text = repr(float(v))
    if text.endswith(".0"):
        text = text[:-2]
    if text == "-0":
        text = "0"
    return text


def write_matrix_csv(path, matrix):
    a = _as_array(matrix)
    if a.ndim == 1:
        a = a[None, :]
    lines = [",".join(format_float(v) for v in row) for row in a]
    Path(path).write_text("\n".join(lines) + "\n")


def write_spectrum(path, spectrum):
    Path(path).write_text("".join(format_float(v) + "\n" for v in spectrum.values))


def read_spectrum(path):
    vals = np.loadtxt(Path(path), dtype=np.float64, ndmin=1)
    return Spectrum(vals)
