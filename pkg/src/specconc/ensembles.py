"""Seeded samplers for the random-matrix ensembles.

Randomness is counter based.  A replication draws from a Philox stream keyed by
``(master_seed, variant)`` whose counter starts at the replication index, so
replications are independent of one another and of execution order.  Within a
replication the independent blocks are drawn as consecutive fixed-size slices
of that stream: block ``i`` is a function of ``(master_seed, replication, i)``
alone.  Variant 1 is the independent copy used by :func:`replace_block`.

Block layouts (0-based):

* ``walsh_bernoulli``, ``diagonal_bernoulli`` -- block i is ``R_i``;
* ``independent_rows`` -- block i is row i of ``X``;
* ``ma2``, ``ma2_factor`` -- block i is innovation ``Y_i`` (``Z_i``), ``m + 1`` blocks;
* ``sequential_graph`` -- block i is member i's links to members ``0..i-1``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Union

import numpy as np

from .errors import BoundViolation, DimensionTooLarge, IndexOutOfRange
from .linalg import DataMatrix, SymMatrix, wishart_dense

MASK64 = (1 << 64) - 1
MAX_WALSH_ORDER = 16


def stream(master_seed, replication, variant=0):
    """Counter-based generator for one replication."""
    bitgen = np.random.Philox(
        key=[int(master_seed) & MASK64, int(variant) & MASK64],
        counter=[0, 0, 0, int(replication) & MASK64],
    )
    return np.random.Generator(bitgen)


def walsh_rows(k):
    """Sylvester-Hadamard matrix of order ``2**k`` with rows in {-1, 1}^n.

    Rows are pairwise orthogonal: ``H @ H.T == n * I``.
    """
    k = int(k)
    if k < 0:
        raise ValueError("k must be nonnegative")
    if k > MAX_WALSH_ORDER:
        raise DimensionTooLarge(f"k={k} exceeds the supported order {MAX_WALSH_ORDER}")
    h = np.ones((1, 1))
    for _ in range(k):
        h = np.block([[h, h], [h, -h]])
    return h


# -- built-in block laws ------------------------------------------------------
# Each law maps (rng, blocks, dim) to an array of shape (blocks, dim) whose rows
# are independent draws.


def uniform_law(rng, blocks, dim):
    """I.i.d. uniform coordinates on [-1, 1]."""
    return rng.uniform(-1.0, 1.0, size=(blocks, dim))


def rademacher_law(rng, blocks, dim):
    return np.where(rng.random((blocks, dim)) < 0.5, -1.0, 1.0)


def common_factor_law(rng, blocks, dim):
    """Coordinates ``(w + u_j) / 2`` sharing one factor ``w`` per block.

    Bounded by 1 and dependent within a block.
    """
    draws = rng.uniform(-1.0, 1.0, size=(blocks, dim + 1))
    return 0.5 * (draws[:, :1] + draws[:, 1:])


BLOCK_LAWS = {
    "uniform": uniform_law,
    "rademacher": rademacher_law,
    "common_factor": common_factor_law,
}


def _law(law):
    if callable(law):
        return law
    try:
        return BLOCK_LAWS[law]
    except KeyError:
        raise KeyError(f"unknown block law {law!r}; choose from {sorted(BLOCK_LAWS)}") from None


def _law_name(law):
    return law if isinstance(law, str) else getattr(law, "__name__", "custom")


def _check_bounded(arr, what):
    arr = np.asarray(arr, dtype=np.float64)
    if not np.all(np.abs(arr) <= 1.0):  # NaN fails too
        raise BoundViolation(f"{what} produced an entry outside [-1, 1]")
    return arr


def _square(mat, n, what):
    mat = np.asarray(mat, dtype=np.float64)
    if mat.shape != (n, n):
        raise ValueError(f"{what} must be {n}x{n}, got {mat.shape}")
    if not np.all(np.isfinite(mat)):
        raise ValueError(f"{what} has non-finite entries")
    mat = mat.copy()
    mat.setflags(write=False)
    return mat


class EnsembleSpec:
    """Base class.  Subclasses define the block law and matrix assembly."""

    kind = "abstract"
    #: whether ``sample`` returns a symmetric matrix rather than data X
    symmetric = False
    #: whether data entries must satisfy |X_ij| <= 1
    bounded = False

    @property
    def dim(self):
        """Dimension of the statistic matrix S."""
        return self.n

    @property
    def num_blocks(self):
        raise NotImplementedError

    def draw_blocks(self, rng):
        raise NotImplementedError

    def assemble(self, blocks):
        """Matrix (X, or M for symmetric kinds) from the block array."""
        raise NotImplementedError

    def statistic_dense(self, matrix):
        """The matrix S whose spectrum is studied, as an ndarray."""
        if self.symmetric:
            return np.asarray(matrix) / np.sqrt(self.m)
        return wishart_dense(matrix)

    def analytic_spectrum(self, blocks):
        """Closed-form eigenvalues of S, when known; otherwise ``None``."""
        return None

    def params(self):
        """JSON-friendly parameter dict (without the kind tag)."""
        raise NotImplementedError


@dataclass(frozen=True, eq=False)
class WalshBernoulli(EnsembleSpec):
    """Rows ``R_i v_i'`` with Walsh rows ``v_i`` and ``R_i ~ Bernoulli(p)``, n = m = 2^k."""

    k: int
    p: float = 0.5
    kind = "walsh_bernoulli"
    bounded = True
    _walsh: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise ValueError("p must lie in [0, 1]")
        h = walsh_rows(self.k)
        h.setflags(write=False)
        object.__setattr__(self, "_walsh", h)

    @property
    def n(self):
        return 1 << int(self.k)

    @property
    def m(self):
        return self.n

    @property
    def num_blocks(self):
        return self.n

    def draw_blocks(self, rng):
        return (rng.random(self.n) < self.p).astype(np.float64)

    def assemble(self, blocks):
        return blocks[:, None] * self._walsh

    def analytic_spectrum(self, blocks):
        return np.sort(blocks * blocks)

    def params(self):
        return {"k": int(self.k), "p": float(self.p)}


@dataclass(frozen=True, eq=False)
class DiagonalBernoulli(EnsembleSpec):
    """``X = diag(R_1, ..., R_n)`` with i.i.d. Bernoulli(p) ``R_i``."""

    n: int
    p: float = 0.5
    kind = "diagonal_bernoulli"
    bounded = True

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be positive")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError("p must lie in [0, 1]")

    @property
    def m(self):
        return self.n

    @property
    def num_blocks(self):
        return self.n

    def draw_blocks(self, rng):
        return (rng.random(self.n) < self.p).astype(np.float64)

    def assemble(self, blocks):
        return np.diag(blocks)

    def analytic_spectrum(self, blocks):
        return np.sort(blocks * blocks / self.n)

    def params(self):
        return {"n": int(self.n), "p": float(self.p)}


@dataclass(frozen=True, eq=False)
class IndependentRows(EnsembleSpec):
    """``m x n`` data with independent rows drawn from ``row_law``; entries bounded by 1."""

    n: int
    m: int
    row_law: Union[str, Callable] = "uniform"
    kind = "independent_rows"
    bounded = True

    def __post_init__(self):
        if self.n < 1 or self.m < 1:
            raise ValueError("n and m must be positive")
        _law(self.row_law)

    @property
    def num_blocks(self):
        return self.m

    def draw_blocks(self, rng):
        rows = _law(self.row_law)(rng, self.m, self.n)
        return _check_bounded(rows, f"row law {_law_name(self.row_law)}")

    def assemble(self, blocks):
        return blocks

    def params(self):
        return {"n": int(self.n), "m": int(self.m), "row_law": _law_name(self.row_law)}


@dataclass(frozen=True, eq=False)
class MA2(EnsembleSpec):
    """Rows ``X_i = Y_{i+1} + B Y_i`` with independent innovations in [-1, 1]^n."""

    n: int
    m: int
    B: np.ndarray = field(repr=False)
    innovation_law: Union[str, Callable] = "uniform"
    kind = "ma2"

    def __post_init__(self):
        if self.n < 1 or self.m < 1:
            raise ValueError("n and m must be positive")
        object.__setattr__(self, "B", _square(self.B, self.n, "B"))
        _law(self.innovation_law)

    @property
    def num_blocks(self):
        return self.m + 1

    def draw_blocks(self, rng):
        y = _law(self.innovation_law)(rng, self.m + 1, self.n)
        return _check_bounded(y, f"innovation law {_law_name(self.innovation_law)}")

    def assemble(self, blocks):
        return blocks[1:] + blocks[:-1] @ self.B.T

    def params(self):
        return {"n": int(self.n), "m": int(self.m), "innovation_law": _law_name(self.innovation_law)}


@dataclass(frozen=True, eq=False)
class MA2Factor(EnsembleSpec):
    """MA(2) rows with innovations ``Y_i = U Z_i``, ``Z_ij`` independent and bounded by 1."""

    n: int
    m: int
    B: np.ndarray = field(repr=False)
    U: np.ndarray = field(repr=False)
    entry_law: Union[str, Callable] = "uniform"
    kind = "ma2_factor"

    def __post_init__(self):
        if self.n < 1 or self.m < 1:
            raise ValueError("n and m must be positive")
        object.__setattr__(self, "B", _square(self.B, self.n, "B"))
        object.__setattr__(self, "U", _square(self.U, self.n, "U"))
        if self.entry_law == "common_factor":
            raise ValueError("ma2_factor needs independent entries; common_factor is dependent")
        _law(self.entry_law)

    @property
    def num_blocks(self):
        return self.m + 1

    def draw_blocks(self, rng):
        z = _law(self.entry_law)(rng, self.m + 1, self.n)
        return _check_bounded(z, f"entry law {_law_name(self.entry_law)}")

    def assemble(self, blocks):
        y = blocks @ self.U.T
        return y[1:] + y[:-1] @ self.B.T

    def params(self):
        return {"n": int(self.n), "m": int(self.m), "entry_law": _law_name(self.entry_law)}


@dataclass(frozen=True, eq=False)
class SequentialGraph(EnsembleSpec):
    """Adjacency matrix of a graph grown one member at a time.

    Member i links to each earlier member independently with probability
    ``q``, or according to ``row_law(rng, n)``, which must return an ``(n, n)``
    array whose row i (strictly below the diagonal) holds member i's 0/1 links
    and whose rows are independent.  No self-loops; ``S = M / sqrt(n)``.
    """

    n: int
    q: float = 0.5
    row_law: Optional[Callable] = None
    kind = "sequential_graph"
    symmetric = True

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be positive")
        if not 0.0 <= self.q <= 1.0:
            raise ValueError("q must lie in [0, 1]")

    @property
    def m(self):
        return self.n

    @property
    def num_blocks(self):
        return self.n

    def draw_blocks(self, rng):
        if self.row_law is None:
            links = (rng.random((self.n, self.n)) < self.q).astype(np.float64)
        else:
            links = np.asarray(self.row_law(rng, self.n), dtype=np.float64)
            if links.shape != (self.n, self.n):
                raise ValueError(f"row_law must return shape {(self.n, self.n)}")
        links = np.tril(links, -1)
        if not np.all((links == 0.0) | (links == 1.0)):
            raise BoundViolation("graph row law produced a non 0/1 link")
        return links

    def assemble(self, blocks):
        return blocks + blocks.T

    def params(self):
        out = {"n": int(self.n), "q": float(self.q)}
        if self.row_law is not None:
            out["row_law"] = _law_name(self.row_law)
        return out


@dataclass(frozen=True)
class SampleHandle:
    spec: EnsembleSpec
    master_seed: int
    replication_index: int

    def __post_init__(self):
        if self.replication_index < 0:
            raise ValueError("replication_index must be nonnegative")


def draw(handle, variant=0):
    """Block array for a handle (variant 1 is the independent copy)."""
    return handle.spec.draw_blocks(stream(handle.master_seed, handle.replication_index, variant))


def _wrap(spec, matrix):
    if spec.symmetric:
        return SymMatrix(matrix)
    return DataMatrix(matrix, bounded=spec.bounded)


def sample(handle):
    """Sampled data matrix ``X`` (or symmetric ``M`` for the graph ensemble)."""
    spec = handle.spec
    return _wrap(spec, spec.assemble(draw(handle)))


def replace_block(handle, i):
    """The sampled matrix and its copy with block ``i`` (0-based) redrawn.

    All other blocks are bit-identical between the two.
    """
    spec = handle.spec
    if not 0 <= i < spec.num_blocks:
        raise IndexOutOfRange(f"block index {i} outside 0..{spec.num_blocks - 1}")
    blocks = draw(handle)
    fresh = draw(handle, variant=1)
    swapped = blocks.copy()
    swapped[i] = fresh[i]
    return _wrap(spec, spec.assemble(blocks)), _wrap(spec, spec.assemble(swapped))


def statistic_stack(spec, master_seed, indices):
    """Dense statistic matrices ``S`` for a sequence of replication indices."""
    out = np.empty((len(indices), spec.dim, spec.dim))
    for j, rep in enumerate(indices):
        blocks = spec.draw_blocks(stream(master_seed, rep))
        out[j] = spec.statistic_dense(spec.assemble(blocks))
    return out


def analytic_spectra(spec, master_seed, indices):
    """Closed-form spectra where the ensemble provides them (Walsh, diagonal)."""
    out = np.empty((len(indices), spec.dim))
    for j, rep in enumerate(indices):
        vals = spec.analytic_spectrum(spec.draw_blocks(stream(master_seed, rep)))
        if vals is None:
            raise NotImplementedError(f"{spec.kind} has no closed-form spectrum")
        out[j] = vals
    return out


def from_params(kind, **params):
    """Build an ensemble from its kind tag and keyword parameters."""
    try:
        cls = ENSEMBLES[kind]
    except KeyError:
        raise KeyError(f"unknown ensemble kind {kind!r}; choose from {sorted(ENSEMBLES)}") from None
    return cls(**params)


ENSEMBLES = {
    cls.kind: cls
    for cls in (WalshBernoulli, DiagonalBernoulli, IndependentRows, MA2, MA2Factor, SequentialGraph)
}
