"""Which bounds apply to an ensemble/function pair, with their constants."""

from ..bounds import BoundKind, BoundTag
from ..ensembles import (
    MA2,
    DiagonalBernoulli,
    IndependentRows,
    MA2Factor,
    SequentialGraph,
    WalshBernoulli,
)
from ..linalg import operator_norm


def ma_constants(spec, tol=1e-12):
    """``C_B = 1 + ||B||`` and, for the factor model, ``C = (1 + ||B||) ||U||``."""
    c_b = 1.0 + operator_norm(spec.B, tol)
    out = {"C_B": c_b}
    if isinstance(spec, MA2Factor):
        out["C"] = c_b * operator_norm(spec.U, tol)
    return out


def applicable_bounds(spec, f, tol=1e-12):
    """Bound kinds whose hypotheses the pair ``(spec, f)`` satisfies.

    Independent bounded rows get the Wishart bounds; the graph gets the
    linear-map bound (``p = m = n``, ``C_M = 1``) and the rank-perturbation
    bound with ``r = 2``; MA(2) ensembles get their own constants.
    """
    n, m = spec.n, spec.m
    out = []
    if isinstance(spec, (WalshBernoulli, DiagonalBernoulli, IndependentRows)):
        if f.supports_lip_sq:
            out.append(BoundKind(BoundTag.T1_LIP, {"n": n, "m": m, "L": f.lip_sq}))
        if f.supports_variation:
            out.append(BoundKind(BoundTag.T1_BV, {"n": n, "m": m, "V": f.variation}))
    elif isinstance(spec, SequentialGraph):
        if f.supports_lip:
            out.append(BoundKind(BoundTag.T2, {"n": n, "m": n, "p": n, "C_M": 1.0, "L": f.lip}))
        if f.supports_variation:
            out.append(BoundKind(BoundTag.T3, {"n": n, "m": n, "r": 2, "V": f.variation}))
    elif isinstance(spec, MA2Factor):
        consts = ma_constants(spec, tol)
        if f.supports_lip_sq:
            out.append(BoundKind(BoundTag.GZ_GEN, {"n": n, "m": m, "C": consts["C"], "L": f.lip_sq}))
        if f.supports_variation:
            out.append(BoundKind(BoundTag.MA_BV, {"n": n, "m": m, "V": f.variation}))
    elif isinstance(spec, MA2):
        consts = ma_constants(spec, tol)
        if f.supports_lip_sq:
            out.append(
                BoundKind(BoundTag.MA_LIP, {"n": n, "m": m, "C_B": consts["C_B"], "L": f.lip_sq})
            )
        if f.supports_variation:
            out.append(BoundKind(BoundTag.MA_BV, {"n": n, "m": m, "V": f.variation}))
    return out


def default_rank_bound(spec):
    """Rank of ``S - S_(i)`` after redrawing one block, used as ``r``.

    One data row moves ``X'X`` by rank at most 1; an MA(2) innovation touches
    two rows; a graph member changes one row and one column.
    """
    if isinstance(spec, (MA2, MA2Factor, SequentialGraph)):
        return 2
    return 1
