"""Exact binomial law of the Walsh/Bernoulli ensemble.

For that ensemble ``n F_S(f) ~ Binomial(n, 1/2)`` when ``f`` extends the
identity on ``{0, 1}``.  This module enumerates the law exactly and tests the
sampled pipeline against it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy import stats

from ..ensembles import WalshBernoulli
from ..functionals import make_exceedance
from .montecarlo import statistic_values

MIN_EXPECTED = 5.0


def binomial_pmf(n, p=Fraction(1, 2)):
    """Exact pmf of Binomial(n, p) as Fractions."""
    p = Fraction(p)
    return [math.comb(n, j) * p**j * (1 - p) ** (n - j) for j in range(n + 1)]


def exact_binomial_tail(n, eps, center=0.5, p=0.5):
    """``P(|B/n - center| >= eps)`` for ``B ~ Binomial(n, p)``, by enumeration.

    Comparisons use exact rationals of the given doubles.
    """
    c = Fraction(center)
    e = Fraction(eps)
    total = sum(
        (w for j, w in enumerate(binomial_pmf(n, Fraction(p))) if abs(Fraction(j, n) - c) >= e),
        Fraction(0),
    )
    return float(total)


def merge_tail_bins(observed, expected, minimum=MIN_EXPECTED):
    """Merge outer bins inward until each end bin expects at least ``minimum``."""
    obs = [float(o) for o in observed]
    exp = [float(e) for e in expected]
    while len(exp) > 1 and exp[0] < minimum:
        e, o = exp.pop(0), obs.pop(0)
        exp[0] += e
        obs[0] += o
    while len(exp) > 1 and exp[-1] < minimum:
        e, o = exp.pop(), obs.pop()
        exp[-1] += e
        obs[-1] += o
    return np.array(obs), np.array(exp)


@dataclass(frozen=True)
class GoodnessOfFit:
    n: int
    reps: int
    statistic: float
    dof: int
    p_value: float
    significance: float
    counts: tuple

    @property
    def passed(self):
        return self.p_value > self.significance


def chi_square_gof(counts, probs, significance=0.001):
    counts = np.asarray(counts, dtype=np.float64)
    reps = counts.sum()
    obs, exp = merge_tail_bins(counts, reps * np.asarray(probs, dtype=np.float64))
    stat = float(np.sum((obs - exp) ** 2 / exp))
    dof = len(exp) - 1
    p_value = float(stats.chi2.sf(stat, dof)) if dof > 0 else 1.0
    return stat, dof, p_value


def binomial_exact_law_test(k, reps, seed, significance=0.001, *, p=0.5, fast_path=False, workers=1):
    """Chi-square test of ``n F_S(f)`` against Binomial(n, 1/2) for the Walsh ensemble.

    ``f(x) = 1{x > 1/2}`` extends the identity on ``{0, 1}``, so
    ``n F_S(f)`` is an integer count computed through the full eigensolver
    pipeline (unless ``fast_path``).
    """
    spec = WalshBernoulli(k, p)
    n = spec.n
    if n > 64:
        raise ValueError("exact probabilities are only tabulated for n <= 64")
    if reps < 10 * n:
        raise ValueError("reps must be at least 10 n")
    values = statistic_values(
        spec, make_exceedance(0.5), seed, range(reps), workers=workers, fast_path=fast_path
    )
    scaled = np.rint(values * n).astype(np.int64)
    counts = np.bincount(scaled, minlength=n + 1)
    probs = [float(w) for w in binomial_pmf(n, Fraction(p))]
    stat, dof, p_value = chi_square_gof(counts, probs, significance)
    return GoodnessOfFit(n, reps, stat, dof, p_value, significance, tuple(int(c) for c in counts))
