from fractions import Fraction
from math import comb

import numpy as np
import pytest
from scipy import stats

from specconc.verify import (
    binomial_exact_law_test,
    binomial_pmf,
    chi_square_gof,
    exact_binomial_tail,
    merge_tail_bins,
)


def test_pmf_n8():
    assert binomial_pmf(8) == [Fraction(comb(8, j), 256) for j in range(9)]
    assert sum(binomial_pmf(13, Fraction(1, 3))) == 1


def test_exact_tail_n8():
    assert exact_binomial_tail(8, 0.25) == 74 / 256
    assert exact_binomial_tail(8, 0.0) == 1.0
    assert exact_binomial_tail(8, 0.6) == 0.0


@pytest.mark.parametrize("n, eps", [(8, 0.125), (16, 0.2), (64, 0.1), (31, 0.3)])
def test_exact_tail_vs_scipy(n, eps):
    # scipy oracle: P(B <= n/2 - n eps) + P(B >= n/2 + n eps) with exact integer cutoffs
    lo = int(np.floor(n * (0.5 - eps) + 1e-9))
    hi = int(np.ceil(n * (0.5 + eps) - 1e-9))
    ref = stats.binom.cdf(lo, n, 0.5) + stats.binom.sf(hi - 1, n, 0.5)
    assert exact_binomial_tail(n, eps) == pytest.approx(ref, rel=1e-12)


def test_merge_tail_bins():
    obs, exp = merge_tail_bins([1, 2, 10, 3, 1], [1.0, 3.0, 10.0, 4.0, 2.0])
    assert exp.tolist() == [14.0, 6.0]
    assert obs.tolist() == [13.0, 4.0]
    obs, exp = merge_tail_bins([5, 5], [6.0, 6.0])
    assert exp.tolist() == [6.0, 6.0]


def test_chi_square_matches_scipy_when_no_merging():
    counts = np.array([20, 30, 50])
    probs = np.array([0.25, 0.25, 0.5])
    stat, dof, p = chi_square_gof(counts, probs)
    ref = stats.chisquare(counts, 100 * probs)
    assert stat == pytest.approx(ref.statistic)
    assert p == pytest.approx(ref.pvalue)
    assert dof == 2


def test_law_test_passes_and_detects_wrong_law():
    good = binomial_exact_law_test(4, 2000, 13)
    assert good.passed and sum(good.counts) == 2000
    skewed = binomial_exact_law_test(4, 2000, 13, p=0.6)
    assert skewed.passed  # against its own law Binomial(16, 0.6)
    # the same counts compared with Binomial(16, 1/2) are rejected
    half = [float(w) for w in binomial_pmf(16)]
    _, _, p_value = chi_square_gof(skewed.counts, half)
    assert p_value < 1e-6


def test_forced_sample_is_deterministic():
    res = binomial_exact_law_test(3, 200, 1, p=1.0)
    assert res.counts[-1] == 200


def test_law_test_validation():
    with pytest.raises(ValueError):
        binomial_exact_law_test(7, 2000, 1)
    with pytest.raises(ValueError):
        binomial_exact_law_test(3, 10, 1)
