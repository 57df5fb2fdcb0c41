"""Monte Carlo tail verification and property suites."""

from .checks import (
    CheckReport,
    check_bounded_difference,
    check_dilation_identity,
    check_rank_inequalities,
    check_trace_lipschitz,
    rank_of_block_change,
)
from .exact import (
    GoodnessOfFit,
    binomial_exact_law_test,
    binomial_pmf,
    chi_square_gof,
    exact_binomial_tail,
    merge_tail_bins,
)
from .montecarlo import (
    BoundCheck,
    CenterEstimate,
    TailReport,
    build_reports,
    center_of,
    clopper_pearson,
    estimate_center,
    estimate_tail,
    exceed_counts,
    reports_to_csv,
    statistic_values,
)
from .pairing import applicable_bounds, default_rank_bound, ma_constants

__all__ = [
    "BoundCheck",
    "CenterEstimate",
    "CheckReport",
    "GoodnessOfFit",
    "TailReport",
    "applicable_bounds",
    "binomial_exact_law_test",
    "binomial_pmf",
    "build_reports",
    "center_of",
    "check_bounded_difference",
    "check_dilation_identity",
    "check_rank_inequalities",
    "check_trace_lipschitz",
    "chi_square_gof",
    "clopper_pearson",
    "default_rank_bound",
    "estimate_center",
    "estimate_tail",
    "exact_binomial_tail",
    "exceed_counts",
    "ma_constants",
    "merge_tail_bins",
    "rank_of_block_change",
    "reports_to_csv",
    "statistic_values",
]
