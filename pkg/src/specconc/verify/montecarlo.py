"""Monte Carlo tail estimation with exact binomial confidence intervals.

Replications are keyed by index.  The center is estimated on indices
``[0, pilot_reps)`` and tails on the following ``reps`` indices, so the two
streams are disjoint.  Work is split into fixed-size chunks whose results are
concatenated in index order; the output does not depend on the worker count.
"""

from __future__ import annotations

import csv
import io
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy import stats

from ..bounds import evaluate_bound, exponent
from ..ensembles import analytic_spectra, statistic_stack
from ..linalg import DEFAULT_TOL, eigvalsh_batch, format_float, spectral_functional_batch

CHUNK = 64
CENTER_KINDS = ("mean", "median")
CSV_COLUMNS = (
    "kind",
    "epsilon",
    "reps",
    "exceed_count",
    "estimate",
    "ci_low",
    "ci_high",
    "bound_tag",
    "bound_value",
    "violated",
)


def statistic_values(spec, f, seed, indices, *, workers=1, fast_path=False, tol=DEFAULT_TOL):
    """``F_S(f)`` for each replication index, in index order.

    With ``fast_path`` the closed-form spectrum of the ensemble is used instead
    of the eigensolver (only Walsh and diagonal Bernoulli ensembles have one).
    """
    indices = range(indices.start, indices.stop) if isinstance(indices, range) else list(indices)
    chunks = [indices[i : i + CHUNK] for i in range(0, len(indices), CHUNK)]

    def run(ix):
        if fast_path:
            vals = analytic_spectra(spec, seed, ix)
        else:
            vals = eigvalsh_batch(statistic_stack(spec, seed, ix), tol)
        return spectral_functional_batch(vals, f)

    if not chunks:
        return np.empty(0)
    if workers <= 1 or len(chunks) == 1:
        parts = [run(c) for c in chunks]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run, chunks))
    return np.concatenate(parts)


@dataclass(frozen=True)
class CenterEstimate:
    kind: str
    value: float
    pilot_reps: int
    standard_error_proxy: float = 0.0

    def __post_init__(self):
        if self.kind not in CENTER_KINDS:
            raise ValueError(f"center kind must be one of {CENTER_KINDS}, got {self.kind!r}")

    @classmethod
    def exact(cls, kind, value):
        """A known center (no pilot stream; estimation starts at index 0)."""
        return cls(kind, float(value), 0, 0.0)


def center_of(values, kind):
    """Sample mean, or the lower sample median."""
    values = np.asarray(values, dtype=np.float64)
    if kind == "mean":
        return float(np.mean(values))
    if kind == "median":
        return float(np.sort(values)[(values.size - 1) // 2])
    raise ValueError(f"center kind must be one of {CENTER_KINDS}, got {kind!r}")


def estimate_center(spec, f, pilot_reps, seed, kind="median", *, workers=1, fast_path=False):
    """Estimate the mean or median of ``F_S(f)`` from a pilot run.

    The standard-error proxy is ``sd / sqrt(N)`` for the mean and
    ``sqrt(pi/2) * sd / sqrt(N)`` for the median (normal approximation); bound
    comparisons inherit this pilot error.
    """
    if pilot_reps < 100:
        raise ValueError("pilot_reps must be at least 100")
    values = statistic_values(spec, f, seed, range(pilot_reps), workers=workers, fast_path=fast_path)
    value = center_of(values, kind)
    se = float(np.std(values, ddof=1) / np.sqrt(pilot_reps))
    if kind == "median":
        se *= np.sqrt(np.pi / 2.0)
    return CenterEstimate(kind, value, int(pilot_reps), se)


def clopper_pearson(k, n, level=0.99):
    """Exact two-sided binomial confidence interval for ``k`` successes in ``n``."""
    if not 0 <= k <= n or n < 1:
        raise ValueError(f"need 0 <= k <= n and n >= 1, got k={k}, n={n}")
    if not 0.0 < level < 1.0:
        raise ValueError("level must lie in (0, 1)")
    alpha = 1.0 - level
    lo = 0.0 if k == 0 else float(stats.beta.ppf(alpha / 2.0, k, n - k + 1))
    hi = 1.0 if k == n else float(stats.beta.ppf(1.0 - alpha / 2.0, k + 1, n - k))
    return lo, hi


@dataclass(frozen=True)
class BoundCheck:
    tag: str
    value: float
    exponent: float
    normative: bool
    violated: Optional[bool]

    def violated_text(self):
        if self.violated is None:
            return "n/a"
        return "true" if self.violated else "false"


@dataclass(frozen=True)
class TailReport:
    """Tail frequency of ``|F_S(f) - center| >= eps`` with its bound comparisons.

    A bound is normative when it is stated for the center kind in use; only
    normative bounds can be flagged violated, and only when ``ci_low`` exceeds
    the bound value.
    """

    kind: str
    epsilon: float
    reps: int
    exceed_count: int
    estimate: float
    ci_low: float
    ci_high: float
    ci_level: float
    center_kind: str
    center_value: float
    bounds: tuple = field(default_factory=tuple)

    @property
    def violated(self):
        return any(b.violated for b in self.bounds if b.normative)

    def to_dict(self):
        return {
            "kind": self.kind,
            "epsilon": self.epsilon,
            "reps": self.reps,
            "exceed_count": self.exceed_count,
            "estimate": self.estimate,
            "ci_low": self.ci_low,
            "ci_high": self.ci_high,
            "ci_level": self.ci_level,
            "center": {"kind": self.center_kind, "value": self.center_value},
            "bounds": [
                {
                    "tag": b.tag,
                    "value": b.value,
                    "exponent": b.exponent,
                    "normative": b.normative,
                    "violated": b.violated,
                }
                for b in self.bounds
            ],
        }


def exceed_counts(values, center, eps_grid):
    """Number of values with ``|v - center| >= eps`` for each eps."""
    dev = np.abs(np.asarray(values, dtype=np.float64) - center)
    eps = np.asarray(eps_grid, dtype=np.float64)
    return (dev[:, None] >= eps[None, :]).sum(axis=0).astype(np.int64)


def build_reports(kind, values, center, eps_grid, ci_level=0.99, bounds=()):
    reps = len(values)
    counts = exceed_counts(values, center.value, eps_grid)
    reports = []
    for eps, count in zip(eps_grid, counts):
        count = int(count)
        lo, hi = clopper_pearson(count, reps, ci_level)
        checks = []
        for bk in bounds:
            # eps = 0 is the limit eps -> 0+: the bare prefactor
            expo = exponent(bk, eps) if eps > 0 else 0.0
            value = evaluate_bound(bk, eps) if eps > 0 else bk.prefactor
            normative = bk.center == center.kind
            checks.append(
                BoundCheck(
                    tag=str(bk.tag),
                    value=value,
                    exponent=expo,
                    normative=normative,
                    violated=(lo > value) if normative else None,
                )
            )
        reports.append(
            TailReport(
                kind=kind,
                epsilon=float(eps),
                reps=reps,
                exceed_count=count,
                estimate=count / reps,
                ci_low=lo,
                ci_high=hi,
                ci_level=float(ci_level),
                center_kind=center.kind,
                center_value=center.value,
                bounds=tuple(checks),
            )
        )
    return reports


def estimate_tail(
    spec,
    f,
    center,
    eps_grid,
    reps,
    seed,
    ci_level=0.99,
    bounds=(),
    *,
    workers=1,
    fast_path=False,
    first_index=None,
):
    """Estimate ``P(|F_S(f) - center| >= eps)`` on a grid of eps.

    Replications ``first_index .. first_index + reps - 1`` are used; by default
    they start right after the pilot range of ``center``.
    """
    if reps < 1000:
        raise ValueError("reps must be at least 1000")
    eps_grid = [float(e) for e in eps_grid]
    if not eps_grid:
        raise ValueError("eps grid is empty")
    if any(e < 0 for e in eps_grid) or any(b <= a for a, b in zip(eps_grid, eps_grid[1:])):
        raise ValueError("eps grid must be nonnegative and strictly ascending")
    start = center.pilot_reps if first_index is None else int(first_index)
    if start < center.pilot_reps:
        raise ValueError("estimation indices overlap the pilot range")
    values = statistic_values(
        spec, f, seed, range(start, start + reps), workers=workers, fast_path=fast_path
    )
    return build_reports(spec.kind, values, center, eps_grid, ci_level, bounds)


def reports_to_csv(reports):
    """CSV text, one row per (eps, bound); rows without bounds leave those cells empty."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for rep in reports:
        head = [
            rep.kind,
            format_float(rep.epsilon),
            rep.reps,
            rep.exceed_count,
            format_float(rep.estimate),
            format_float(rep.ci_low),
            format_float(rep.ci_high),
        ]
        if not rep.bounds:
            writer.writerow(head + ["", "", ""])
        for b in rep.bounds:
            writer.writerow(head + [b.tag, format_float(b.value), b.violated_text()])
    return buf.getvalue()
