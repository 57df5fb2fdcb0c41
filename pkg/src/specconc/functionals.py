"""Test functions with certified metadata.

A :class:`TestFunction` carries the constants the concentration bounds need:
the Lipschitz constant of ``x -> f(x**2)`` (``lip_sq``), the total variation
``V_f(a, b)`` (``variation``) and the Lipschitz constant of ``f`` (``lip``),
together with convexity flags.  Declared constants are upper-bound
certificates; :func:`make_custom` audits them against grid and random-pair
witnesses before accepting a user function.

Evaluators must be pure and accept numpy arrays.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import GridOutsideDomain, InconsistentMetadata

AUDIT_TOL = 1e-9
REAL_LINE = (-math.inf, math.inf)


@dataclass(frozen=True)
class TestFunction:
    evaluator: Callable = field(repr=False)
    name: str = "custom"
    domain: tuple = REAL_LINE
    lip_sq: Optional[float] = None
    variation: Optional[float] = None
    convex_sq: bool = False
    convex: bool = False
    lip: Optional[float] = None

    __test__ = False  # not a pytest class

    def __post_init__(self):
        a, b = self.domain
        if not a < b:
            raise InconsistentMetadata(f"empty domain ({a}, {b})")
        for key in ("lip_sq", "variation", "lip"):
            val = getattr(self, key)
            if val is not None and not (val >= 0 and math.isfinite(val)):
                raise InconsistentMetadata(f"{key} must be finite and nonnegative, got {val}")
        if not (self.supports_lip_sq or self.supports_variation or self.supports_lip):
            raise InconsistentMetadata(
                f"{self.name}: declare lip_sq with convex_sq, variation, or lip with convex"
            )

    def __call__(self, x):
        return np.asarray(self.evaluator(np.asarray(x, dtype=np.float64)), dtype=np.float64)

    @property
    def supports_lip_sq(self):
        """x -> f(x^2) is declared convex and Lipschitz."""
        return self.convex_sq and self.lip_sq is not None

    @property
    def supports_variation(self):
        return self.variation is not None

    @property
    def supports_lip(self):
        """f itself is declared convex and Lipschitz."""
        return self.convex and self.lip is not None

    def squared(self):
        """Evaluator of ``x -> f(x**2)``."""
        return lambda x: self(np.asarray(x, dtype=np.float64) ** 2)


def make_indicator(lam):
    """``f(x) = 1{x <= lam}``: total variation 1 on the real line."""
    lam = float(lam)
    if not math.isfinite(lam):
        raise ValueError("indicator threshold must be finite")
    return TestFunction(
        evaluator=lambda x: (x <= lam).astype(np.float64),
        name=f"indicator({lam!r})",
        variation=1.0,
    )


def make_exceedance(lam):
    """``f(x) = 1{x > lam}``, the complementary step (variation 1).

    With ``lam = 1/2`` this extends the identity on ``{0, 1}``.
    """
    lam = float(lam)
    if not math.isfinite(lam):
        raise ValueError("threshold must be finite")
    return TestFunction(
        evaluator=lambda x: (x > lam).astype(np.float64),
        name=f"exceed({lam!r})",
        variation=1.0,
    )


def make_sqrt_abs():
    # f(x^2) = |x|: convex with Lipschitz constant 1
    return TestFunction(
        evaluator=lambda x: np.sqrt(np.abs(x)),
        name="sqrt_abs",
        lip_sq=1.0,
        convex_sq=True,
    )


def make_identity():
    return TestFunction(evaluator=lambda x: x, name="identity", lip=1.0, convex=True, convex_sq=True)


def make_abs():
    return TestFunction(evaluator=np.abs, name="abs", lip=1.0, convex=True, convex_sq=True)


def verify_variation(f, grid):
    """Total variation of ``f`` along an ascending grid inside its domain.

    The result is a lower bound on ``V_f(a, b)``.
    """
    grid = np.asarray(grid, dtype=np.float64)
    if grid.ndim != 1 or grid.size == 0:
        raise ValueError("grid must be a non-empty 1-d sequence")
    a, b = f.domain
    if np.any(grid <= a) or np.any(grid >= b):
        raise GridOutsideDomain(f"grid leaves the open domain ({a}, {b})")
    if np.any(np.diff(grid) < 0):
        raise ValueError("grid must be ascending")
    return float(np.sum(np.abs(np.diff(f(grid)))))


def _pair_ratio_max(g, x, y):
    num = np.abs(g(x) - g(y))
    den = np.abs(x - y)
    keep = den > 0
    if not np.any(keep):
        return 0.0
    return float(np.max(num[keep] / den[keep]))


def _audit_points(domain, count, seed):
    a, b = domain
    lo = max(a, -10.0)
    hi = min(b, 10.0)
    rng = np.random.Generator(np.random.Philox(key=seed))
    pts = rng.uniform(lo, hi, size=(2, count))
    inside = (pts > a) & (pts < b)
    keep = inside[0] & inside[1]
    return pts[0, keep], pts[1, keep]


def verify_lip_sq(f, pairs=20_000, seed=7):
    """Largest observed ``|f(x^2) - f(y^2)| / |x - y|`` over random pairs.

    Only ``x`` with ``x**2`` inside the domain are used.
    """
    x, y = _audit_points((-10.0, 10.0), pairs, seed)
    a, b = f.domain
    ok = (x * x > a) & (x * x < b) & (y * y > a) & (y * y < b)
    return _pair_ratio_max(f.squared(), x[ok], y[ok])


def verify_lip(f, pairs=20_000, seed=11):
    """Largest observed ``|f(x) - f(y)| / |x - y|`` over random pairs in the domain."""
    x, y = _audit_points(f.domain, pairs, seed)
    return _pair_ratio_max(f, x, y)


def default_audit_grid(domain, points=2001):
    a, b = domain
    lo = max(a, -10.0)
    hi = min(b, 10.0)
    grid = np.linspace(lo, hi, points)
    return grid[(grid > a) & (grid < b)]


def audit(f, tol=AUDIT_TOL):
    """Check declared constants against witnesses; raise on contradiction."""
    if f.variation is not None:
        seen = verify_variation(f, default_audit_grid(f.domain))
        if seen > f.variation + tol:
            raise InconsistentMetadata(
                f"{f.name}: grid variation {seen:.6g} exceeds declared {f.variation:.6g}"
            )
    if f.lip is not None:
        seen = verify_lip(f)
        if seen > f.lip + tol:
            raise InconsistentMetadata(f"{f.name}: Lipschitz witness {seen:.6g} exceeds {f.lip:.6g}")
    if f.lip_sq is not None:
        seen = verify_lip_sq(f)
        if seen > f.lip_sq + tol:
            raise InconsistentMetadata(
                f"{f.name}: witness {seen:.6g} for f(x^2) exceeds declared {f.lip_sq:.6g}"
            )
    return f


def make_custom(
    evaluator,
    domain=REAL_LINE,
    *,
    name="custom",
    lip_sq=None,
    variation=None,
    convex_sq=False,
    convex=False,
    lip=None,
):
    """Wrap a user function with caller-declared metadata, audited on entry."""
    f = TestFunction(
        evaluator=evaluator,
        name=name,
        domain=tuple(float(v) for v in domain),
        lip_sq=lip_sq,
        variation=variation,
        convex_sq=convex_sq,
        convex=convex,
        lip=lip,
    )
    return audit(f)


_BUILTINS = {
    "sqrt_abs": make_sqrt_abs,
    "identity": make_identity,
    "abs": make_abs,
}
_PARAMETRIC = {
    "indicator": make_indicator,
    "exceed": make_exceedance,
}
_CALL = re.compile(r"^\s*([a-z_]+)\s*\(\s*([^()]*?)\s*\)\s*$")


def builtin(spec):
    """Resolve a built-in function by name, e.g. ``"sqrt_abs"`` or ``"indicator(0.5)"``."""
    if isinstance(spec, dict):
        name = spec.get("name")
        if name in _PARAMETRIC:
            if "lambda" not in spec:
                raise KeyError(f"function {name} needs a 'lambda' parameter")
            return _PARAMETRIC[name](float(spec["lambda"]))
        spec = name
    if not isinstance(spec, str):
        raise KeyError(f"unknown function {spec!r}")
    if spec.strip() in _BUILTINS:
        return _BUILTINS[spec.strip()]()
    match = _CALL.match(spec)
    if match and match.group(1) in _PARAMETRIC:
        return _PARAMETRIC[match.group(1)](float(match.group(2)))
    raise KeyError(f"unknown function {spec!r}")


def builtin_names():
    return sorted(_BUILTINS) + [f"{k}(lambda)" for k in sorted(_PARAMETRIC)]
