"""Closed-form tail bounds and the Bernoulli-ensemble rate constants.

Every bound has the shape ``prefactor * exp(exponent)``.  The exponent is
computed first and reported raw, since values such as ``exp(-1e4)`` underflow
to zero but must remain comparable.  Constants are reproduced exactly as
printed; in particular ``MA_BV`` uses ``eps^2 / (2 V^2)`` where ``T1_BV`` uses
``2 eps^2 / V^2``.

Parameter names: ``n``, ``m``, ``p`` (dimensions), ``L`` (Lipschitz constant of
``f(x^2)``, or of ``f`` for ``T2``), ``V`` (total variation of f), ``C_M``,
``r``, ``C_B = 1 + ||B||`` and ``C = (1 + ||B||) ||U||``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

from .errors import MissingParam, OutOfRange, ZeroDenominator


class BoundTag(str, Enum):
    T1_LIP = "T1_LIP"
    T1_BV = "T1_BV"
    T2 = "T2"
    T3 = "T3"
    MA_LIP = "MA_LIP"
    MA_BV = "MA_BV"
    GZ_GEN = "GZ_GEN"

    def __str__(self):
        return self.value


# tag -> (prefactor, required params, center the bound is stated for)
_TABLE = {
    BoundTag.T1_LIP: (4.0, ("n", "m", "L"), "median"),
    BoundTag.T1_BV: (2.0, ("n", "m", "V"), "mean"),
    BoundTag.T2: (4.0, ("n", "m", "p", "C_M", "L"), "median"),
    BoundTag.T3: (2.0, ("n", "m", "r", "V"), "mean"),
    BoundTag.MA_LIP: (4.0, ("n", "m", "C_B", "L"), "median"),
    BoundTag.MA_BV: (2.0, ("n", "m", "V"), "mean"),
    BoundTag.GZ_GEN: (4.0, ("n", "m", "C", "L"), "median"),
}
_DIMENSIONS = ("n", "m", "p")
_DENOMINATORS = ("L", "V", "C_M", "r", "C_B", "C")


@dataclass(frozen=True)
class BoundKind:
    tag: BoundTag
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "tag", BoundTag(self.tag))
        object.__setattr__(self, "params", {k: v for k, v in self.params.items()})
        for key, val in self.params.items():
            if key in _DIMENSIONS and (int(val) != val or val < 1):
                raise ValueError(f"{key} must be a positive integer, got {val}")
            if val < 0:
                raise ValueError(f"{key} must be nonnegative, got {val}")

    @property
    def prefactor(self):
        return _TABLE[self.tag][0]

    @property
    def required(self):
        return _TABLE[self.tag][1]

    @property
    def center(self):
        """``"median"`` or ``"mean"``: the centering the bound is proved for."""
        return _TABLE[self.tag][2]

    def get(self, key):
        if key not in self.params:
            raise MissingParam(f"{self.tag} needs parameter {key!r}")
        val = float(self.params[key])
        if key in _DENOMINATORS and val == 0.0:
            raise ZeroDenominator(f"{self.tag}: parameter {key} is zero")
        return val


def exponent(kind, eps):
    """The (nonpositive) exponent of the bound at deviation ``eps``."""
    if not eps > 0:
        raise OutOfRange(f"eps must be positive, got {eps}")
    g = kind.get
    e2 = eps * eps
    tag = kind.tag
    if tag is BoundTag.T1_LIP:
        n, m, L = g("n"), g("m"), g("L")
        return -(n * m / (n + m)) * e2 / (8.0 * L * L)
    if tag is BoundTag.T1_BV:
        n, m, V = g("n"), g("m"), g("V")
        return -(n * n / m) * 2.0 * e2 / (V * V)
    if tag is BoundTag.T2:
        n, m, p, cm, L = g("n"), g("m"), g("p"), g("C_M"), g("L")
        return -(n * m / p) * e2 / (32.0 * cm * cm * L * L)
    if tag is BoundTag.T3:
        n, m, r, V = g("n"), g("m"), g("r"), g("V")
        return -(n * n / m) * 2.0 * e2 / (r * r * V * V)
    if tag is BoundTag.MA_LIP:
        n, m, cb, L = g("n"), g("m"), g("C_B"), g("L")
        return -(n * m * m / ((m + 1.0) * (n + m))) * e2 / (8.0 * cb * cb * L * L)
    if tag is BoundTag.MA_BV:
        n, m, V = g("n"), g("m"), g("V")
        return -(n * n / (m + 1.0)) * e2 / (2.0 * V * V)
    if tag is BoundTag.GZ_GEN:
        n, m, c, L = g("n"), g("m"), g("C"), g("L")
        return -(n * n * m / (n + m)) * e2 / (8.0 * c * c * L * L)
    raise ValueError(f"unhandled bound tag {tag}")  # pragma: no cover


def evaluate_bound(kind, eps):
    """Bound value ``prefactor * exp(exponent)``; may exceed 1 (vacuous)."""
    return kind.prefactor * math.exp(exponent(kind, eps))


def log_bound(kind, eps):
    """Natural log of the bound, finite even when the value underflows."""
    return math.log(kind.prefactor) + exponent(kind, eps)


def chernoff_rate(eps):
    """Exact large-deviation rate of a Binomial(n, 1/2) proportion.

    ``log 2 + (1/2 + eps) log(1/2 + eps) + (1/2 - eps) log(1/2 - eps)``,
    evaluated in the cancellation-free form
    ``((1 + 2 eps) log1p(2 eps) + (1 - 2 eps) log1p(-2 eps)) / 2``.
    """
    if not 0.0 <= eps < 0.5:
        raise OutOfRange(f"eps must lie in [0, 1/2), got {eps}")
    t = 2.0 * eps
    return 0.5 * ((1.0 + t) * math.log1p(t) + (1.0 - t) * math.log1p(-t))


EXAMPLE1_SETTINGS = ("example1_lip", "example1_bv")


def rate_constants(n, setting, eps):
    """``C_1(eps)`` or ``C_2(eps)``: the Walsh/Bernoulli bound exponents divided by n.

    Obtained mechanically from ``T1_LIP`` (``L = 1``) and ``T1_BV`` (``V = 1``)
    with ``n = m``; they reduce to ``eps^2/16`` and ``2 eps^2``.
    """
    if not 0.0 < eps < 0.5:
        raise OutOfRange(f"eps must lie in (0, 1/2), got {eps}")
    if setting == "example1_lip":
        kind = BoundKind(BoundTag.T1_LIP, {"n": n, "m": n, "L": 1.0})
    elif setting == "example1_bv":
        kind = BoundKind(BoundTag.T1_BV, {"n": n, "m": n, "V": 1.0})
    else:
        raise OutOfRange(f"setting must be one of {EXAMPLE1_SETTINGS}, got {setting!r}")
    return -exponent(kind, eps) / n
