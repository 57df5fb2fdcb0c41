"""Concentration of spectral measures: ensembles, bounds and Monte Carlo checks."""

from ._accel import USE_NUMBA, backend_name
from .bounds import BoundKind, BoundTag, chernoff_rate, evaluate_bound, exponent, rate_constants
from .ensembles import SampleHandle, from_params, replace_block, sample, walsh_rows
from .functionals import (
    TestFunction,
    make_custom,
    make_exceedance,
    make_indicator,
    make_sqrt_abs,
)
from .linalg import (
    DataMatrix,
    Spectrum,
    SymMatrix,
    dilation,
    kolmogorov_distance,
    operator_norm,
    singular_values,
    spectral_cdf,
    spectral_functional,
    symmetric_eigenvalues,
    wishart,
)

__version__ = "0.1.0"

__all__ = [
    "USE_NUMBA",
    "BoundKind",
    "BoundTag",
    "DataMatrix",
    "SampleHandle",
    "Spectrum",
    "SymMatrix",
    "TestFunction",
    "backend_name",
    "chernoff_rate",
    "dilation",
    "evaluate_bound",
    "exponent",
    "from_params",
    "kolmogorov_distance",
    "make_custom",
    "make_exceedance",
    "make_indicator",
    "make_sqrt_abs",
    "operator_norm",
    "rate_constants",
    "replace_block",
    "sample",
    "singular_values",
    "spectral_cdf",
    "spectral_functional",
    "symmetric_eigenvalues",
    "walsh_rows",
    "wishart",
]
