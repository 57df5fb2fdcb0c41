"""Dense symmetric eigenvalues and spectral-measure arithmetic."""

from .matrices import (
    DataMatrix,
    Spectrum,
    SymMatrix,
    dilation,
    dilation_dense,
    format_float,
    read_matrix_csv,
    read_spectrum,
    wishart,
    wishart_dense,
    write_matrix_csv,
    write_spectrum,
)
from .spectral import (
    DEFAULT_TOL,
    MAX_SWEEPS,
    eigvalsh_batch,
    kolmogorov_count,
    kolmogorov_distance,
    operator_norm,
    singular_values,
    spectral_cdf,
    spectral_functional,
    spectral_functional_batch,
    symmetric_eigenvalues,
)

__all__ = [
    "DEFAULT_TOL",
    "MAX_SWEEPS",
    "DataMatrix",
    "Spectrum",
    "SymMatrix",
    "dilation",
    "dilation_dense",
    "eigvalsh_batch",
    "format_float",
    "kolmogorov_count",
    "kolmogorov_distance",
    "operator_norm",
    "read_matrix_csv",
    "read_spectrum",
    "singular_values",
    "spectral_cdf",
    "spectral_functional",
    "spectral_functional_batch",
    "symmetric_eigenvalues",
    "wishart",
    "wishart_dense",
    "write_matrix_csv",
    "write_spectrum",
]
