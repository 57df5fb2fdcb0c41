"""Backend selection for the hot kernels.

The compiled path uses numba.  Setting ``SPECCONC_DISABLE_NUMBA=1`` (or running
without numba installed) routes every kernel through the pure-numpy twin.
"""

import os

_FLAG = "SPECCONC_DISABLE_NUMBA"

numba_options = {
    "nopython": True,
    "nogil": True,
    "cache": True,
    "fastmath": False,
    "error_model": "numpy",
    "boundscheck": False,
}


def _env_disabled():
    return os.environ.get(_FLAG, "").strip().lower() in {"1", "true", "yes", "on"}


try:
    import numba

    NUMBA_AVAILABLE = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    NUMBA_AVAILABLE = False

USE_NUMBA = NUMBA_AVAILABLE and not _env_disabled()


def njit(func):
    """Compile ``func`` with the package defaults, or return it unchanged."""
    if not NUMBA_AVAILABLE:
        return func
    return numba.jit(**numba_options)(func)


def backend_name():
    return "numba" if USE_NUMBA else "numpy"
