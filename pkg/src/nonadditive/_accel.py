"""Backend selection for the hot kernels.

Set ``NONADDITIVE_DISABLE_NUMBA=1`` before import to force the pure-numpy
path. Numba is also skipped silently when it cannot be imported.
"""

from __future__ import annotations

import os

_FLAG = "NONADDITIVE_DISABLE_NUMBA"

try:
    import numba

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    HAS_NUMBA = False

USE_NUMBA = HAS_NUMBA and os.environ.get(_FLAG, "").strip().lower() not in ("1", "true", "yes", "on")
BACKEND = "numba" if USE_NUMBA else "numpy"


def njit(func):
    """Compile ``func`` in nopython mode, or hand it back untouched without numba."""
    if not HAS_NUMBA:
        return func
    return numba.njit(cache=True, nogil=True)(func)
