"""Optional numba compilation for the hot kernels.

Set ``STARGRAY_DISABLE_NUMBA=1`` to run every kernel as plain Python over
numpy arrays. Both paths execute the same source, so results are identical.
"""

from __future__ import annotations

import os

_DISABLED = os.environ.get("STARGRAY_DISABLE_NUMBA", "").strip().lower() in {"1", "true", "yes"}

try:
    if _DISABLED:
        raise ImportError
    from numba import njit as _njit

    NUMBA_ENABLED = True
except ImportError:
    _njit = None
    NUMBA_ENABLED = False


def kernel(func):
    """Compile ``func`` with numba when available and enabled."""
    if NUMBA_ENABLED:
        return _njit(cache=True, nogil=True)(func)
    return func


def backend_name() -> str:
    return "numba" if NUMBA_ENABLED else "python"
