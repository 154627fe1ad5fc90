"""Numba switch.

Set ``AFA_JIT=0`` to run every kernel on its pure-numpy path. When numba is
not importable the numpy path is used regardless of the flag.
"""

from __future__ import annotations

import os

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

HAVE_NUMBA = numba is not None
JIT_ENABLED = HAVE_NUMBA and os.environ.get("AFA_JIT", "1").strip().lower() not in {"0", "false", "off", "no"}


def njit(func):
    """Compile with numba when available, else hand back the Python function."""
    if not HAVE_NUMBA:
        return func
    return numba.njit(cache=True, nogil=True)(func)
