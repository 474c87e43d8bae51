"""Backend selection for the compiled kernels.

The kernels in :mod:`hypergreedy.kernels` are written once, as plain Python
operating on indexable sequences. With the ``numba`` backend they are compiled
with ``@njit`` and run on numpy arrays; with the ``python`` backend they run
uncompiled on Python lists (list indexing is several times faster than numpy
scalar indexing in the interpreter).

The backend is fixed at import time from the ``HYPERGREEDY_BACKEND``
environment variable (``numba`` or ``python``). When numba is not importable
the python backend is used regardless.
"""

import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - numba is a hard dependency in CI
    numba = None

_requested = os.environ.get("HYPERGREEDY_BACKEND", "numba").strip().lower()
if _requested not in ("numba", "python"):
    raise ImportError(
        f"HYPERGREEDY_BACKEND must be 'numba' or 'python', got {_requested!r}"
    )

BACKEND = "numba" if (_requested == "numba" and numba is not None) else "python"
USE_NUMBA = BACKEND == "numba"


def njit(fn):
    """Compile ``fn`` in nopython mode, or return it unchanged."""
    if USE_NUMBA:
        return numba.njit(cache=True, nogil=True)(fn)
    return fn


def to_backend(arr):
    """Convert a numpy array into the container the active backend indexes."""
    if USE_NUMBA:
        return np.ascontiguousarray(arr)
    return arr.tolist()
