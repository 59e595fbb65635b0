"""Kernel backend selection.

The hot loops in :mod:`cavity_polymer.kernels` exist twice: a numba
``@njit`` version and a pure-numpy version. ``CAVITY_POLYMER_BACKEND``
picks one at import time (``numba`` or ``numpy``); numba is the default
when it imports. Both paths consume identical random streams, so the
choice changes speed only.
"""

import os

try:
    import numba
except ImportError:  # pragma: no cover
    numba = None

HAVE_NUMBA = numba is not None
if HAVE_NUMBA:
    # skip the TBB probe; old TBB builds only produce a warning
    numba.config.THREADING_LAYER_PRIORITY = ["omp", "workqueue", "tbb"]

_requested = os.environ.get("CAVITY_POLYMER_BACKEND", "").strip().lower()
if _requested not in ("", "numba", "numpy"):
    raise ImportError(
        f"CAVITY_POLYMER_BACKEND must be 'numba' or 'numpy', got {_requested!r}"
    )

if _requested == "numpy" or not HAVE_NUMBA:
    BACKEND = "numpy"
else:
    BACKEND = "numba"


def njit(*args, **kwargs):
    """``numba.njit`` when numba is importable, identity otherwise."""
    if not HAVE_NUMBA:
        if args and callable(args[0]):
            return args[0]
        return lambda f: f
    kwargs.setdefault("cache", True)
    kwargs.setdefault("nogil", True)
    return numba.njit(*args, **kwargs)
