"""Numba toggle for the hot route-construction kernels.

Set ``MTSPKIT_NO_NUMBA=1`` (or ``true``/``yes``) to force the vectorised
numpy fallback path. The flag is read on every dispatch so tests and
benchmarks can flip it at runtime.
"""

import os

try:
    from numba import njit

    HAS_NUMBA = True
except ImportError:  # keep the package importable without numba
    HAS_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(fn):
            return fn

        if args and callable(args[0]):
            return args[0]
        return wrap


def numba_enabled() -> bool:
    flag = os.environ.get("MTSPKIT_NO_NUMBA", "").strip().lower()
    return HAS_NUMBA and flag not in ("1", "true", "yes")
