"""Numba backend detection.

Hot kernels in :mod:`sympb.kernels` are compiled with numba when it is
importable, unless the environment variable ``SYMPB_NUMBA`` is set to ``0``
(then the pure numpy implementations are used).  ``njit`` degrades to a no-op
decorator when numba is unavailable so the same source stays importable.
"""

import os

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(func):
            return func

        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]
        return wrap


USE_NUMBA = HAVE_NUMBA and os.environ.get("SYMPB_NUMBA", "1") != "0"
