"""Kernel backend selection.

The numba backend is used when importable, unless ``MROSELECT_NUMBA=0`` is
set in the environment, in which case the vectorized numpy fallback in
:mod:`mroselect.backends.vec` takes over.  The choice is made once at import
time; ``ACTIVE_BACKEND`` reports it ("numba" or "numpy").
"""

from __future__ import annotations

import os

from . import vec

REGRET_EPS = vec.REGRET_EPS

if os.environ.get("MROSELECT_NUMBA", "1") == "0":
    kernels = vec
    ACTIVE_BACKEND = "numpy"
else:
    try:
        from . import jit as kernels  # type: ignore[no-redef]

        ACTIVE_BACKEND = "numba"
    except ImportError:
        kernels = vec
        ACTIVE_BACKEND = "numpy"

__all__ = ["kernels", "vec", "ACTIVE_BACKEND", "REGRET_EPS"]
