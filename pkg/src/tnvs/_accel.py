"""Kernel backend selection.

The numba kernels are used when importable; set ``TNVS_DISABLE_NUMBA=1``
to force the pure-numpy twins. Both backends are bitwise-equivalent, so
the flag trades speed only.
"""

from __future__ import annotations

import os


def _flag(name: str) -> bool:
    return os.environ.get(name, "").strip().lower() in {"1", "true", "yes", "on"}


HAS_NUMBA = False
if not _flag("TNVS_DISABLE_NUMBA"):
    try:
        from . import _kernels_numba as _impl
        HAS_NUMBA = True
    except ImportError:
        from . import _kernels_numpy as _impl
else:
    from . import _kernels_numpy as _impl

BACKEND = "numba" if HAS_NUMBA else "numpy"

nn_rows = _impl.nn_rows
nn_rows_from_base = _impl.nn_rows_from_base
nn_rows_delta = _impl.nn_rows_delta
add_column_sq_dists = _impl.add_column_sq_dists
