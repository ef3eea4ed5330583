"""Pure-numpy nearest-neighbor scan kernels.

These are the fallback twins of the numba kernels in ``_kernels_numba``;
both must produce bitwise-identical results. Squared distances accumulate
dimension by dimension in column order, so a cached distance base plus an
appended-column delta reproduces a full joint scan exactly.

Tie handling: among all points at exactly the minimal squared distance
(excluding the query point itself), the one at position floor(u * count)
in ascending index order is chosen, where u is the query point's entry in
the supplied uniform array.
"""

from __future__ import annotations

import numpy as np


def _pick(acc: np.ndarray, h: int, u_h: float, out: np.ndarray) -> None:
    m2 = acc.min()
    ties = np.flatnonzero(acc == m2)
    k = min(int(u_h * ties.size), ties.size - 1)
    out[h] = ties[k]


def nn_rows(points: np.ndarray, rows: np.ndarray, u: np.ndarray,
            out: np.ndarray) -> None:
    """Exhaustive nearest-neighbor scan for the given row indices."""
    n, q = points.shape
    for h in rows:
        acc = np.zeros(n)
        for d in range(q):
            t = points[:, d] - points[h, d]
            acc += t * t
        acc[h] = np.inf
        _pick(acc, h, u[h], out)


def nn_rows_from_base(base: np.ndarray, rows: np.ndarray, u: np.ndarray,
                      out: np.ndarray) -> None:
    """Scan rows of a precomputed squared-distance matrix."""
    for h in rows:
        acc = base[h].copy()
        acc[h] = np.inf
        _pick(acc, h, u[h], out)


def nn_rows_delta(base: np.ndarray, x: np.ndarray, rows: np.ndarray,
                  u: np.ndarray, out: np.ndarray) -> None:
    """Scan base rows plus the squared delta of one appended column."""
    for h in rows:
        t = x - x[h]
        acc = base[h] + t * t
        acc[h] = np.inf
        _pick(acc, h, u[h], out)


def add_column_sq_dists(base: np.ndarray, x: np.ndarray) -> None:
    """Accumulate one column's pairwise squared differences into base."""
    t = x[None, :] - x[:, None]
    base += t * t
