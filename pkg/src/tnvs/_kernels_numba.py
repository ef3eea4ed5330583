"""Numba twins of the scan kernels in ``_kernels_numpy``.

Same contracts, same bit patterns: plain IEEE double arithmetic (no
fastmath, so no FMA contraction or reassociation), dimensions accumulated
in column order, ties resolved by floor(u * count) over ascending indices.
All kernels release the GIL so candidate scoring can thread.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def _pick_from_row(row, n, h, m2, u_h, out):
    c = 0
    for i in range(n):
        if row[i] == m2:
            c += 1
    k = np.int64(u_h * c)
    if k > c - 1:
        k = c - 1
    seen = 0
    for i in range(n):
        if row[i] == m2:
            if seen == k:
                out[h] = i
                return
            seen += 1


@njit(cache=True, nogil=True)
def nn_rows(points, rows, u, out):
    n, q = points.shape
    row = np.empty(n)
    for j in range(rows.shape[0]):
        h = rows[j]
        m2 = np.inf
        for i in range(n):
            if i == h:
                row[i] = np.inf
                continue
            s = 0.0
            for d in range(q):
                t = points[i, d] - points[h, d]
                s += t * t
            row[i] = s
            if s < m2:
                m2 = s
        _pick_from_row(row, n, h, m2, u[h], out)


@njit(cache=True, nogil=True)
def nn_rows_from_base(base, rows, u, out):
    n = base.shape[0]
    row = np.empty(n)
    for j in range(rows.shape[0]):
        h = rows[j]
        m2 = np.inf
        for i in range(n):
            if i == h:
                row[i] = np.inf
                continue
            s = base[h, i]
            row[i] = s
            if s < m2:
                m2 = s
        _pick_from_row(row, n, h, m2, u[h], out)


@njit(cache=True, nogil=True)
def nn_rows_delta(base, x, rows, u, out):
    n = base.shape[0]
    row = np.empty(n)
    for j in range(rows.shape[0]):
        h = rows[j]
        m2 = np.inf
        for i in range(n):
            if i == h:
                row[i] = np.inf
                continue
            t = x[i] - x[h]
            s = base[h, i] + t * t
            row[i] = s
            if s < m2:
                m2 = s
        _pick_from_row(row, n, h, m2, u[h], out)


@njit(cache=True, nogil=True)
def add_column_sq_dists(base, x):
    n = base.shape[0]
    for h in range(n):
        for i in range(n):
            t = x[i] - x[h]
            base[h, i] += t * t
