"""Rank and nearest-neighbor machinery for conditional dependence scoring.

The dependence coefficient estimated here compares, for every sample point,
the response rank at the point's nearest neighbor in predictor space against
the rank expected under independence. Two variants exist:

* unconditional: how much does a single predictor tell us about the response;
* conditional: how much does a candidate predictor add on top of an already
  selected predictor set.

Both return a value in roughly [-1, 1] that converges to 0 under (conditional)
independence and to 1 when the response is a measurable function of the
predictors. The estimate is Undefined exactly when its denominator vanishes
(response constant, or already fully explained by the conditioning set in the
degenerate tie sense).

Determinism contract: every evaluation consumes tie-break uniforms from an
explicitly seeded stream, one uniform per sample point per neighbor search,
drawn up front. Given identical inputs and an identical stream seed the result
is bitwise reproducible, across both neighbor-search strategies and both
kernel backends.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree

from . import _accel

# Neighbor searches in more dimensions than this skip the k-d tree and use
# the exhaustive kernels; tunable, not part of the result contract.
KDTREE_DIM_MAX = 16

# Number of candidates requested per k-d tree query. Must be >= 2.
_QUERY_K = 16

# Relative slack used to certify that a k-d tree candidate set provably
# contains the full exact tie set (covers sqrt rounding in tree distances).
_CERT_MARGIN = 1e-9


@dataclass(frozen=True)
class RankData:
    """Inclusive ranks of a response sample.

    ranks[h] counts observations <= y[h]; antiranks[h] counts >= y[h].
    Ties count on both sides, so each array lies in [1, n].
    """

    ranks: np.ndarray
    antiranks: np.ndarray


def compute_ranks(y: np.ndarray) -> RankData:
    y = np.asarray(y, dtype=np.float64)
    order = np.sort(y)
    ranks = np.searchsorted(order, y, side="right").astype(np.int64)
    antiranks = (y.size - np.searchsorted(order, y, side="left")).astype(np.int64)
    return RankData(ranks=ranks, antiranks=antiranks)


def tie_stream(seed: int, iteration: int, candidate: int) -> np.random.Generator:
    """Dedicated tie-break stream for one candidate evaluation."""
    return np.random.default_rng(
        np.random.SeedSequence(seed, spawn_key=(0, iteration, candidate))
    )


def iteration_stream(seed: int, iteration: int) -> np.random.Generator:
    """Stream for the per-iteration shared conditioning-set search."""
    return np.random.default_rng(
        np.random.SeedSequence(seed, spawn_key=(1, iteration))
    )


def _as_points(x: np.ndarray) -> np.ndarray:
    pts = np.asarray(x, dtype=np.float64)
    if pts.ndim == 1:
        pts = pts[:, None]
    if pts.ndim != 2:
        raise ValueError("points must be 1-d or 2-d")
    return np.ascontiguousarray(pts)


def _nn_kdtree(points: np.ndarray, u: np.ndarray, workers: int) -> np.ndarray:
    """k-d tree search with exact tie verification.

    The tree proposes up to _QUERY_K candidates per point; squared distances
    are then recomputed with the same accumulation order as the exhaustive
    kernels. A point's result is accepted only when the k-th tree distance
    proves no unseen candidate can tie the recomputed minimum; otherwise the
    point falls back to an exhaustive row scan. Output is therefore bitwise
    identical to the exhaustive strategy.
    """
    n, q = points.shape
    k = min(n, _QUERY_K)
    tree = cKDTree(points)
    dists, idxs = tree.query(points, k=k, workers=workers)

    acc = np.zeros((n, k))
    for d in range(q):
        t = points[idxs, d] - points[:, None, d]
        acc += t * t
    acc[idxs == np.arange(n)[:, None]] = np.inf

    m2 = acc.min(axis=1)
    counts = (acc == m2[:, None]).sum(axis=1)
    kth = dists[:, -1]
    certified = (kth * kth > m2 * (1.0 + _CERT_MARGIN)) if k < n else np.ones(n, bool)

    out = np.empty(n, dtype=np.int64)
    easy = certified & (counts == 1)
    out[easy] = idxs[easy, np.argmin(acc[easy], axis=1)]
    for h in np.flatnonzero(certified & (counts > 1)):
        ties = np.sort(idxs[h][acc[h] == m2[h]])
        out[h] = ties[min(int(u[h] * ties.size), ties.size - 1)]
    hard = np.flatnonzero(~certified)
    if hard.size:
        _accel.nn_rows(points, hard, u, out)
    return out


def _nearest_neighbors_u(points: np.ndarray, u: np.ndarray, strategy: str = "auto",
                         workers: int = 1) -> np.ndarray:
    """Self-excluding nearest neighbor of every point, ties broken by u."""
    points = _as_points(points)
    n, q = points.shape
    if n < 2:
        raise ValueError("need at least 2 points")
    if strategy == "auto":
        strategy = "kdtree" if q <= KDTREE_DIM_MAX else "exhaustive"
    if strategy == "kdtree":
        return _nn_kdtree(points, u, workers)
    if strategy == "exhaustive":
        out = np.empty(n, dtype=np.int64)
        _accel.nn_rows(points, np.arange(n, dtype=np.int64), u, out)
        return out
    raise ValueError(f"unknown strategy '{strategy}'")


def nearest_neighbors(points: np.ndarray, stream: np.random.Generator,
                      strategy: str = "auto", workers: int = 1) -> np.ndarray:
    """Index of each point's nearest other point under squared Euclidean
    distance. Exact distance ties are broken uniformly using one draw per
    point taken from `stream` up front."""
    points = _as_points(points)
    u = stream.random(points.shape[0])
    return _nearest_neighbors_u(points, u, strategy, workers)


@dataclass(frozen=True)
class CodecValue:
    """Result of a dependence evaluation; value None means Undefined."""

    value: float | None

    @property
    def is_defined(self) -> bool:
        return self.value is not None

    def __str__(self) -> str:
        return "undefined" if self.value is None else repr(self.value)


_UNDEFINED = CodecValue(value=None)


def codec_unconditional(y: np.ndarray, x: np.ndarray,
                        stream: np.random.Generator,
                        strategy: str = "auto", workers: int = 1) -> CodecValue:
    """Dependence of y on a single predictor x.

    Undefined exactly when y is constant. For continuous independent inputs
    the value concentrates near 0; for y a monotone function of x it
    approaches 1.
    """
    y = np.asarray(y, dtype=np.float64)
    x = np.asarray(x, dtype=np.float64)
    n = y.size
    if x.shape[0] != n:
        raise ValueError("x and y lengths differ")
    rk = compute_ranks(y)
    denom = int(np.sum(rk.antiranks * (n - rk.antiranks)))
    if denom == 0:
        return _UNDEFINED
    m = nearest_neighbors(x, stream, strategy, workers)
    num = int(np.sum(n * np.minimum(rk.ranks, rk.ranks[m]) - rk.antiranks ** 2))
    return CodecValue(value=num / denom)


def codec_conditional(y: np.ndarray, x: np.ndarray, given: np.ndarray,
                      stream: np.random.Generator,
                      strategy: str = "auto", workers: int = 1) -> CodecValue:
    """Added dependence of y on x beyond the conditioning columns `given`.

    Joint-space neighbors place x as the last coordinate after the given
    columns. The stream supplies the joint search's tie uniforms first, then
    the conditioning-only search's. Undefined exactly when the denominator
    vanishes, meaning nearest conditioning neighbors already never reduce the
    response rank.
    """
    y = np.asarray(y, dtype=np.float64)
    x = np.asarray(x, dtype=np.float64)
    given = _as_points(given)
    n = y.size
    if x.shape[0] != n or given.shape[0] != n:
        raise ValueError("y, x and given row counts differ")
    rk = compute_ranks(y)
    joint = np.ascontiguousarray(np.hstack([given, x[:, None]]))
    u_joint = stream.random(n)
    u_given = stream.random(n)
    m = _nearest_neighbors_u(joint, u_joint, strategy, workers)
    nb = _nearest_neighbors_u(given, u_given, strategy, workers)
    min_rm = np.minimum(rk.ranks, rk.ranks[m])
    min_rn = np.minimum(rk.ranks, rk.ranks[nb])
    denom = int(np.sum(rk.ranks - min_rn))
    if denom == 0:
        return _UNDEFINED
    num = int(np.sum(min_rm - min_rn))
    return CodecValue(value=num / denom)
