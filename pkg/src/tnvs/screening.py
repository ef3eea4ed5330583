"""Entropy-based detection of uninformative predictors.

A column is discretized (distinct values as cells when few, equal-width
bins otherwise) and scored by the Shannon entropy of the cell frequencies.
Near-constant columns score near zero and are dropped before any dependence
scoring happens.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class EntropyScore:
    """Entropy of a discretized column, with the cell layout used."""

    value: float
    bins: int
    scheme: str  # "distinct" or "width"


def _ceil_sqrt(n: int) -> int:
    return math.isqrt(n - 1) + 1 if n > 0 else 0


def discretize(x: np.ndarray) -> tuple[np.ndarray, int, str]:
    """Map a column to integer cell labels.

    Columns with at most ceil(sqrt(n)) distinct values keep one cell per
    value; anything richer gets floor(log2 n) + 1 equal-width bins over
    [min, max], the maximum falling in the last bin.
    """
    x = np.asarray(x, dtype=np.float64)
    n = x.size
    uniq, labels = np.unique(x, return_inverse=True)
    if uniq.size <= _ceil_sqrt(n):
        return labels.astype(np.int64), int(uniq.size), "distinct"
    bins = n.bit_length()  # floor(log2 n) + 1
    lo, hi = uniq[0], uniq[-1]
    scaled = (x - lo) / (hi - lo) * bins
    labels = np.clip(scaled.astype(np.int64), 0, bins - 1)
    return labels, bins, "width"


def uninformative_score(x: np.ndarray) -> EntropyScore:
    """Shannon entropy (natural log) of the discretized column."""
    labels, bins, scheme = discretize(x)
    counts = np.bincount(labels, minlength=bins)
    counts = counts[counts > 0]
    n = labels.size
    value = float(math.log(n) - (counts * np.log(counts)).sum() / n)
    # clamp tiny negative rounding on constant columns
    return EntropyScore(value=max(value, 0.0), bins=bins, scheme=scheme)


def prefilter(predictors: np.ndarray, alpha1: float
              ) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Split column indices into (dropped, kept) by entropy threshold.

    Returns (dropped, kept, scores); a column is dropped when its entropy
    is strictly below alpha1. Scores are the per-column entropies.
    """
    p = predictors.shape[1]
    scores = np.empty(p)
    for j in range(p):
        scores[j] = uninformative_score(predictors[:, j]).value
    dropped = np.flatnonzero(scores < alpha1).astype(np.int64)
    kept = np.flatnonzero(scores >= alpha1).astype(np.int64)
    return dropped, kept, scores
