"""Growing orthogonal basis for redundancy elimination.

Selected predictor columns are orthogonalized by modified Gram-Schmidt
(sequential re-projection, numerically safer than the classical single
pass). Candidate columns are then scored by the variance left after
projecting them onto the basis: a score near zero means the candidate is
a linear combination of what was already selected.
"""

from __future__ import annotations

import numpy as np

# A residual with squared norm below this floor (scaled by n) is treated
# as exactly collinear and may not extend the basis.
NORM_FLOOR = 1e-12


class CollinearColumnError(ValueError):
    """Raised when a column numerically lies in the basis span."""


class OrthoBasis:
    """Mutable orthogonal basis over n-vectors. Not thread-safe."""

    def __init__(self, n: int):
        self.n = int(n)
        self._cols: list[np.ndarray] = []
        self._norms_sq: list[float] = []

    @property
    def size(self) -> int:
        return len(self._cols)

    def extend(self, x: np.ndarray) -> None:
        """Append the modified Gram-Schmidt residual of x."""
        z = np.array(x, dtype=np.float64)
        if z.shape != (self.n,):
            raise ValueError(f"expected shape ({self.n},), got {z.shape}")
        for col, nsq in zip(self._cols, self._norms_sq):
            z -= (z @ col) / nsq * col
        nsq = float(z @ z)
        if nsq < NORM_FLOOR * self.n:
            raise CollinearColumnError(
                f"column is numerically collinear with the basis "
                f"(residual norm^2 {nsq:.3e})"
            )
        self._cols.append(z)
        self._norms_sq.append(nsq)

    def residuals(self, x: np.ndarray) -> np.ndarray:
        """Residuals of one column or a column matrix after projection."""
        x = np.asarray(x, dtype=np.float64)
        if not self._cols:
            return x.copy()
        z = np.column_stack(self._cols)
        nsq = np.asarray(self._norms_sq)
        coef = (z.T @ x) / (nsq[:, None] if x.ndim == 2 else nsq)
        return x - z @ coef

    def orthogonality_defect(self) -> float:
        """Largest |dot| between distinct basis columns, for diagnostics."""
        if self.size < 2:
            return 0.0
        z = np.column_stack(self._cols)
        g = z.T @ z
        np.fill_diagonal(g, 0.0)
        return float(np.abs(g).max())


def redundancy_score(basis: OrthoBasis, x: np.ndarray) -> float:
    """Variance (divisor n) of x's residual against the basis.

    For a standardized column the score falls in [0, 1]: 0 means linearly
    determined by the basis, 1 means orthogonal to it.
    """
    return float(np.var(basis.residuals(x)))


def batch_delete(basis: OrthoBasis, candidates: np.ndarray, values: np.ndarray,
                 alpha3: float) -> tuple[np.ndarray, np.ndarray]:
    """Split candidate indices into (deleted, kept) by redundancy score.

    Candidates whose residual variance against the basis is strictly below
    alpha3 are deleted. `values` holds the standardized columns the indices
    refer to.
    """
    candidates = np.asarray(candidates, dtype=np.int64)
    if candidates.size == 0 or basis.size == 0:
        return candidates[:0], candidates
    scores = np.var(basis.residuals(values[:, candidates]), axis=0)
    mask = scores < alpha3
    return candidates[mask], candidates[~mask]
