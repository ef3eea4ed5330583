"""Forward stepwise selection with screening and redundancy elimination.

Each run partitions the predictor indices into four disjoint subsets:

* selected: picked in order of conditional relevance;
* uninformative: dropped up front by the entropy prefilter;
* redundant: dropped when they became linear combinations of the selection;
* conditionally independent: everything left when the search stopped.

`mode="foci"` turns off the prefilter and the redundancy elimination and
stops as soon as the best score is non-positive, which reproduces plain
forward dependence selection as a contrast baseline.

Conditioning always uses the original standardized columns, never the
orthogonalized ones. Scoring is deterministic for a fixed config: every
candidate evaluation draws its tie-break uniforms from a stream derived
from (seed, iteration, candidate), so neither thread count nor evaluation
order can change a result.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .codec import (
    CodecValue,
    codec_conditional,
    codec_unconditional,
    compute_ranks,
    iteration_stream,
    tie_stream,
    KDTREE_DIM_MAX,
    _nearest_neighbors_u,
)
from .data import Dataset, StandardizedView, standardize
from .ortho import CollinearColumnError, OrthoBasis, batch_delete
from .screening import prefilter
from . import _accel

TERMINATION_REASONS = (
    "relevance-below-threshold",
    "undefined-codec",
    "d_max-reached",
    "candidates-exhausted",
    "time-budget",
)

# Above this sample size the cached n*n distance matrix is not kept and
# high-dimensional conditional scans fall back to per-pair recomputation.
BASE_MAX_N = 4096


def default_d_max(n: int) -> int:
    """Model-size cap when none is configured: ceil(n / ln n)."""
    return math.ceil(n / math.log(n))


@dataclass(frozen=True)
class SelectorConfig:
    alpha1: float = 0.01
    alpha2: float = -0.01
    alpha3: float = 0.01
    d_max: int | None = None
    seed: int = 0
    mode: str = "tnvs"
    time_budget: float | None = 3600.0

    def __post_init__(self):
        if self.mode not in ("tnvs", "foci"):
            raise ValueError(f"mode must be 'tnvs' or 'foci', got '{self.mode}'")
        for name in ("alpha1", "alpha2", "alpha3"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if self.d_max is not None and self.d_max < 1:
            raise ValueError("d_max must be at least 1")
        if self.time_budget is not None and self.time_budget <= 0:
            raise ValueError("time_budget must be positive")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")


@dataclass(frozen=True)
class SelectionStep:
    index: int
    name: str
    score: float
    candidates_remaining: int
    elapsed_ms: float


@dataclass(frozen=True)
class SelectionResult:
    selected: list[tuple[int, float]]
    uninformative: list[tuple[int, float]]
    redundant: list[tuple[int, int]]
    cond_independent: list[int]
    termination: str
    trace: list[SelectionStep]
    config: SelectorConfig
    column_names: tuple[str, ...]
    response_name: str
    n: int
    p: int
    total_ms: float = field(default=0.0, compare=False)

    @property
    def selection_order(self) -> list[int]:
        return [idx for idx, _ in self.selected]

    @property
    def subsets(self) -> dict[str, list[int]]:
        return {
            "selected": [i for i, _ in self.selected],
            "uninformative": [i for i, _ in self.uninformative],
            "redundant": [i for i, _ in self.redundant],
            "cond_independent": list(self.cond_independent),
        }


def relevance_score(view: StandardizedView, y: np.ndarray, candidate: int,
                    selected: list[int], stream: np.random.Generator,
                    strategy: str = "auto") -> CodecValue:
    """Score one candidate against the current selection (reference path)."""
    xj = view.values[:, candidate]
    if not selected:
        return codec_unconditional(y, xj, stream, strategy)
    given = view.values[:, list(selected)]
    return codec_conditional(y, xj, given, stream, strategy)


def _chunked(fn, positions: np.ndarray, threads: int) -> None:
    if threads <= 1 or positions.size < 4:
        fn(positions)
        return
    chunks = [c for c in np.array_split(positions, threads * 2) if c.size]
    with ThreadPoolExecutor(max_workers=threads) as ex:
        # writes land in disjoint score slots, so chunk order is irrelevant
        list(ex.map(fn, chunks))


class _Scorer:
    """Per-iteration candidate scoring against shared rank structures."""

    def __init__(self, view: StandardizedView, ranks: np.ndarray,
                 antiranks: np.ndarray, seed: int, threads: int):
        self.values = view.values
        self.n = view.values.shape[0]
        self.ranks = ranks
        self.antiranks = antiranks
        self.seed = seed
        self.threads = threads
        self.all_rows = np.arange(self.n, dtype=np.int64)
        # cached pairwise squared distances over the selected columns,
        # accumulated in selection order; None above the size cutoff
        self.base: np.ndarray | None = None
        self.s_cols: list[int] = []

    def note_selected(self, k: int) -> None:
        self.s_cols.append(k)
        if self.n <= BASE_MAX_N:
            if self.base is None:
                self.base = np.zeros((self.n, self.n))
            _accel.add_column_sq_dists(self.base, self._col(k))

    def _col(self, j: int) -> np.ndarray:
        return np.ascontiguousarray(self.values[:, j])

    def _s_matrix(self) -> np.ndarray:
        return np.ascontiguousarray(self.values[:, self.s_cols])

    def conditioning_neighbors(self, iteration: int) -> np.ndarray:
        u = iteration_stream(self.seed, iteration).random(self.n)
        q = len(self.s_cols)
        if self.base is not None:
            out = np.empty(self.n, dtype=np.int64)
            _accel.nn_rows_from_base(self.base, self.all_rows, u, out)
            return out
        strategy = "kdtree" if q <= KDTREE_DIM_MAX else "exhaustive"
        return _nearest_neighbors_u(self._s_matrix(), u, strategy,
                                    workers=self.threads)

    def score_unconditional(self, candidates: np.ndarray, denom: int,
                            iteration: int) -> np.ndarray:
        n, ranks, anti = self.n, self.ranks, self.antiranks
        scores = np.empty(candidates.size)

        def work(positions: np.ndarray) -> None:
            for pos in positions:
                j = int(candidates[pos])
                u = tie_stream(self.seed, iteration, j).random(n)
                m = _nearest_neighbors_u(self._col(j), u, "auto")
                num = int(np.sum(n * np.minimum(ranks, ranks[m]) - anti * anti))
                scores[pos] = num / denom

        _chunked(work, np.arange(candidates.size), self.threads)
        return scores

    def score_conditional(self, candidates: np.ndarray, min_rn: np.ndarray,
                          denom: int, iteration: int) -> np.ndarray:
        n, ranks = self.n, self.ranks
        scores = np.empty(candidates.size)
        s_matrix = None if self.base is not None else self._s_matrix()

        def work(positions: np.ndarray) -> None:
            m = np.empty(n, dtype=np.int64)
            for pos in positions:
                j = int(candidates[pos])
                u = tie_stream(self.seed, iteration, j).random(n)
                xj = self._col(j)
                if self.base is not None:
                    _accel.nn_rows_delta(self.base, xj, self.all_rows, u, m)
                    mm = m
                else:
                    joint = np.ascontiguousarray(
                        np.hstack([s_matrix, xj[:, None]]))
                    mm = _nearest_neighbors_u(joint, u, "auto")
                num = int(np.sum(np.minimum(ranks, ranks[mm]) - min_rn))
                scores[pos] = num / denom

        _chunked(work, np.arange(candidates.size), self.threads)
        return scores


def run_selection(dataset: Dataset, config: SelectorConfig | None = None,
                  threads: int = 1) -> SelectionResult:
    """Run the full selection loop on a dataset.

    Deterministic for fixed (dataset, config); `threads` only changes how
    candidate scoring is spread over a thread pool.
    """
    cfg = config or SelectorConfig()
    t0 = time.monotonic()
    n, p = dataset.n, dataset.p
    d_max = cfg.d_max if cfg.d_max is not None else default_d_max(n)
    cfg = replace(cfg, d_max=d_max)
    view = standardize(dataset)
    rk = compute_ranks(dataset.response)
    ranks, anti = rk.ranks, rk.antiranks

    uninformative: list[tuple[int, float]] = []
    if cfg.mode == "tnvs":
        dropped, kept, entropies = prefilter(dataset.predictors, cfg.alpha1)
        uninformative = [(int(j), float(entropies[j])) for j in dropped]
        candidates = kept
    else:
        candidates = np.arange(p, dtype=np.int64)

    # redundancy elimination needs a basis only when something can be deleted
    basis = OrthoBasis(n) if cfg.mode == "tnvs" and cfg.alpha3 > 0 else None
    scorer = _Scorer(view, ranks, anti, cfg.seed, threads)

    selected: list[tuple[int, float]] = []
    redundant: list[tuple[int, int]] = []
    trace: list[SelectionStep] = []
    termination = None
    iteration = 0

    while candidates.size and len(selected) < d_max:
        if cfg.time_budget is not None and time.monotonic() - t0 > cfg.time_budget:
            termination = "time-budget"
            break
        step_t0 = time.monotonic()
        if not selected:
            denom = int(np.sum(anti * (n - anti)))
            if denom == 0:
                termination = "undefined-codec"
                break
            scores = scorer.score_unconditional(candidates, denom, iteration)
        else:
            nb = scorer.conditioning_neighbors(iteration)
            min_rn = np.minimum(ranks, ranks[nb])
            denom = int(np.sum(ranks - min_rn))
            if denom == 0:
                # response already explained by the selection: every
                # candidate's score is undefined, stop here
                termination = "undefined-codec"
                break
            scores = scorer.score_conditional(candidates, min_rn, denom,
                                              iteration)

        best_pos = int(np.argmax(scores))  # ties resolve to the lowest index
        best = float(scores[best_pos])
        if cfg.mode == "foci":
            if best <= 0.0:
                termination = "relevance-below-threshold"
                break
        elif best < cfg.alpha2:
            termination = "relevance-below-threshold"
            break

        k = int(candidates[best_pos])
        selected.append((k, best))
        candidates = np.delete(candidates, best_pos)
        scorer.note_selected(k)
        if basis is not None:
            try:
                basis.extend(view.values[:, k])
            except CollinearColumnError:
                # selected column numerically in the basis span (possible
                # only under non-default thresholds); scoring already uses
                # original columns, so leave the basis unchanged
                pass
            else:
                deleted, candidates = batch_delete(basis, candidates,
                                                   view.values, cfg.alpha3)
                redundant.extend((int(j), len(selected)) for j in deleted)
        trace.append(SelectionStep(
            index=k,
            name=dataset.column_names[k],
            score=best,
            candidates_remaining=int(candidates.size),
            elapsed_ms=(time.monotonic() - step_t0) * 1e3,
        ))
        iteration += 1

    if termination is None:
        termination = "d_max-reached" if len(selected) >= d_max \
            else "candidates-exhausted"

    return SelectionResult(
        selected=selected,
        uninformative=uninformative,
        redundant=redundant,
        cond_independent=[int(j) for j in candidates],
        termination=termination,
        trace=trace,
        config=cfg,
        column_names=dataset.column_names,
        response_name=dataset.response_name,
        n=n,
        p=p,
        total_ms=(time.monotonic() - t0) * 1e3,
    )


def describe(result: SelectionResult) -> str:
    """Human-readable run report."""
    names = result.column_names
    lines = [
        f"selection over {result.p} predictors, {result.n} rows "
        f"(mode={result.config.mode}, seed={result.config.seed})",
        f"termination: {result.termination}",
        "",
        f"selected ({len(result.selected)}):",
    ]
    for rank_pos, (idx, score) in enumerate(result.selected, start=1):
        lines.append(f"  {rank_pos:3d}. {names[idx]}  relevance {score:+.6f}")
    lines.append(f"uninformative ({len(result.uninformative)}):")
    for idx, score in result.uninformative:
        lines.append(f"       {names[idx]}  entropy {score:.6f}")
    lines.append(f"redundant ({len(result.redundant)}):")
    for idx, at_size in result.redundant:
        lines.append(f"       {names[idx]}  deleted at selection size {at_size}")
    lines.append(
        f"conditionally independent ({len(result.cond_independent)}): "
        + ", ".join(names[j] for j in result.cond_independent)
    )
    lines.append(f"total {result.total_ms:.0f} ms")
    return "\n".join(lines)
