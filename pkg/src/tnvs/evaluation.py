"""Scoring selection runs against simulation ground truth.

A run is judged at the group level: a relevant group counts as found when
any of its members is selected (members of one group are near-copies of
each other, so identity within the group does not matter). Per-column
categories for precision/recall use dynamic representatives: the first
selected member stands for its group, remaining members count as
redundant.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np

from .data import Dataset
from .selector import SelectionResult, SelectorConfig, run_selection
from .simgen import GroundTruth, SimulationSpec, generate_setting

CATEGORIES = ("relevant", "uninformative", "redundant", "cond_independent")
_REL, _UIN, _RED, _CIND = 0, 1, 2, 3


def _memberships(truth: GroundTruth) -> dict[int, frozenset[int]]:
    out: dict[int, set[int]] = {}
    for gid, group in enumerate(truth.groups):
        for j in group:
            out.setdefault(j, set()).add(gid)
    return {j: frozenset(s) for j, s in out.items()}


def coverage_of(selection_order: list[int], truth: GroundTruth) -> int:
    """Number of relevant groups with at least one selected member."""
    members = _memberships(truth)
    covered: set[int] = set()
    for j in selection_order:
        covered |= members.get(j, frozenset())
    return len(covered)


def min_model_size(selection_order: list[int], truth: GroundTruth) -> int | None:
    """Length of the shortest selection prefix covering every relevant
    group; None when the run never covers them all."""
    members = _memberships(truth)
    covered: set[int] = set()
    for i, j in enumerate(selection_order, start=1):
        covered |= members.get(j, frozenset())
        if len(covered) == len(truth.groups):
            return i
    return None


def precision_of(selection_order: list[int], truth: GroundTruth) -> np.ndarray:
    """Ground-truth category proportions over the selected set.

    Walks the selection in order; a column counts as relevant when it
    covers a group no earlier selection covered, as redundant when its
    groups were already covered, as uninformative or conditionally
    independent otherwise. Zeros when nothing was selected.
    """
    counts = np.zeros(4)
    if not selection_order:
        return counts
    members = _memberships(truth)
    covered: set[int] = set()
    for j in selection_order:
        if j in truth.uninformative:
            counts[_UIN] += 1
        elif j in members:
            new = members[j] - covered
            if new:
                counts[_REL] += 1
                covered |= new
            else:
                counts[_RED] += 1
        else:
            counts[_CIND] += 1
    return counts / len(selection_order)


def recall_matrix(result: SelectionResult, truth: GroundTruth) -> np.ndarray:
    """4x4 row-stochastic matrix: ground-truth category (relevant,
    uninformative, redundant, cond_independent) versus the subset the
    run assigned its columns to (same order).

    The relevant row tracks one representative per group: the first
    selected member, or the group's lowest index when the group was never
    selected. The redundant row tracks every other relevant-group member.
    """
    subsets = result.subsets
    location = np.full(truth.p, _CIND, dtype=np.int64)
    for cat, key in ((_REL, "selected"), (_UIN, "uninformative"),
                     (_RED, "redundant"), (_CIND, "cond_independent")):
        for j in subsets[key]:
            location[j] = cat

    members = _memberships(truth)
    reps: dict[int, int] = {}
    for j in result.selection_order:
        for gid in members.get(j, frozenset()):
            reps.setdefault(gid, j)
    for gid, group in enumerate(truth.groups):
        reps.setdefault(gid, min(group))

    matrix = np.zeros((4, 4))
    for gid in range(len(truth.groups)):
        matrix[_REL, location[reps[gid]]] += 1
    rep_columns = set(reps.values())
    rest = sorted(truth.relevant_members - rep_columns)
    for j in rest:
        matrix[_RED, location[j]] += 1
    for j in sorted(truth.uninformative):
        matrix[_UIN, location[j]] += 1
    others = [j for j in range(truth.p)
              if j not in truth.relevant_members and j not in truth.uninformative]
    for j in others:
        matrix[_CIND, location[j]] += 1

    for row, total in ((_REL, len(truth.groups)), (_RED, len(rest)),
                       (_UIN, len(truth.uninformative)), (_CIND, len(others))):
        if total:
            matrix[row] /= total
    return matrix


@dataclass(frozen=True)
class RunRecord:
    dataset: int
    fold: int
    coverage: int
    model_size: int | None
    selected: int
    termination: str
    seconds: float


@dataclass(frozen=True)
class EvalReport:
    runs: int
    groups: int
    pa: float
    coverage_mean: float
    coverage_sd: float
    m_mean: float | None
    m_sd: float | None
    precision: np.ndarray
    recall: np.ndarray
    seconds_mean: float
    seconds_sd: float
    records: list[RunRecord] = field(compare=False)

    def to_dict(self) -> dict:
        return {
            "runs": self.runs,
            "groups": self.groups,
            "pa": self.pa,
            "coverage_mean": self.coverage_mean,
            "coverage_sd": self.coverage_sd,
            "m_mean": self.m_mean,
            "m_sd": self.m_sd,
            "precision": {c: float(v) for c, v in zip(CATEGORIES, self.precision)},
            "recall": {c: [float(v) for v in row]
                       for c, row in zip(CATEGORIES, self.recall)},
            "seconds_mean": self.seconds_mean,
            "seconds_sd": self.seconds_sd,
            "records": [
                {"dataset": r.dataset, "fold": r.fold, "coverage": r.coverage,
                 "model_size": r.model_size, "selected": r.selected,
                 "termination": r.termination, "seconds": r.seconds}
                for r in self.records
            ],
        }

    def format_row(self) -> str:
        m = "-" if self.m_mean is None else f"{self.m_mean:.2f}({self.m_sd:.2f})"
        return (f"pa={self.pa:.2f}  M={m}  "
                f"coverage={self.coverage_mean:.2f}({self.coverage_sd:.2f})  "
                f"time={self.seconds_mean:.1f}s")


def _derived_seed(base: int, *key: int) -> int:
    seq = np.random.SeedSequence(base, spawn_key=key)
    return int(seq.generate_state(1, np.uint64)[0])


def run_benchmark(spec: SimulationSpec | Callable[[int], tuple[Dataset, GroundTruth]],
                  config: SelectorConfig, reps: int, datasets: int,
                  threads: int = 1) -> EvalReport:
    """Repeated selection over fresh data and row subsamples.

    Generates `datasets` independent datasets and runs reps/datasets
    selections per dataset, each on a seeded 90% row subsample (a fold).
    Dataset seeds, fold membership and per-run selection seeds all derive
    from config.seed, so a benchmark is exactly reproducible.

    `spec` may also be a factory mapping a derived seed to (Dataset,
    GroundTruth), for layouts other than the standard one.
    """
    if datasets < 1 or reps < datasets or reps % datasets != 0:
        raise ValueError("reps must be a positive multiple of datasets")
    folds = reps // datasets
    if callable(spec):
        make = spec
    else:
        base_spec = spec

        def make(seed: int) -> tuple[Dataset, GroundTruth]:
            return generate_setting(replace(base_spec, seed=seed))

    records: list[RunRecord] = []
    coverages, model_sizes, seconds = [], [], []
    precisions, recalls = [], []
    groups = None
    for di in range(datasets):
        data, truth = make(_derived_seed(config.seed, 2, di))
        groups = len(truth.groups)
        n = data.n
        keep = int(0.9 * n)
        for fi in range(folds):
            rows_rng = np.random.default_rng(
                np.random.SeedSequence(config.seed, spawn_key=(3, di, fi)))
            rows = np.sort(rows_rng.choice(n, size=keep, replace=False))
            sub = Dataset(
                predictors=data.predictors[rows],
                response=data.response[rows],
                column_names=data.column_names,
                response_name=data.response_name,
            )
            run_cfg = replace(config, seed=_derived_seed(config.seed, 4, di, fi))
            t0 = time.monotonic()
            result = run_selection(sub, run_cfg, threads=threads)
            dt = time.monotonic() - t0
            order = result.selection_order
            cov = coverage_of(order, truth)
            msize = min_model_size(order, truth)
            coverages.append(cov)
            if msize is not None:
                model_sizes.append(msize)
            if order:
                precisions.append(precision_of(order, truth))
            recalls.append(recall_matrix(result, truth))
            seconds.append(dt)
            records.append(RunRecord(
                dataset=di, fold=fi, coverage=cov, model_size=msize,
                selected=len(order), termination=result.termination,
                seconds=dt,
            ))

    coverages = np.asarray(coverages, dtype=np.float64)
    return EvalReport(
        runs=reps,
        groups=int(groups),
        pa=float(np.mean(coverages == groups)),
        coverage_mean=float(coverages.mean()),
        coverage_sd=float(coverages.std()),
        m_mean=float(np.mean(model_sizes)) if model_sizes else None,
        m_sd=float(np.std(model_sizes)) if model_sizes else None,
        precision=(np.mean(precisions, axis=0) if precisions else np.zeros(4)),
        recall=np.mean(recalls, axis=0),
        seconds_mean=float(np.mean(seconds)),
        seconds_sd=float(np.std(seconds)),
        records=records,
    )
