"""Synthetic benchmark data with known relevance structure.

The standard layout divides p columns (p divisible by 10) into ten blocks
of size p/10. The first nine blocks each hold one independent standard
normal signal followed by near-copies of it (signal plus lam * noise), so
every block is a collinear group. The response depends on the signals of
the first four blocks only:

    Y = 2 * s1 * s2 + cos(pi * s3 * s4) + eps

The last block is uninformative: each column is zero except for a fixed
small count of entries, round(nonzero_prop * n), drawn from N(0, 0.1^2).

A toy six-column instance (X4 = X1 + X2, X5 = X1 + X3, X6 near-constant,
Y = X1 * X2 exactly) exercises every subset type at a glance.
"""

from __future__ import annotations

import csv
import os
from dataclasses import dataclass

import numpy as np

from .data import Dataset

SETTINGS: dict[int, tuple[int, int]] = {
    1: (2000, 1000),
    2: (2000, 2000),
    3: (2000, 5000),
}

# standard deviation of the rare nonzero entries in uninformative columns
SPARSE_VALUE_SD = 0.1

LABEL_RELEVANT = "relevant-signal"
LABEL_COMPANION = "redundant-companion"
LABEL_OTHER = "other-signal"
LABEL_UNINFORMATIVE = "uninformative"


@dataclass(frozen=True)
class SimulationSpec:
    n: int
    p: int
    lam: float = 0.01
    nonzero_prop: float = 0.001
    noise_sd: float = 0.1
    seed: int = 0

    def __post_init__(self):
        if self.n < 10:
            raise ValueError(f"n must be at least 10, got {self.n}")
        if self.p < 10 or self.p % 10 != 0:
            raise ValueError(f"p must be a positive multiple of 10, got {self.p}")


@dataclass(frozen=True)
class GroundTruth:
    """Which columns matter, and how, for scoring a selection run.

    groups: the relevant collinear groups; a run covers a group when it
    selects any member. Groups overlap only in the toy construction.
    labels: per-column category string.
    group_ids: per-column tuple of group indices the column belongs to
    (relevant groups first, then the remaining collinear blocks).
    uninformative: columns that carry (almost) no signal at all.
    """

    groups: tuple[frozenset[int], ...]
    labels: tuple[str, ...]
    group_ids: tuple[tuple[int, ...], ...]
    uninformative: frozenset[int]

    @property
    def p(self) -> int:
        return len(self.labels)

    @property
    def relevant_members(self) -> frozenset[int]:
        out: set[int] = set()
        for g in self.groups:
            out |= g
        return frozenset(out)


def _sparse_column(rng: np.random.Generator, n: int, prop: float) -> np.ndarray:
    col = np.zeros(n)
    count = int(round(prop * n))
    if count:
        pos = rng.choice(n, size=count, replace=False)
        col[pos] = rng.normal(0.0, SPARSE_VALUE_SD, size=count)
    return col


def generate_setting(spec: SimulationSpec) -> tuple[Dataset, GroundTruth]:
    """Generate one dataset in the standard layout, plus its ground truth.

    Draw order is fixed (per block: signal then companion noise; then the
    uninformative block column by column; response noise last), so a given
    spec always produces bitwise-identical data.
    """
    rng = np.random.default_rng(spec.seed)
    n, p = spec.n, spec.p
    k = p // 10
    x = np.empty((n, p))
    for g in range(9):
        signal = rng.standard_normal(n)
        x[:, g * k] = signal
        if k > 1:
            eps = rng.standard_normal((n, k - 1))
            x[:, g * k + 1:(g + 1) * k] = signal[:, None] + spec.lam * eps
    for j in range(9 * k, p):
        x[:, j] = _sparse_column(rng, n, spec.nonzero_prop)
    s = [x[:, g * k] for g in range(4)]
    y = 2.0 * s[0] * s[1] + np.cos(np.pi * s[2] * s[3]) \
        + rng.normal(0.0, spec.noise_sd, size=n)

    groups = tuple(frozenset(range(g * k, (g + 1) * k)) for g in range(9))
    labels = []
    group_ids: list[tuple[int, ...]] = []
    for j in range(p):
        if j >= 9 * k:
            labels.append(LABEL_UNINFORMATIVE)
            group_ids.append(())
            continue
        g = j // k
        group_ids.append((g,))
        if j % k == 0:
            labels.append(LABEL_RELEVANT if g < 4 else LABEL_OTHER)
        else:
            labels.append(LABEL_COMPANION)
    truth = GroundTruth(
        groups=groups[:4],
        labels=tuple(labels),
        group_ids=tuple(group_ids),
        uninformative=frozenset(range(9 * k, p)),
    )
    names = tuple(f"X{j + 1}" for j in range(p))
    return Dataset(predictors=x, response=y, column_names=names), truth


def generate_toy(n: int = 2000, seed: int = 0) -> tuple[Dataset, GroundTruth]:
    """Six-column toy: multiplicative pair, two linear combinations, one
    independent signal, one near-constant column, noiseless response."""
    rng = np.random.default_rng(seed)
    base = rng.standard_normal((n, 3))
    x = np.empty((n, 6))
    x[:, 0:3] = base
    x[:, 3] = base[:, 0] + base[:, 1]
    x[:, 4] = base[:, 0] + base[:, 2]
    x[:, 5] = _sparse_column(rng, n, 0.001)
    y = x[:, 0] * x[:, 1]
    # X4 sits in both groups: selecting it can stand in for X1 or X2
    truth = GroundTruth(
        groups=(frozenset({0, 3}), frozenset({1, 3})),
        labels=(LABEL_RELEVANT, LABEL_RELEVANT, LABEL_OTHER,
                LABEL_COMPANION, LABEL_OTHER, LABEL_UNINFORMATIVE),
        group_ids=((0,), (1,), (), (0, 1), (), ()),
        uninformative=frozenset({5}),
    )
    names = tuple(f"X{j + 1}" for j in range(6))
    return Dataset(predictors=x, response=y, column_names=names), truth


def write_csv(dataset: Dataset, truth: GroundTruth, out_dir: str,
              tag: str) -> tuple[str, str]:
    """Write `<tag>_data.csv` and `<tag>_truth.csv` under out_dir.

    Data cells use %.17g so a reload reproduces the generated floats
    exactly. The truth sidecar lists column, label and group ids.
    """
    os.makedirs(out_dir, exist_ok=True)
    data_path = os.path.join(out_dir, f"{tag}_data.csv")
    truth_path = os.path.join(out_dir, f"{tag}_truth.csv")
    table = np.column_stack([dataset.predictors, dataset.response])
    header = ",".join(dataset.column_names + (dataset.response_name,))
    np.savetxt(data_path, table, fmt="%.17g", delimiter=",",
               header=header, comments="")
    with open(truth_path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["column", "label", "groups"])
        for j, name in enumerate(dataset.column_names):
            ids = ";".join(str(g) for g in truth.group_ids[j])
            writer.writerow([name, truth.labels[j], ids])
    return data_path, truth_path
