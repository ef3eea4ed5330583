"""Tabular input handling: CSV loading, validation, standardization."""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np


class DataError(ValueError):
    """Invalid input data (bad CSV, non-numeric cells, degenerate shapes)."""


@dataclass(frozen=True)
class Dataset:
    """A validated numeric table: predictors, one response, column names.

    Parameters
    ----------
    predictors : (n, p) float array
    response : (n,) float array
    column_names : predictor names, unique, aligned with predictor columns
    response_name : name of the response column
    """

    predictors: np.ndarray
    response: np.ndarray
    column_names: tuple[str, ...]
    response_name: str = "Y"

    def __post_init__(self):
        preds = np.ascontiguousarray(np.asarray(self.predictors, dtype=np.float64))
        resp = np.asarray(self.response, dtype=np.float64)
        if preds.ndim != 2:
            raise DataError("predictors must be a 2-d array")
        n, p = preds.shape
        if n < 3:
            raise DataError(f"need at least 3 rows, got {n}")
        if p < 1:
            raise DataError("need at least one predictor column")
        if resp.shape != (n,):
            raise DataError(
                f"response length {resp.shape} does not match {n} rows"
            )
        if not np.isfinite(preds).all():
            bad = np.argwhere(~np.isfinite(preds))[0]
            raise DataError(
                f"non-finite value in column '{self.column_names[bad[1]]}'"
                f" at data row {bad[0] + 1}"
            )
        if not np.isfinite(resp).all():
            row = int(np.flatnonzero(~np.isfinite(resp))[0])
            raise DataError(f"non-finite response at data row {row + 1}")
        names = tuple(str(c) for c in self.column_names)
        if len(names) != p:
            raise DataError(f"{len(names)} column names for {p} columns")
        if len(set(names)) != p:
            seen, dup = set(), None
            for c in names:
                if c in seen:
                    dup = c
                    break
                seen.add(c)
            raise DataError(f"duplicate column name '{dup}'")
        object.__setattr__(self, "predictors", preds)
        object.__setattr__(self, "response", resp)
        object.__setattr__(self, "column_names", names)

    @property
    def n(self) -> int:
        return self.predictors.shape[0]

    @property
    def p(self) -> int:
        return self.predictors.shape[1]

    def column_index(self, name: str) -> int:
        try:
            return self.column_names.index(name)
        except ValueError:
            raise DataError(f"unknown column '{name}'") from None


@dataclass(frozen=True)
class StandardizedView:
    """Per-column standardization of a Dataset's predictors.

    Uses the population convention (divisor n). Columns with zero variance
    standardize to all zeros rather than dividing by zero.
    """

    values: np.ndarray
    means: np.ndarray
    stds: np.ndarray
    column_names: tuple[str, ...]

    def column(self, j: int) -> np.ndarray:
        return self.values[:, j]


def standardize(dataset: Dataset) -> StandardizedView:
    """Center and scale each predictor column by its population moments."""
    x = dataset.predictors
    means = x.mean(axis=0)
    stds = x.std(axis=0)  # population divisor n
    centered = x - means
    safe = np.where(stds > 0.0, stds, 1.0)
    values = centered / safe
    values[:, stds == 0.0] = 0.0
    return StandardizedView(
        values=np.ascontiguousarray(values),
        means=means,
        stds=stds,
        column_names=dataset.column_names,
    )


def load_csv(path: str, response: str) -> Dataset:
    """Load a UTF-8 comma-separated file with a header row into a Dataset.

    The named response column is split out; every other column becomes a
    predictor. Non-numeric cells are reported with their file line number
    and column name.
    """
    try:
        fh = open(path, "r", encoding="utf-8", newline="")
    except OSError as exc:
        raise DataError(f"cannot read '{path}': {exc.strerror}") from None
    with fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError(f"'{path}' is empty") from None
        header = [h.strip() for h in header]
        if response not in header:
            raise DataError(f"response column '{response}' not in header of '{path}'")
        rows: list[np.ndarray] = []
        width = len(header)
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue  # tolerate trailing blank lines
            if len(row) != width:
                raise DataError(
                    f"{path}: line {lineno} has {len(row)} cells, expected {width}"
                )
            try:
                rows.append(np.asarray(row, dtype=np.float64))
            except ValueError:
                # slow path only to locate the offending cell
                for name, cell in zip(header, row):
                    try:
                        float(cell)
                    except ValueError:
                        raise DataError(
                            f"{path}: line {lineno}, column '{name}':"
                            f" non-numeric cell '{cell.strip()}'"
                        ) from None
                raise
    if len(rows) < 3:
        raise DataError(f"'{path}' has {len(rows)} data rows, need at least 3")
    table = np.vstack(rows)
    ridx = header.index(response)
    mask = np.ones(width, dtype=bool)
    mask[ridx] = False
    names = tuple(h for i, h in enumerate(header) if i != ridx)
    return Dataset(
        predictors=table[:, mask],
        response=table[:, ridx],
        column_names=names,
        response_name=response,
    )
