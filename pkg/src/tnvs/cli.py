"""Command line interface.

Subcommands: `select` (run selection on a CSV, emit a JSON result
document), `simulate` (write benchmark datasets), `bench` (repeated
selection with group-level scoring), `codec` (one dependence value).

Exit codes: 0 on success, 1 on data errors (unreadable/malformed input,
unknown columns), 2 on flag misuse.
"""

from __future__ import annotations

import json
import os
import sys

import click
import numpy as np

from . import __version__
from .codec import codec_conditional, codec_unconditional
from .data import DataError, load_csv, standardize
from .evaluation import run_benchmark
from .selector import SelectionResult, SelectorConfig, run_selection
from .simgen import SETTINGS, SimulationSpec, generate_setting, generate_toy, write_csv

RESULT_VERSION = "1"


def _resolve_seed(seed: int | None) -> int:
    """--seed flag, falling back to $TNVS_SEED, then 0."""
    if seed is not None:
        return seed
    raw = os.environ.get("TNVS_SEED", "").strip()
    if not raw:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise click.UsageError(f"TNVS_SEED must be an integer, got '{raw}'")


def _parse_dmax(value: str) -> int | None:
    if value == "auto":
        return None
    try:
        parsed = int(value)
    except ValueError:
        parsed = 0
    if parsed < 1:
        raise click.BadParameter("must be a positive integer or 'auto'")
    return parsed


def _threads(threads: int | None) -> int:
    return threads if threads is not None else (os.cpu_count() or 1)


def _config(alpha1, alpha2, alpha3, dmax, seed, mode, time_budget) -> SelectorConfig:
    try:
        return SelectorConfig(
            alpha1=alpha1, alpha2=alpha2, alpha3=alpha3,
            d_max=_parse_dmax(dmax), seed=_resolve_seed(seed),
            mode=mode, time_budget=time_budget,
        )
    except ValueError as exc:
        raise click.UsageError(str(exc))


def _result_document(result: SelectionResult, input_path: str) -> dict:
    cfg = result.config
    names = result.column_names

    def entries(indices):
        return [{"index": int(i), "name": names[i]} for i in indices]

    return {
        "version": RESULT_VERSION,
        "command": "select",
        "input": input_path,
        "response": result.response_name,
        "n": result.n,
        "p": result.p,
        "config": {
            "alpha1": cfg.alpha1,
            "alpha2": cfg.alpha2,
            "alpha3": cfg.alpha3,
            "d_max": cfg.d_max,
            "seed": cfg.seed,
            "mode": cfg.mode,
            "time_budget": cfg.time_budget,
        },
        "termination": result.termination,
        "subsets": {
            "selected": entries(i for i, _ in result.selected),
            "uninformative": entries(i for i, _ in result.uninformative),
            "redundant": entries(i for i, _ in result.redundant),
            "cond_independent": entries(result.cond_independent),
        },
        "selection_trace": [
            {
                "step": pos,
                "index": step.index,
                "name": step.name,
                "rels": step.score,
                "candidates_remaining": step.candidates_remaining,
                "elapsed_ms": step.elapsed_ms,
            }
            for pos, step in enumerate(result.trace, start=1)
        ],
        "timings": {"total_ms": result.total_ms},
    }


@click.group()
@click.version_option(__version__)
def main():
    """Transparent nonlinear variable selection."""


@main.command()
@click.option("--input", "input_path", required=True,
              type=click.Path(dir_okay=False), help="CSV file with a header row.")
@click.option("--response", required=True, help="Name of the response column.")
@click.option("--alpha1", type=float, default=0.01, show_default=True,
              help="Entropy threshold for the uninformative prefilter.")
@click.option("--alpha2", type=float, default=-0.01, show_default=True,
              help="Relevance threshold that stops the search.")
@click.option("--alpha3", type=float, default=0.01, show_default=True,
              help="Residual-variance threshold for redundancy deletion.")
@click.option("--dmax", default="auto", show_default=True,
              help="Selection size cap: a positive integer or 'auto' (ceil(n/ln n)).")
@click.option("--seed", type=int, default=None,
              help="Tie-break seed [default: $TNVS_SEED or 0].")
@click.option("--mode", type=click.Choice(["tnvs", "foci"]), default="tnvs",
              show_default=True)
@click.option("--time-budget", type=float, default=3600.0, show_default=True,
              help="Wall-clock cap in seconds.")
@click.option("--threads", type=int, default=None,
              help="Scoring threads [default: all cores]. Never affects results.")
@click.option("--output", "output_path", type=click.Path(dir_okay=False),
              default=None, help="Write the JSON document here instead of stdout.")
def select(input_path, response, alpha1, alpha2, alpha3, dmax, seed, mode,
           time_budget, threads, output_path):
    """Run selection on a CSV file and emit a JSON result document."""
    cfg = _config(alpha1, alpha2, alpha3, dmax, seed, mode, time_budget)
    try:
        dataset = load_csv(input_path, response)
        result = run_selection(dataset, cfg, threads=_threads(threads))
    except DataError as exc:
        raise click.ClickException(str(exc))
    doc = json.dumps(_result_document(result, input_path), indent=2) + "\n"
    if output_path:
        with open(output_path, "w", encoding="utf-8") as fh:
            fh.write(doc)
        click.echo(f"wrote {output_path} ({result.termination}, "
                   f"{len(result.selected)} selected)")
    else:
        click.echo(doc, nl=False)


@main.command()
@click.option("--setting", required=True,
              type=click.Choice(["1", "2", "3", "toy"]),
              help="Benchmark layout to generate.")
@click.option("--seed", type=int, default=None,
              help="Generator seed [default: $TNVS_SEED or 0].")
@click.option("--n", type=int, default=None, help="Override the row count.")
@click.option("--p", type=int, default=None,
              help="Override the column count (multiple of 10; not for toy).")
@click.option("--out", "out_dir", type=click.Path(file_okay=False), default=".",
              show_default=True, help="Output directory.")
def simulate(setting, seed, n, p, out_dir):
    """Write a benchmark dataset and its ground-truth sidecar as CSV."""
    seed = _resolve_seed(seed)
    try:
        if setting == "toy":
            if p is not None:
                raise click.UsageError("the toy layout has a fixed column count")
            data, truth = generate_toy(n=n if n is not None else 2000, seed=seed)
        else:
            base_n, base_p = SETTINGS[int(setting)]
            spec = SimulationSpec(n=n if n is not None else base_n,
                                  p=p if p is not None else base_p, seed=seed)
            data, truth = generate_setting(spec)
    except ValueError as exc:
        raise click.UsageError(str(exc))
    tag = "toy" if setting == "toy" else f"setting{setting}"
    data_path, truth_path = write_csv(data, truth, out_dir, tag)
    click.echo(f"wrote {data_path}")
    click.echo(f"wrote {truth_path}")


@main.command()
@click.option("--setting", required=True,
              type=click.Choice(["1", "2", "3", "toy"]))
@click.option("--reps", type=int, default=20, show_default=True,
              help="Total selection runs.")
@click.option("--datasets", type=int, default=10, show_default=True,
              help="Independent datasets; reps/datasets folds each.")
@click.option("--mode", type=click.Choice(["tnvs", "foci"]), default="tnvs",
              show_default=True)
@click.option("--seed", type=int, default=None,
              help="Base seed [default: $TNVS_SEED or 0].")
@click.option("--n", type=int, default=None, help="Override the row count.")
@click.option("--p", type=int, default=None,
              help="Override the column count (multiple of 10; not for toy).")
@click.option("--alpha1", type=float, default=0.01, show_default=True)
@click.option("--alpha2", type=float, default=-0.01, show_default=True)
@click.option("--alpha3", type=float, default=0.01, show_default=True)
@click.option("--dmax", default="auto", show_default=True)
@click.option("--time-budget", type=float, default=3600.0, show_default=True)
@click.option("--threads", type=int, default=None,
              help="Scoring threads [default: all cores]. Never affects results.")
@click.option("--output", "output_path", type=click.Path(dir_okay=False),
              default=None, help="Write the full JSON report here.")
def bench(setting, reps, datasets, mode, seed, n, p, alpha1, alpha2, alpha3,
          dmax, time_budget, threads, output_path):
    """Repeated selection over fresh datasets and 90% row subsamples."""
    cfg = _config(alpha1, alpha2, alpha3, dmax, seed, mode, time_budget)
    try:
        if setting == "toy":
            if p is not None:
                raise click.UsageError("the toy layout has a fixed column count")
            toy_n = n if n is not None else 2000

            def make(s: int):
                return generate_toy(n=toy_n, seed=s)

            spec = make
        else:
            base_n, base_p = SETTINGS[int(setting)]
            spec = SimulationSpec(n=n if n is not None else base_n,
                                  p=p if p is not None else base_p)
        report = run_benchmark(spec, cfg, reps=reps, datasets=datasets,
                               threads=_threads(threads))
    except ValueError as exc:
        raise click.UsageError(str(exc))
    click.echo(f"setting={setting} mode={mode} runs={report.runs}  "
               + report.format_row())
    if output_path:
        with open(output_path, "w", encoding="utf-8") as fh:
            json.dump(report.to_dict(), fh, indent=2)
            fh.write("\n")
        click.echo(f"wrote {output_path}")


@main.command()
@click.option("--input", "input_path", required=True,
              type=click.Path(dir_okay=False))
@click.option("--y", "y_name", required=True, help="Response column name.")
@click.option("--x", "x_name", required=True, help="Predictor column name.")
@click.option("--given", default=None,
              help="Comma-separated conditioning column names.")
@click.option("--seed", type=int, default=None,
              help="Tie-break seed [default: $TNVS_SEED or 0].")
def codec(input_path, y_name, x_name, given, seed):
    """Print one dependence value (or 'undefined').

    Predictor columns are standardized before the distance computations;
    the response is used as-is (the value only depends on its ranks).
    """
    seed = _resolve_seed(seed)
    try:
        dataset = load_csv(input_path, y_name)
        view = standardize(dataset)
        xj = view.values[:, dataset.column_index(x_name)]
        stream = np.random.default_rng(np.random.SeedSequence(seed))
        if given:
            names = [c.strip() for c in given.split(",") if c.strip()]
            if not names:
                raise click.UsageError("--given must list column names")
            cols = [dataset.column_index(c) for c in names]
            value = codec_conditional(dataset.response, xj,
                                      view.values[:, cols], stream)
        else:
            value = codec_unconditional(dataset.response, xj, stream)
    except DataError as exc:
        raise click.ClickException(str(exc))
    click.echo(str(value))


if __name__ == "__main__":
    main()
