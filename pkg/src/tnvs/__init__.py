"""Transparent nonlinear variable selection.

Forward stepwise selection driven by a rank/nearest-neighbor conditional
dependence coefficient, with entropy screening of uninformative columns
and Gram-Schmidt elimination of linearly redundant ones. Every run sorts
all predictors into four disjoint, interpretable subsets.
"""

from .codec import (
    CodecValue,
    RankData,
    codec_conditional,
    codec_unconditional,
    compute_ranks,
    iteration_stream,
    nearest_neighbors,
    tie_stream,
)
from .data import DataError, Dataset, StandardizedView, load_csv, standardize
from .evaluation import (
    EvalReport,
    coverage_of,
    min_model_size,
    precision_of,
    recall_matrix,
    run_benchmark,
)
from .ortho import CollinearColumnError, OrthoBasis, batch_delete, redundancy_score
from .screening import EntropyScore, discretize, prefilter, uninformative_score
from .selector import (
    SelectionResult,
    SelectionStep,
    SelectorConfig,
    default_d_max,
    describe,
    relevance_score,
    run_selection,
)
from .simgen import (
    SETTINGS,
    GroundTruth,
    SimulationSpec,
    generate_setting,
    generate_toy,
    write_csv,
)

__version__ = "0.1.0"

__all__ = [
    "CodecValue", "RankData", "codec_conditional", "codec_unconditional",
    "compute_ranks", "iteration_stream", "nearest_neighbors", "tie_stream",
    "DataError", "Dataset", "StandardizedView", "load_csv", "standardize",
    "EvalReport", "coverage_of", "min_model_size", "precision_of",
    "recall_matrix", "run_benchmark",
    "CollinearColumnError", "OrthoBasis", "batch_delete", "redundancy_score",
    "EntropyScore", "discretize", "prefilter", "uninformative_score",
    "SelectionResult", "SelectionStep", "SelectorConfig", "default_d_max",
    "describe", "relevance_score", "run_selection",
    "SETTINGS", "GroundTruth", "SimulationSpec", "generate_setting",
    "generate_toy", "write_csv",
    "__version__",
]
