"""Python bindings for the ideofactor C++ library."""

import json

from ._core import (
    Explorer,
    InputError,
    InsufficientOverlapError,
    NumericError,
    SolverConfig,
    ZeroVarianceError,
    __version__,
    adjusted_rand_index,
    affinity_cols,
    affinity_rows,
    fit,
    fit_dmcc,
    fit_ifd_ngr,
    fit_nmf_symm,
    fit_onmtf,
    generate,
    hard_clusters,
    ideology_score,
    laplacian,
    mutual_information_scores,
    pearson,
    popularity_score,
    purity,
    run_cli,
)


def space(explorer):
    """Space payload as Python objects."""
    return json.loads(explorer.space_json())


def recommend(explorer, user, **options):
    """Recommendation payload as Python objects."""
    return json.loads(explorer.recommend_json(user, **options))


__all__ = [
    "Explorer",
    "InputError",
    "InsufficientOverlapError",
    "NumericError",
    "SolverConfig",
    "ZeroVarianceError",
    "__version__",
    "adjusted_rand_index",
    "affinity_cols",
    "affinity_rows",
    "fit",
    "fit_dmcc",
    "fit_ifd_ngr",
    "fit_nmf_symm",
    "fit_onmtf",
    "generate",
    "hard_clusters",
    "ideology_score",
    "laplacian",
    "mutual_information_scores",
    "pearson",
    "popularity_score",
    "purity",
    "recommend",
    "run_cli",
    "space",
]
