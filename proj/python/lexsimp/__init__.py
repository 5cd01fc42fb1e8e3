"""Lexical simplification: candidate ranking and shared-task evaluation."""

from ._lexsimp import (
    DataError,
    Error,
    ProviderFailure,
    correlate,
    derive_gold,
    evaluate,
    porter_stem,
    prune_by_mean_eq,
    rank_feature,
    run_cli,
    simplify,
)

__all__ = [
    "DataError",
    "Error",
    "ProviderFailure",
    "correlate",
    "derive_gold",
    "evaluate",
    "porter_stem",
    "prune_by_mean_eq",
    "rank_feature",
    "run_cli",
    "simplify",
]
