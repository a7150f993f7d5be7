"""Folding scores, their bounds, the randomized search and the counterexample gallery."""

from uirisk.folding.gallery import counterexample_gallery
from uirisk.folding.score import (
    bound_b,
    es_refined_bound,
    family_fold_bounds,
    folding_ratio,
    instance_bound,
    lemma_max,
    lemma_objective,
    refined_bound,
    sharpness_family,
)
from uirisk.folding.search import SearchConfig, empirical_folding_score

__all__ = [
    "SearchConfig",
    "bound_b",
    "counterexample_gallery",
    "empirical_folding_score",
    "es_refined_bound",
    "family_fold_bounds",
    "folding_ratio",
    "instance_bound",
    "lemma_max",
    "lemma_objective",
    "refined_bound",
    "sharpness_family",
]
