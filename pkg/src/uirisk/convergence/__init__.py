"""Wasserstein machinery and the convergence experiments."""

from uirisk.convergence.experiments import (
    builtin_sequence,
    dyadic_schedule,
    es_convergence_experiment,
    lln_experiment,
    monotone_within_noise,
    w1_consistency_check,
)
from uirisk.convergence.generators import IIDGenerator, normal_quadrature, parse_generator
from uirisk.convergence.subsequence import subsequence_extract
from uirisk.convergence.wasserstein import comonotone_version, grid_levels, w1

__all__ = [
    "IIDGenerator",
    "builtin_sequence",
    "comonotone_version",
    "dyadic_schedule",
    "es_convergence_experiment",
    "grid_levels",
    "lln_experiment",
    "monotone_within_noise",
    "normal_quadrature",
    "parse_generator",
    "subsequence_extract",
    "w1",
    "w1_consistency_check",
]
