"""Finite discrete distributions, families, extended reals and seeded streams."""

from uirisk.core.distribution import (
    DiscreteDistribution,
    QuantileFunction,
    affine,
    fold,
    from_samples,
    mean,
    mix,
    negate,
    quantile_function,
    truncate,
    upper_tail_integral,
    var,
)
from uirisk.core.extended import NEG_INF, POS_INF, ExtendedReal
from uirisk.core.family import DistributionFamily

__all__ = [
    "DiscreteDistribution",
    "DistributionFamily",
    "ExtendedReal",
    "NEG_INF",
    "POS_INF",
    "QuantileFunction",
    "affine",
    "fold",
    "from_samples",
    "mean",
    "mix",
    "negate",
    "quantile_function",
    "truncate",
    "upper_tail_integral",
    "var",
]
