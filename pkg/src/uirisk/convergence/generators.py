"""
Mean-zero iid generators for the convergence experiments.

Each generator draws by inverse-CDF sampling from a numpy Generator:

    coin          +-1 with probability 1/2
    pareto:<a>    S * (1 - U)^(-1/a), S an independent fair sign
    normal        standard normal
    zero          constant 0
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.stats import norm

from uirisk.core.distribution import DiscreteDistribution
from uirisk.convergence.wasserstein import grid_levels
from uirisk.exceptions import ParameterRangeError

Sampler = Callable[[np.random.Generator, int], np.ndarray]


@dataclass(frozen=True)
class IIDGenerator:
    name: str
    sample: Sampler


def _coin(rng: np.random.Generator, size: int) -> np.ndarray:
    return np.where(rng.random(size) < 0.5, -1.0, 1.0)


def _pareto(alpha: float) -> Sampler:
    def sample(rng: np.random.Generator, size: int) -> np.ndarray:
        magnitude = (1.0 - rng.random(size)) ** (-1.0 / alpha)
        return np.where(rng.random(size) < 0.5, -magnitude, magnitude)

    return sample


def _normal(rng: np.random.Generator, size: int) -> np.ndarray:
    return rng.standard_normal(size)


def _zero(rng: np.random.Generator, size: int) -> np.ndarray:
    return np.zeros(size)


def parse_generator(spec: str) -> IIDGenerator:
    name, _, arg = spec.strip().partition(":")
    if name == "coin":
        return IIDGenerator("coin", _coin)
    if name == "normal":
        return IIDGenerator("normal", _normal)
    if name == "zero":
        return IIDGenerator("zero", _zero)
    if name == "pareto":
        try:
            alpha = float(arg)
        except ValueError as e:
            raise ParameterRangeError("alpha", arg, "numbers above 1") from e
        if not alpha > 1.0:
            raise ParameterRangeError("alpha", alpha, "(1, inf) for an integrable law")
        return IIDGenerator(f"pareto:{alpha:g}", _pareto(alpha))
    raise ParameterRangeError("generator", spec, "coin, normal, zero or pareto:<alpha>")


def normal_quadrature(m: int) -> DiscreteDistribution:
    """Standard normal quantiles at the grid midpoints, equally weighted."""
    return DiscreteDistribution.uniform(norm.ppf(grid_levels(m)))
