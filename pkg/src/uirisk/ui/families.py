"""
Built-in and file-backed distribution families.

    bernoulli_scaled        X_n = n * Bernoulli(1/n), not UI
    bernoulli_half          the single law Bernoulli(1/2)
    bounded_uniform         X_n uniform on n + 1 points of [-1, 1]
    pareto_truncated:<a>    X_n = min(P, n), P Pareto(a) on [1, inf)
    single:<json>           one law given inline
    <directory>             one member per CSV file, in name order
"""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np

from uirisk.config import settings
from uirisk.core.distribution import DiscreteDistribution
from uirisk.core.family import DistributionFamily
from uirisk.core.io import parse_distribution_json, read_distribution_csv
from uirisk.exceptions import EmptyFamilyError, ParameterRangeError, ReportIOError
from uirisk.logging_config import get_logger

logger = get_logger(__name__)

PARETO_CELLS = 64


def bernoulli_scaled(horizon: int | None = None) -> DistributionFamily:
    return DistributionFamily(
        "bernoulli_scaled",
        generator=lambda n: DiscreteDistribution.bernoulli(1.0 / n, scale=float(n)),
        horizon=horizon or settings.ui.horizon,
    )


def bernoulli_half() -> DistributionFamily:
    return DistributionFamily.of("bernoulli_half", DiscreteDistribution.bernoulli(0.5))


def bounded_uniform(horizon: int | None = None) -> DistributionFamily:
    return DistributionFamily(
        "bounded_uniform",
        generator=lambda n: DiscreteDistribution.uniform(np.linspace(-1.0, 1.0, n + 1)),
        horizon=horizon or settings.ui.horizon,
    )


def pareto_capped(alpha: float, cap: float, cells: int = PARETO_CELLS) -> DiscreteDistribution:
    """
    Law of min(P, cap) for P with P(P > x) = x^-alpha on [1, inf).

    The atom cap carries mass cap^-alpha; below it the upper-mass range is
    cut into log-spaced cells carrying exact cell means of s^(-1/alpha).
    """
    if not alpha > 0.0:
        raise ParameterRangeError("alpha", alpha, "(0, inf)")
    if cap <= 1.0:
        return DiscreteDistribution.point(cap)
    s_cap = cap**-alpha
    edges = np.geomspace(s_cap, 1.0, cells + 1)
    k = 1.0 - 1.0 / alpha
    if abs(k) < 1e-12:
        primitive = np.log(edges)
    else:
        primitive = edges**k / k
    widths = np.diff(edges)
    means = np.diff(primitive) / widths
    atoms = np.concatenate((means, [cap]))
    weights = np.concatenate((widths, [s_cap]))
    return DiscreteDistribution(atoms, weights / math.fsum(weights))


def pareto_truncated(alpha: float, horizon: int | None = None) -> DistributionFamily:
    return DistributionFamily(
        f"pareto_truncated:{alpha:g}",
        generator=lambda n: pareto_capped(alpha, float(n)),
        horizon=horizon or settings.ui.horizon,
    )


def csv_directory(path: str | Path, horizon: int | None = None) -> DistributionFamily:
    directory = Path(path)
    files = sorted(directory.glob("*.csv"))
    if not files:
        raise EmptyFamilyError(str(directory))
    logger.info("Loading %d family members from %s", len(files), directory)
    return DistributionFamily(directory.name, members=[read_distribution_csv(f) for f in files], horizon=horizon)


BUILTIN = ("bernoulli_scaled", "bernoulli_half", "bounded_uniform", "pareto_truncated:<alpha>", "single:<json>")


def load_family(spec: str, horizon: int | None = None) -> DistributionFamily:
    """Resolve a builtin family name or a directory of CSV members."""
    name, _, arg = spec.partition(":")
    if name == "bernoulli_scaled":
        return bernoulli_scaled(horizon)
    if name == "bernoulli_half":
        return bernoulli_half()
    if name == "bounded_uniform":
        return bounded_uniform(horizon)
    if name == "pareto_truncated":
        try:
            alpha = float(arg)
        except ValueError as e:
            raise ParameterRangeError("alpha", arg, "positive numbers") from e
        return pareto_truncated(alpha, horizon)
    if name == "single":
        return DistributionFamily.of("single", parse_distribution_json(arg))
    if Path(spec).is_dir():
        return csv_directory(spec, horizon)
    raise ReportIOError(spec, f"not a directory or builtin family ({', '.join(BUILTIN)})")
