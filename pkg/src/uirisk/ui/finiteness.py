"""
Finiteness on L1 of distortion risk measures.

A concave h gives a measure finite on all of L1 exactly when its slope at
zero is finite, and then rho_h <= c E on nonnegative losses with c that
slope. Otherwise a comonotone sum of scaled indicators has bounded mean and
arbitrarily large risk.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.optimize import brentq

from uirisk.config import settings
from uirisk.core.distribution import DiscreteDistribution, mean, truncate
from uirisk.core.io import distribution_to_spec
from uirisk.exceptions import ParameterRangeError
from uirisk.logging_config import get_logger
from uirisk.measures.choquet import choquet, ies_direct
from uirisk.measures.distortion import DistortionFunction, slope_limit
from uirisk.measures.measures import certify_domination
from uirisk.schemas import FinitenessReport, WitnessReport

logger = get_logger(__name__)

WITNESS_FLOOR_LEVEL = 1000
DEFAULT_THRESHOLD = 10.0


def _largest_dyadic_above(h: DistortionFunction, target: float) -> tuple[float, float]:
    """Largest t = 2^-k, k <= floor level, with (h(t)/t)^(1/2) > target; the floor when none is."""
    ks = np.arange(1, WITNESS_FLOOR_LEVEL + 1, dtype=float)
    t = np.exp2(-ks)
    scores = np.sqrt(np.asarray(h(t), dtype=float) / t)
    hits = np.nonzero(scores > target)[0]
    i = int(hits[0]) if hits.size else t.size - 1
    return float(t[i]), float(scores[i])


def comonotone_witness(h: DistortionFunction, threshold: float = DEFAULT_THRESHOLD, max_terms: int | None = None) -> WitnessReport:
    """
    Truncated sum of c_n X_{t_n}, X_t = (t h(t))^(-1/2) 1{U <= t}.

    rho_h(X_t) = (h(t)/t)^(1/2) and E[X_t] = (t/h(t))^(1/2). With
    c_n = 2^-n and t_n chosen so that rho_h(X_t) > 2^n each term adds more
    than one to the risk and less than 4^-n to the mean. Once the dyadic
    floor is reached, c_n = 1 / rho_h(X_t) and each term adds exactly one.
    """
    max_terms = int(math.ceil(threshold)) + settings.ui.n_terms if max_terms is None else max_terms
    levels: list[float] = []
    coefficients: list[float] = []
    term_values: list[float] = []
    heights: list[float] = []

    total = 0.0
    n = 0
    while total <= threshold and n < max_terms:
        n += 1
        t, score = _largest_dyadic_above(h, 2.0**n)
        c = 2.0**-n if score > 2.0**n else 1.0 / score
        levels.append(t)
        coefficients.append(c)
        term_values.append(c * score)
        heights.append(c / (math.sqrt(t) * math.sqrt(float(h(t)))))
        total = math.fsum(term_values)

    # U in (t_{m+1}, t_m] carries the first m terms
    t_arr = np.asarray(levels)
    cells = np.concatenate((t_arr, [0.0]))
    widths = np.concatenate(([1.0 - t_arr[0]], cells[:-1] - cells[1:]))
    atoms = np.concatenate(([0.0], np.cumsum(heights)))
    law = DiscreteDistribution(atoms, widths)

    value = choquet(h, law)
    reached = value > threshold
    if not reached:
        logger.warning("Witness for %s stops at %g after %d terms (threshold %g)", h.kind, value, n, threshold)
    return WitnessReport(
        levels=levels,
        coefficients=coefficients,
        term_values=term_values,
        value=value,
        threshold=threshold,
        reached=reached,
        mean=mean(law),
        distribution=distribution_to_spec(law),
    )


def classify_finiteness(h: DistortionFunction, threshold: float = DEFAULT_THRESHOLD) -> FinitenessReport:
    """Expectation-dominated with its constant, or not finite on L1 with a witness."""
    slope = slope_limit(h)
    if slope.is_finite:
        certified = certify_domination(h, slope.value)
        logger.info("%s is expectation-dominated by c=%g (certified=%s)", h.kind, slope.value, certified)
        return FinitenessReport(classification="expectation-dominated", constant=slope, distortion=h.to_spec().model_dump())
    witness = comonotone_witness(h, threshold)
    logger.info("%s is not finite on L1: witness value %g with mean %g", h.kind, witness.value, witness.mean)
    return FinitenessReport(
        classification="not-finite-on-L1", constant=slope, distortion=h.to_spec().model_dump(), witness=witness
    )


# ─── Heavy-tailed law with infinite IES ────────────────────────

IES_LAW_CELLS = 2000
IES_LAW_SMALLEST_MASS = 1e-300
IES_LAW_MIN_CAP = 5.0
IES_LAW_MAX_CAP = 1e300


def _ies_law_log_quantile(x: float) -> float:
    """log of X = 1 / (U log^2 U), U = s/2, at upper mass s = e^x < 2."""
    return math.log(2.0) - x - 2.0 * math.log(math.log(2.0) - x)


def _ies_law_primitive(s: np.ndarray) -> np.ndarray:
    """Integral of the quantile over (0, s]."""
    with np.errstate(divide="ignore"):
        return np.where(s > 0.0, 2.0 / np.log(2.0 / np.where(s > 0.0, s, 1.0)), 0.0)


def example_ies_law(M: float | None = None, cells: int = IES_LAW_CELLS) -> DiscreteDistribution:
    """
    X = U^-1 (log U)^-2 with U uniform on (0, 1/2], capped at M and discretized.

    Cells are log-spaced in upper mass and carry exact cell means, so the
    uncapped law keeps the mean 2 / log 2. The cap only moves mass with
    X > M, which lives in the top tail once M >= 5.
    """
    edges = np.concatenate(([0.0], np.geomspace(IES_LAW_SMALLEST_MASS, 1.0, cells)))
    s_cap = None
    if M is not None:
        if not IES_LAW_MIN_CAP <= M <= IES_LAW_MAX_CAP:
            raise ParameterRangeError("M", M, f"[{IES_LAW_MIN_CAP:g}, {IES_LAW_MAX_CAP:g}]")
        # X > M exactly on s < s_cap, found in log-space on the decreasing branch
        log_M = math.log(M)
        s_cap = math.exp(brentq(lambda x: _ies_law_log_quantile(x) - log_M, -1e4, math.log(2.0) - 2.0))
        edges = np.unique(np.concatenate((edges, [s_cap])))

    widths = np.diff(edges)
    means = np.diff(_ies_law_primitive(edges)) / widths
    if s_cap is not None:
        means = np.where(edges[1:] <= s_cap, M, means)
    X = DiscreteDistribution(means, widths / math.fsum(widths))
    return X if M is None else truncate(X, M)


def ies_divergence_series(caps: list[float]) -> list[tuple[float, float]]:
    """IES of the capped example law for each cap M."""
    rows = [(float(M), ies_direct(example_ies_law(M))) for M in caps]
    for M, value in rows:
        logger.debug("IES of the example law capped at %g: %g", M, value)
    return rows
