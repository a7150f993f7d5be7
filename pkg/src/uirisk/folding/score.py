"""
Folding scores.

The folding ratio of a position X under rho is

    s(X) = rho(|X|) / max(rho(X), rho(-X)),

with inf/inf = 1, 0/0 = 1 and positive/0 = inf. For a concave distortion h
other than the identity it is bounded by

    b_h = (h(1/2) + 1/2) / (h(1/2) - 1/2),

and the per-law bound (2 + a + b) / (1 - ab) from the dual distortion sits
between the two.
"""

from __future__ import annotations

import math

import numpy as np

from uirisk.config import settings
from uirisk.core.distribution import DiscreteDistribution, fold, negate
from uirisk.core.extended import POS_INF, ExtendedReal, ratio
from uirisk.core.family import DistributionFamily
from uirisk.core.io import distribution_to_spec
from uirisk.exceptions import NonConcaveDistortionError, ParameterRangeError
from uirisk.logging_config import get_logger
from uirisk.measures.choquet import choquet
from uirisk.measures.distortion import DistortionFunction, ESClip, dual
from uirisk.measures.measures import Distortion, Position, RiskMeasure, fold_position, negate_position
from uirisk.schemas import FamilyFoldBounds, FoldingComponents, FoldingReport

logger = get_logger(__name__)

# z-grid for the refined bound; endpoints excluded
_Z_GRID = np.linspace(0.0, 1.0, 4097)[1:-1]


def folding_ratio(rho: RiskMeasure, X: Position, absolute: bool = False) -> FoldingReport:
    """
    Folding ratio of X under rho with its components.

    With absolute=True the denominator is max(|rho(X)|, |rho(-X)|), the form
    that applies to measures which are not normalized convex.
    """
    folded = rho.evaluate(fold_position(X))
    positive = rho.evaluate(X)
    negative = rho.evaluate(negate_position(X))
    den = max(abs(positive), abs(negative)) if absolute else max(positive, negative)
    value = ratio(ExtendedReal.finite(folded), ExtendedReal.finite(den), settings.numerics.zero_tol)

    bound = None
    if isinstance(rho, Distortion) and rho.h.is_concave:
        bound = bound_b(rho.h)

    law = isinstance(X, DiscreteDistribution)
    return FoldingReport(
        ratio=value,
        bound=bound,
        components=FoldingComponents(
            folded=ExtendedReal.finite(folded),
            positive=ExtendedReal.finite(positive),
            negative=ExtendedReal.finite(negative),
        ),
        witness=distribution_to_spec(X) if law else None,
        witness_vector=None if law else np.asarray(X, dtype=float).tolist(),
    )


def lemma_objective(z: float | np.ndarray, a: float, b: float) -> float | np.ndarray:
    """f(z) = (1 + z) / max(1 - a z, z - b) for z > 0."""
    z_arr = np.asarray(z, dtype=float)
    den = np.maximum(1.0 - a * z_arr, z_arr - b)
    with np.errstate(divide="ignore"):
        out = np.where(den > 0.0, (1.0 + z_arr) / np.where(den > 0.0, den, 1.0), np.inf)
    return float(out) if out.ndim == 0 else out


def lemma_max(a: float, b: float) -> ExtendedReal:
    """sup over x, y > 0 of (x + y) / max(x - a y, y - b x), for a, b in [0, 1]."""
    for name, value in (("a", a), ("b", b)):
        if not 0.0 <= value <= 1.0:
            raise ParameterRangeError(name, value, "[0, 1]")
    if a * b >= 1.0:
        return POS_INF
    return ExtendedReal.finite((2.0 + a + b) / (1.0 - a * b))


def bound_b(h: DistortionFunction) -> ExtendedReal:
    """(h(1/2) + 1/2) / (h(1/2) - 1/2); infinite exactly for the identity."""
    if not h.is_concave:
        raise NonConcaveDistortionError(h.kind)
    half = h.half_value
    if half - 0.5 <= settings.numerics.concavity_tol:
        return POS_INF
    return ExtendedReal.finite((half + 0.5) / (half - 0.5))


def _dual_ratio(h: DistortionFunction, t: float | np.ndarray) -> np.ndarray:
    """g(t) / h(t), taken as 0 where h(t) = 0."""
    t_arr = np.asarray(t, dtype=float)
    hv = np.asarray(h(t_arr), dtype=float)
    gv = np.asarray(dual(h)(t_arr), dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(hv > 0.0, gv / np.where(hv > 0.0, hv, 1.0), 0.0)
    return np.clip(out, 0.0, 1.0)


def instance_bound(h: DistortionFunction, X: DiscreteDistribution) -> ExtendedReal:
    """Per-law bound (2 + a + b) / (1 - ab) with z = P(X < 0)."""
    if not h.is_concave:
        raise NonConcaveDistortionError(h.kind)
    z = math.fsum(X.weights[X.atoms < 0.0])
    a = float(_dual_ratio(h, z))
    b = float(_dual_ratio(h, 1.0 - z))
    return lemma_max(a, b)


def refined_bound(h: DistortionFunction) -> ExtendedReal:
    """
    3 / (1 - c) with c = g(1/2) / h(1/2) when a(z) + b(z) <= 1 on the z-grid.

    Falls back to b_h when the grid check fails.
    """
    fallback = bound_b(h)
    c = float(_dual_ratio(h, 0.5))
    if c >= 1.0:
        return POS_INF
    a = _dual_ratio(h, _Z_GRID)
    b = _dual_ratio(h, 1.0 - _Z_GRID)
    if np.any(a + b > 1.0 + settings.numerics.concavity_tol):
        logger.debug("Refined bound check fails for %s, using b_h", h.kind)
        return fallback
    return min(ExtendedReal.finite(3.0 / (1.0 - c)), fallback)


def es_refined_bound(p: float) -> ExtendedReal:
    """Refined folding bound of ES_p for p in (0, 1/2]."""
    if not 0.0 < p <= 0.5:
        raise ParameterRangeError("p", p, "(0, 1/2]")
    return refined_bound(ESClip(p))


def sharpness_family(p: float, eps: float) -> DiscreteDistribution:
    """Two-point law whose ES_p folding ratio is 3 - eps."""
    if not 0.5 <= p < 1.0:
        raise ParameterRangeError("p", p, "[1/2, 1)")
    if not 0.0 < eps < 2.0:
        raise ParameterRangeError("eps", eps, "(0, 2)")
    w = eps * (1.0 - p) / (4.0 - eps)
    return DiscreteDistribution([-1.0, 2.0 * (1.0 - p) / w], [1.0 - w, w])


def family_fold_bounds(h: DistortionFunction, family: DistributionFamily) -> FamilyFoldBounds:
    """Suprema of rho_h(|X|), rho_h(X) and rho_h(-X) over a family, with the bound sandwich."""
    b = bound_b(h)
    sup_folded = sup_positive = sup_negative = -math.inf
    for X in family:
        sup_folded = max(sup_folded, choquet(h, fold(X)))
        sup_positive = max(sup_positive, choquet(h, X))
        sup_negative = max(sup_negative, choquet(h, negate(X)))

    side = max(sup_positive, sup_negative)
    slack = 1e-9 * max(1.0, abs(sup_folded))
    holds = side <= sup_folded + slack
    if b.is_finite:
        holds = holds and sup_folded <= b.value * side + slack
    logger.info(
        "Family %s: sup rho(|X|)=%g, sup rho(X)=%g, sup rho(-X)=%g", family.label, sup_folded, sup_positive, sup_negative
    )
    return FamilyFoldBounds(
        family=family.label,
        sup_folded=sup_folded,
        sup_positive=sup_positive,
        sup_negative=sup_negative,
        bound=b,
        sandwich_holds=holds,
    )
