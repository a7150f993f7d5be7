"""
Distortion construction for uniformly integrable families.

Given a family S whose tail envelope sup (1-p) ES_p(|X|) vanishes as p -> 1,
pick tail masses d_n = 1 - p_n with envelope below 2^-n and sum the ES
distortions:

    g(t) = sum_n min(t, d_n) + d_T * ladder_{d_T}(t),    h = g / g(1).

The ladder is the closed form of the remaining dyadic series below d_T, so h
is concave with infinite slope at zero and sup over S of rho_h(|X|) is at
most 1 / g(1).
"""

from __future__ import annotations

import math

import numpy as np

from uirisk.config import settings
from uirisk.core.distribution import fold, negate, upper_tail_integral
from uirisk.core.family import DistributionFamily
from uirisk.exceptions import UIPremiseError
from uirisk.logging_config import get_logger
from uirisk.measures.choquet import choquet
from uirisk.measures.distortion import ESClip, ESLadder, NormalizedSum
from uirisk.parallel import parallel_map
from uirisk.schemas import DVPReport
from uirisk.ui.monitor import MEMBER_CHUNK, member_values

logger = get_logger(__name__)

# Smallest tail mass an ES level 1 - d resolves in double precision
MIN_TAIL_MASS = 2.0**-52


def family_tail_sups(family: DistributionFamily, deltas: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Suprema over the family of the tail integrals of |X|, X and -X at each mass.

    The tail integral at mass d is d * ES_{1-d}.
    """
    deltas = np.asarray(deltas, dtype=float)
    spans = [(lo, min(lo + MEMBER_CHUNK, family.horizon + 1)) for lo in range(1, family.horizon + 1, MEMBER_CHUNK)]

    def run(span: tuple[int, int]) -> np.ndarray:
        best = np.full((3, deltas.size), -np.inf)
        for n in range(*span):
            X = family.member(n)
            best[0] = np.maximum(best[0], upper_tail_integral(fold(X), deltas))
            best[1] = np.maximum(best[1], upper_tail_integral(X, deltas))
            best[2] = np.maximum(best[2], upper_tail_integral(negate(X), deltas))
        return best

    sups = np.max(np.stack(parallel_map(run, spans)), axis=0)
    return sups[0], sups[1], sups[2]


def dvp_distortion(family: DistributionFamily, n_terms: int | None = None) -> tuple[NormalizedSum, DVPReport]:
    """Build h from the family's tail envelope and certify sup rho_h(|X|) <= 1 / g(1)."""
    n_terms = settings.ui.n_terms if n_terms is None else n_terms
    levels = np.arange(0, settings.ui.max_dyadic_level + 1)
    dyadics = np.exp2(-levels.astype(float))
    env, _, _ = family_tail_sups(family, dyadics)
    mean_abs = float(env[0])

    masses = []
    for n in range(1, n_terms + 1):
        target = 2.0**-n
        ok = np.nonzero((levels >= n + 1) & (env < target) & (dyadics >= MIN_TAIL_MASS))[0]
        if ok.size == 0:
            raise UIPremiseError(
                family.label, f"no dyadic tail mass down to 2^-52 brings the envelope below 2^-{n}"
            )
        masses.append(float(dyadics[ok[0]]))

    residual_target = 2.0**-n_terms
    tail_base = masses[-1]
    while tail_base * mean_abs >= residual_target:
        tail_base /= 2.0
        if tail_base < dyadics[-1]:
            raise UIPremiseError(family.label, "remainder series needs a tail base below the dyadic range")

    h = NormalizedSum([*(ESClip(1.0 - d) for d in masses), ESLadder(tail_base)], [*masses, tail_base])
    g_one = math.fsum([*masses, tail_base])
    bound = 1.0 / g_one
    attained = float(np.max(member_values(family, lambda X: choquet(h, fold(X)))))
    if attained > bound * (1.0 + 1e-9):
        logger.warning("Constructed distortion exceeds its bound on %s: %g > %g", family.label, attained, bound)
    logger.info("DVP distortion for %s: g(1)=%g, bound=%g, attained=%g", family.label, g_one, bound, attained)

    report = DVPReport(
        family=family.label,
        tail_masses=masses,
        tail_base=tail_base,
        g_one=g_one,
        bound=bound,
        attained=attained,
        residual=residual_target / g_one,
        distortion=h.to_spec().model_dump(),
    )
    return h, report
