"""
Greedy extraction of a w1-convergent subsequence.

Stage k clusters the remaining pool with w1 balls of radius 2^-k / 2,
centers taken in index order, and keeps the largest cluster (ties go to
the cluster holding the latest index). The next subsequence index is the
first cluster member after the previous one; the pool shrinks to the rest
of the cluster. The last center is the limit candidate.
"""

from __future__ import annotations

import numpy as np

from uirisk.config import settings
from uirisk.convergence.wasserstein import w1
from uirisk.core.distribution import DiscreteDistribution, negate
from uirisk.core.family import DistributionFamily
from uirisk.core.io import distribution_to_spec
from uirisk.exceptions import InconclusiveAtHorizonError
from uirisk.logging_config import get_logger
from uirisk.measures.choquet import choquet
from uirisk.measures.distortion import IES
from uirisk.schemas import SubsequenceReport
from uirisk.ui.monitor import GrowthMonitor, member_values

logger = get_logger(__name__)

MIN_LENGTH = 3


def w1_clusters(pool: list[int], laws: dict[int, DiscreteDistribution], radius: float) -> list[tuple[int, list[int]]]:
    """(center, members) per ball; every index joins the first center within radius."""
    clusters: list[tuple[int, list[int]]] = []
    for n in pool:
        for center, members in clusters:
            if w1(laws[n], laws[center]) <= radius:
                members.append(n)
                break
        else:
            clusters.append((n, [n]))
    return clusters


def subsequence_extract(
    family: DistributionFamily, min_length: int = MIN_LENGTH, max_stages: int | None = None
) -> SubsequenceReport:
    max_stages = settings.ui.n_terms if max_stages is None else max_stages
    laws = {n: family.member(n) for n in family.indices()}

    h = IES()
    values = member_values(family, lambda X: max(choquet(h, X), choquet(h, negate(X))))
    growth = GrowthMonitor(f"subseq:{family.label}").observe(values, not family.is_generated)
    if growth.verdict == "not-UI":
        logger.warning("Risk envelopes of %s diverge; extraction may not converge", family.label)

    pool = list(family.indices())
    indices: list[int] = []
    tolerances: list[float] = []
    gaps: list[float] = []
    center = pool[0]
    for k in range(1, max_stages + 1):
        if not pool:
            break
        eps = 2.0**-k
        clusters = w1_clusters(pool, laws, eps / 2.0)
        center, members = max(clusters, key=lambda c: (len(c[1]), max(c[1])))
        previous = indices[-1] if indices else 0
        later = [n for n in members if n > previous]
        if not later:
            break
        chosen = later[0]
        indices.append(chosen)
        tolerances.append(eps)
        gaps.append(w1(laws[chosen], laws[center]))
        pool = [n for n in later if n != chosen]
        logger.debug("Stage %d: index %d, cluster of %d around %d", k, chosen, len(members), center)

    if len(indices) < min_length:
        raise InconclusiveAtHorizonError(
            message=f"inconclusive at horizon: {len(indices)} indices extracted from {family.label}",
            details={"family": family.label, "indices": indices},
        )
    logger.info("Extracted %d indices from %s, limit candidate %d", len(indices), family.label, center)
    return SubsequenceReport(
        family=family.label,
        indices=indices,
        tolerances=tolerances,
        gaps=gaps,
        limit=distribution_to_spec(laws[center]),
        limit_index=center,
        hypothesis_ok=growth.verdict != "not-UI",
    )
