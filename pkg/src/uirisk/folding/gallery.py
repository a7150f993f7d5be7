"""Counterexamples: convex and coherent measures with unbounded folding ratios."""

from __future__ import annotations

import numpy as np

from uirisk.core.distribution import DiscreteDistribution
from uirisk.folding.score import folding_ratio
from uirisk.folding.search import SearchConfig, empirical_folding_score
from uirisk.logging_config import get_logger
from uirisk.measures.distortion import IES, ESClip, Power
from uirisk.measures.measures import Capacity, Entropic, KusuokaSup, ScenarioSup
from uirisk.schemas import GalleryEntry, RatioPoint

logger = get_logger(__name__)

ENTROPIC_SCALES = (1.0, 0.1, 0.01)

# Cell mass of each half of the capacity example
CAPACITY_CELL_MASS = 2.0 / 3.0


def entropic_entry(beta: float = 1.0) -> GalleryEntry:
    """X_lambda = +-lambda equiprobable; the ratio grows like 2 / (beta lambda)."""
    rho = Entropic(beta)
    reports = [folding_ratio(rho, DiscreteDistribution([-scale, scale])) for scale in ENTROPIC_SCALES]
    sequence = [RatioPoint(scale=s, ratio=r.ratio) for s, r in zip(ENTROPIC_SCALES, reports)]
    return GalleryEntry(
        label="entropic",
        measure=rho.to_spec(),
        report=reports[-1],
        sequence=sequence,
        note="ratio diverges as lambda -> 0",
    )


def scenario_entry() -> GalleryEntry:
    """Two scenarios on three cells under which X and -X both have zero risk."""
    rho = ScenarioSup([[0.25, 0.5, 0.25], [0.5, 0.0, 0.5]])
    return GalleryEntry(
        label="scenario_sup",
        measure=rho.to_spec(),
        report=folding_ratio(rho, np.array([1.0, 0.0, -1.0])),
        note="rho(X) = rho(-X) = 0 < rho(|X|)",
    )


def capacity_entry() -> GalleryEntry:
    """nu(A) = sum over the two halves of min(mu(A & half), 1/2), X = 1 on one half and -1 on the other."""
    rho = Capacity.from_function(2, lambda cells: len(cells) * min(CAPACITY_CELL_MASS, 0.5))
    return GalleryEntry(
        label="capacity",
        measure=rho.to_spec(),
        report=folding_ratio(rho, np.array([1.0, -1.0])),
        note="submodular capacity, rho(X) = rho(-X) = 0",
    )


def kusuoka_entry(seed: int | None = None, iterations: int = 20_000) -> GalleryEntry:
    """Search over a supremum of distortions; the ratio is reported without a conclusion."""
    rho = KusuokaSup([ESClip(0.5), Power(0.5), IES()])
    config = SearchConfig(iterations=iterations) if seed is None else SearchConfig(iterations=iterations, seed=seed)
    return GalleryEntry(
        label="kusuoka_sup",
        measure=rho.to_spec(),
        report=empirical_folding_score(rho, config),
        note="stress search only, no conclusion drawn",
    )


def counterexample_gallery(seed: int | None = None) -> list[GalleryEntry]:
    entries = [entropic_entry(), scenario_entry(), capacity_entry(), kusuoka_entry(seed)]
    for entry in entries:
        logger.info("Gallery %s: ratio %s", entry.label, entry.report.ratio)
    return entries
