"""
Growth monitor for running suprema over a finite horizon.

The running supremum of a per-member quantity is sampled at the doubling
checkpoints 1, 2, 4, ... and at the horizon. Its tail decides between a
settled envelope, a divergent one and no verdict.
"""

from __future__ import annotations

from typing import Callable

import numpy as np

from uirisk.config import settings
from uirisk.core.distribution import DiscreteDistribution
from uirisk.core.family import DistributionFamily
from uirisk.logging_config import get_logger
from uirisk.parallel import parallel_map
from uirisk.schemas import GrowthReport

logger = get_logger(__name__)

MEMBER_CHUNK = 512


def member_values(family: DistributionFamily, fn: Callable[[DiscreteDistribution], float]) -> np.ndarray:
    """fn(X_n) for n = 1..N, evaluated in chunks of members."""
    bounds = [(lo, min(lo + MEMBER_CHUNK, family.horizon + 1)) for lo in range(1, family.horizon + 1, MEMBER_CHUNK)]

    def run(span: tuple[int, int]) -> list[float]:
        return [fn(family.member(n)) for n in range(*span)]

    return np.concatenate([np.asarray(part, dtype=float) for part in parallel_map(run, bounds)])


def checkpoints(horizon: int) -> list[int]:
    points = [2**j for j in range(horizon.bit_length()) if 2**j <= horizon]
    if points[-1] != horizon:
        points.append(horizon)
    return points


class GrowthMonitor:
    """Boundedness verdicts for the running supremum of a sequence."""

    def __init__(
        self,
        label: str,
        threshold: float | None = None,
        growth_ratio: float | None = None,
        settle_tol: float | None = None,
    ):
        self.label = label
        self.threshold = settings.ui.divergence_threshold if threshold is None else threshold
        self.growth_ratio = settings.ui.growth_ratio if growth_ratio is None else growth_ratio
        self.settle_tol = settings.ui.settle_tol if settle_tol is None else settle_tol

    def observe(self, values: np.ndarray, exhaustive: bool = False) -> GrowthReport:
        """
        Verdict on values[0..N-1], the per-member quantity for n = 1..N.

        exhaustive marks an explicit finite family evaluated in full, whose
        supremum is finite by construction.
        """
        values = np.asarray(values, dtype=float)
        running = np.maximum.accumulate(values)
        points = checkpoints(values.size)
        envelope = [float(running[n - 1]) for n in points]
        return self.judge(points, envelope, exhaustive)

    def judge(self, points: list[int], envelope: list[float], exhaustive: bool = False) -> GrowthReport:
        """Verdict on a running supremum already sampled at the given checkpoints."""
        doubling = [e for n, e in zip(points, envelope) if n & (n - 1) == 0]
        verdict, reason = self._decide(doubling, envelope[-1], exhaustive)
        if verdict == "inconclusive":
            logger.warning("Growth monitor %s inconclusive: %s", self.label, reason)
        else:
            logger.debug("Growth monitor %s: %s (%s)", self.label, verdict, reason)
        return GrowthReport(label=self.label, checkpoints=points, envelope=envelope, verdict=verdict, reason=reason)

    def _decide(self, doubling: list[float], top: float, exhaustive: bool) -> tuple[str, str]:
        """Growth and settling are judged on the doubling checkpoints only."""
        if top > self.threshold:
            return "not-UI", f"envelope {top:g} exceeds {self.threshold:g}"
        if exhaustive:
            return "UI", "explicit family evaluated in full"
        increments = np.diff(doubling)
        if increments.size == 0:
            return "inconclusive", "horizon too short"
        scale = self.settle_tol * (1.0 + abs(top))
        if increments.size >= 3:
            d1, d2, d3 = increments[-3:]
            if min(d1, d2, d3) > scale and d2 >= self.growth_ratio * d1 and d3 >= self.growth_ratio * d2:
                return "not-UI", "envelope keeps growing across doublings"
        if increments[-1] <= scale:
            return "UI", "envelope settled"
        return "inconclusive", "envelope still moving at the horizon"
