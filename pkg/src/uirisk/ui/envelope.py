"""
Uniform-integrability diagnostics on distribution families.

A family S is UI iff sup over S of (1 - p) ES_p(|X|) tends to 0 as p -> 1,
iff some concave h with infinite slope at zero keeps rho_h(|X|) bounded on
S. Both sides are evaluated up to the family horizon and reduced to a
verdict by fixed thresholds.
"""

from __future__ import annotations

import math
from typing import Callable

import numpy as np

from uirisk.config import settings
from uirisk.core.distribution import fold, negate
from uirisk.core.family import DistributionFamily
from uirisk.exceptions import ExpectationDominatedError, ParameterRangeError, UIPremiseError
from uirisk.logging_config import get_logger
from uirisk.measures.choquet import choquet
from uirisk.measures.distortion import DistortionFunction, PointwiseMin, slope_limit
from uirisk.schemas import DistortionVerdict, GrowthReport, UIReport
from uirisk.ui.dvp import dvp_distortion, family_tail_sups
from uirisk.ui.monitor import GrowthMonitor, member_values

logger = get_logger(__name__)

# Folding constant of ES_p for p >= 1/2
ES_FOLDING_BOUND = 3.0
MIN_RESOLVED = 3


def dyadic_grid(levels: int | None = None) -> np.ndarray:
    """p_k = 1 - 2^-k for k = 1..levels."""
    levels = settings.ui.grid_levels if levels is None else levels
    if levels < 1:
        raise ParameterRangeError("levels", levels, "positive integers")
    return 1.0 - np.exp2(-np.arange(1, levels + 1, dtype=float))


def parse_grid(text: str) -> np.ndarray:
    """'dyadic:K' or a comma-separated list of levels."""
    text = text.strip()
    if text.startswith("dyadic"):
        _, _, count = text.partition(":")
        try:
            return dyadic_grid(int(count) if count else None)
        except ValueError as e:
            raise ParameterRangeError("grid", text, "dyadic:<positive integer>") from e
    try:
        grid = np.array([float(v) for v in text.split(",") if v.strip()])
    except ValueError as e:
        raise ParameterRangeError("grid", text, "comma-separated levels in (0, 1)") from e
    _check_grid(grid)
    return grid


def _check_grid(grid: np.ndarray) -> None:
    if grid.size == 0 or np.any(grid <= 0.0) or np.any(grid >= 1.0) or np.any(np.diff(grid) <= 0.0):
        raise ParameterRangeError("grid", grid.tolist(), "strictly increasing levels in (0, 1)")


def _consistent(levels: np.ndarray, env_abs: np.ndarray, env_pos: np.ndarray, env_neg: np.ndarray) -> bool:
    """max(pos, neg) <= abs <= 3 max(pos, neg) on levels p >= 1/2."""
    upper = levels >= 0.5
    side = np.maximum(env_pos, env_neg)[upper]
    folded = env_abs[upper]
    slack = 1e-9 * np.maximum(1.0, np.abs(folded))
    return bool(np.all(side <= folded + slack) and np.all(folded <= ES_FOLDING_BOUND * side + slack))


def resolved_levels(family: DistributionFamily, levels: np.ndarray) -> int:
    """
    Number of leading grid levels the family can resolve.

    A generated family stops at its horizon N, so tail masses below 1/N only
    see the truncation and are left out of the verdict. Explicit families are
    complete and resolve every level, and so does a horizon too short to
    resolve MIN_RESOLVED levels.
    """
    if not family.is_generated:
        return int(levels.size)
    floor = (1.0 / family.horizon) * (1.0 - 1e-12)
    count = int(np.count_nonzero(1.0 - levels >= floor))
    return count if count >= MIN_RESOLVED else int(levels.size)


def tail_envelope(family: DistributionFamily, p_grid: np.ndarray | None = None, construct: bool = True) -> UIReport:
    """Tail envelopes of |X|, X and -X over the grid, with a verdict on the resolved levels."""
    levels = dyadic_grid() if p_grid is None else np.asarray(p_grid, dtype=float)
    _check_grid(levels)
    env_abs, env_pos, env_neg = family_tail_sups(family, 1.0 - levels)
    consistent = _consistent(levels, env_abs, env_pos, env_neg)
    if not consistent:
        logger.warning("Envelope sandwich fails on %s", family.label)

    resolved = resolved_levels(family, levels)
    report = UIReport(
        family=family.label,
        horizon=family.horizon,
        levels=levels.tolist(),
        env_abs=env_abs.tolist(),
        env_pos=env_pos.tolist(),
        env_neg=env_neg.tolist(),
        verdict="inconclusive",
        consistent=consistent,
        resolved=resolved,
    )
    if resolved < levels.size:
        logger.debug("%s resolves %d of %d levels at horizon %d", family.label, resolved, levels.size, family.horizon)

    seen = env_abs[:resolved]
    coarsest, finest = float(seen[0]), float(seen[-1])
    if coarsest > 0.0 and float(np.min(seen)) >= settings.ui.not_ui_floor * coarsest:
        report.verdict = "not-UI"
        report.reason = "envelope bounded away from zero across the resolved levels"
    elif np.all(np.diff(seen[-3:]) <= 0.0) and finest < settings.ui.decay_factor * (coarsest + 1.0):
        if not construct:
            report.verdict = "UI"
            report.reason = "envelope decays at the finest levels"
        else:
            try:
                _, report.construction = dvp_distortion(family)
                report.verdict = "UI"
                report.reason = "envelope decays and the distortion construction succeeds"
            except UIPremiseError as e:
                report.reason = e.message
    else:
        report.reason = "envelope neither settles nor stays away from zero"

    logger.info("UI check on %s: %s (%s)", family.label, report.verdict, report.reason)
    return report


def tail_expectation_envelope(family: DistributionFamily, K_grid: np.ndarray) -> np.ndarray:
    """sup over the family of E[|X| 1{|X| > K}] for each K."""
    K = np.asarray(K_grid, dtype=float)

    def tail_expectations(X) -> np.ndarray:
        Y = fold(X)
        mask = Y.atoms[None, :] > K[:, None]
        return np.sum(np.where(mask, Y.atoms * Y.weights, 0.0), axis=1)

    best = np.zeros_like(K)
    for X in family:
        best = np.maximum(best, tail_expectations(X))
    return best


# ─── Distortion and moment criteria ────────────────────────────


def require_Dc(h: DistortionFunction) -> None:
    slope = slope_limit(h)
    if slope.is_finite:
        raise ExpectationDominatedError(slope.value)


def _combine(reports: list[GrowthReport]) -> str:
    verdicts = {r.verdict for r in reports}
    if "not-UI" in verdicts:
        return "not-UI"
    return "UI" if verdicts == {"UI"} else "inconclusive"


def ui_from_distortion(
    family: DistributionFamily, g: DistortionFunction, f: DistortionFunction | None = None
) -> DistortionVerdict:
    """
    Boundedness of rho_g(|X|) over the family, or with a second distortion f
    boundedness of rho_g(X) and rho_f(-X) together with rho_{min(g, f)}(|X|).
    """
    require_Dc(g)
    monitor_exhaustive = not family.is_generated
    if f is None:
        reports = [GrowthMonitor(f"rho_{g.kind}(|X|)").observe(
            member_values(family, lambda X: choquet(g, fold(X))), monitor_exhaustive
        )]
        distortions = [g.to_spec().model_dump()]
    else:
        require_Dc(f)
        lower = PointwiseMin(g, f)
        reports = [
            GrowthMonitor(f"rho_{g.kind}(X)").observe(member_values(family, lambda X: choquet(g, X)), monitor_exhaustive),
            GrowthMonitor(f"rho_{f.kind}(-X)").observe(
                member_values(family, lambda X: choquet(f, negate(X))), monitor_exhaustive
            ),
            GrowthMonitor("rho_min(|X|)").observe(
                member_values(family, lambda X: choquet(lower, fold(X))), monitor_exhaustive
            ),
        ]
        distortions = [g.to_spec().model_dump(), f.to_spec().model_dump()]

    verdict = _combine(reports)
    logger.info("Distortion criterion on %s: %s", family.label, verdict)
    return DistortionVerdict(family=family.label, verdict=verdict, envelopes=reports, distortions=distortions)


def phi_envelope(family: DistributionFamily, phi: Callable[[np.ndarray], np.ndarray], label: str = "phi") -> GrowthReport:
    """Running supremum of E[phi(|X|)] over the family."""

    def expected_phi(X) -> float:
        return math.fsum(X.weights * np.asarray(phi(np.abs(X.atoms)), dtype=float))

    return GrowthMonitor(f"E[{label}(|X|)]").observe(member_values(family, expected_phi), not family.is_generated)


def dvp_phi_check(family: DistributionFamily, phi: Callable[[np.ndarray], np.ndarray], label: str = "phi") -> bool:
    """True when sup E[phi(|X|)] stays bounded over the horizon."""
    report = phi_envelope(family, phi, label)
    return report.verdict == "UI"
