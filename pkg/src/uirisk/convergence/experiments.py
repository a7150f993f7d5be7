"""
Convergence experiments.

- Weak LLN: sample means of iid mean-zero draws under bounded risk
  envelopes, measured by exceedance frequencies over replications.
- ES convergence along a sequence F_n -> F at fixed levels.
- Consistency of w1 convergence with mean convergence and the UI verdict.
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from uirisk.config import settings
from uirisk.convergence.generators import IIDGenerator, normal_quadrature
from uirisk.convergence.wasserstein import w1
from uirisk.core.distribution import DiscreteDistribution, affine, from_samples, mean, negate
from uirisk.core.family import DistributionFamily
from uirisk.core.rng import stream
from uirisk.exceptions import ParameterRangeError
from uirisk.logging_config import get_logger
from uirisk.measures.choquet import choquet, es
from uirisk.measures.distortion import IES, DistortionFunction
from uirisk.parallel import parallel_map
from uirisk.schemas import (
    ConsistencyReport,
    ESConvergenceReport,
    ESConvergenceRow,
    LLNReport,
    LLNRow,
    TrendSummary,
)
from uirisk.ui.envelope import require_Dc, tail_envelope
from uirisk.ui.monitor import GrowthMonitor, checkpoints

logger = get_logger(__name__)

LIMIT_QUADRATURE_POINTS = 200


def dyadic_schedule(n_max: int) -> list[int]:
    """1, 2, 4, ... up to n_max, with n_max appended."""
    if n_max < 1:
        raise ParameterRangeError("n_max", n_max, "positive integers")
    return checkpoints(n_max)


def _two_sided_envelope(h: DistortionFunction, h_prime: DistortionFunction, X: DiscreteDistribution) -> tuple[float, float]:
    return choquet(h, X), choquet(h_prime, negate(X))


# ─── Weak law of large numbers ─────────────────────────────────


def lln_experiment(
    generator: IIDGenerator,
    n_max: int,
    replications: int | None = None,
    seed: int | None = None,
    h: DistortionFunction | None = None,
    h_prime: DistortionFunction | None = None,
) -> LLNReport:
    """
    Exceedance frequencies of |Y_n| > delta, Y_n the sample mean of n draws.

    Replication r draws from the stream (seed + r, "convergence.lln").
    The risk envelopes use the empirical law of the first n draws of
    replication 0.
    """
    replications = settings.convergence.replications if replications is None else replications
    seed = settings.runtime.seed if seed is None else seed
    h = h or IES()
    h_prime = h_prime or IES()
    require_Dc(h)
    require_Dc(h_prime)
    if replications < 1:
        raise ParameterRangeError("replications", replications, "positive integers")

    schedule = dyadic_schedule(n_max)
    at = np.asarray(schedule) - 1
    deltas = settings.convergence.exceedance_levels

    def replicate(rep: int) -> np.ndarray:
        draws = generator.sample(stream(seed + rep, "convergence.lln"), n_max)
        return np.cumsum(draws)[at] / np.asarray(schedule)

    means = np.vstack(parallel_map(replicate, range(replications)))

    draws0 = generator.sample(stream(seed, "convergence.lln"), n_max)
    rho_values, rhoprime_values = zip(*(_two_sided_envelope(h, h_prime, from_samples(draws0[:n])) for n in schedule))
    rho_env = np.maximum.accumulate(rho_values)
    rhoprime_env = np.maximum.accumulate(rhoprime_values)

    rows = []
    for j, n in enumerate(schedule):
        exceedance = {f"{d:g}": float(np.mean(np.abs(means[:, j]) > d)) for d in deltas}
        rows.append(LLNRow(n=n, exceedance=exceedance, rho_env=float(rho_env[j]), rhoprime_env=float(rhoprime_env[j])))

    combined = np.maximum(rho_env, rhoprime_env)
    violated = bool(combined[-1] > settings.ui.divergence_threshold)
    growth = GrowthMonitor(f"lln:{generator.name}").judge(schedule, combined.tolist())
    if violated:
        logger.warning("LLN hypothesis violated for %s: envelope %g", generator.name, combined[-1])
    logger.info("LLN experiment %s: %d replications, n_max=%d, envelope %s", generator.name, replications, n_max, growth.verdict)
    return LLNReport(
        generator=generator.name,
        replications=replications,
        seed=seed,
        rows=rows,
        hypothesis_violated=violated,
        envelope_verdict=growth.verdict,
    )


# ─── ES convergence ────────────────────────────────────────────


def _trend(p: float, ns: Sequence[int], errors: Sequence[float]) -> TrendSummary:
    err = np.asarray(errors, dtype=float)
    steps = np.diff(err)
    monotone = float(np.mean(steps <= 1e-12)) if steps.size else 1.0
    positive = err > 0.0
    slope = None
    if np.count_nonzero(positive) >= 2:
        slope = float(np.polyfit(np.log(np.asarray(ns, dtype=float)[positive]), np.log(err[positive]), 1)[0])
    return TrendSummary(p=p, monotone_fraction=monotone, loglog_slope=slope)


def es_convergence_experiment(
    family: DistributionFamily, limit: DiscreteDistribution, p_list: Sequence[float]
) -> ESConvergenceReport:
    """|ES_p(F_n) - ES_p(F)| on the dyadic indices of the family."""
    indices = checkpoints(family.horizon)
    members = {n: family.member(n) for n in indices}
    rows = []
    for p in p_list:
        target = es(limit, p)
        for n in indices:
            value = es(members[n], p)
            rows.append(ESConvergenceRow(n=n, p=p, es_n=value, es_limit=target, error=abs(value - target)))

    trend = [_trend(p, indices, [r.error for r in rows if r.p == p]) for p in p_list]

    h = IES()
    envelope = np.maximum.accumulate([max(_two_sided_envelope(h, h, members[n])) for n in indices])
    growth = GrowthMonitor(f"es:{family.label}").judge(indices, envelope.tolist(), not family.is_generated)
    if growth.verdict == "not-UI":
        logger.warning("ES convergence hypothesis fails on %s", family.label)
    return ESConvergenceReport(sequence=family.label, rows=rows, trend=trend, hypothesis_ok=growth.verdict != "not-UI")


def builtin_sequence(name: str, horizon: int, seed: int | None = None) -> tuple[DistributionFamily, DiscreteDistribution]:
    """
    shift:     F_n = F + 1/n
    empirical: F_n = empirical law of the first n draws from F
    constant:  F_n = F
    with F the normal quadrature law on 200 points.
    """
    limit = normal_quadrature(LIMIT_QUADRATURE_POINTS)
    if name == "shift":
        return DistributionFamily("shift", generator=lambda n: affine(limit, shift=1.0 / n), horizon=horizon), limit
    if name == "empirical":
        seed = settings.runtime.seed if seed is None else seed
        draws = stream(seed, "convergence.empirical").choice(limit.atoms, size=horizon, p=limit.weights)
        return DistributionFamily("empirical", generator=lambda n: from_samples(draws[:n]), horizon=horizon), limit
    if name == "constant":
        return DistributionFamily("constant", generator=lambda n: limit, horizon=horizon), limit
    raise ParameterRangeError("sequence", name, "shift, empirical or constant")


# ─── w1 consistency ────────────────────────────────────────────


def w1_consistency_check(family: DistributionFamily, limit: DiscreteDistribution) -> ConsistencyReport:
    """
    If w1(F_n, F) -> 0 on the dyadic indices, means must converge and the
    family must not be declared not-UI.
    """
    indices = checkpoints(family.horizon)
    distances = [w1(family.member(n), limit) for n in indices]
    target = mean(limit)
    gaps = [abs(mean(family.member(n)) - target) for n in indices]
    verdict = tail_envelope(family).verdict

    converging = distances[-1] <= settings.ui.decay_factor * (1.0 + distances[0])
    dominated = all(g <= d + 1e-12 * max(1.0, abs(target)) for g, d in zip(gaps, distances))
    holds = (not converging) or (dominated and verdict != "not-UI")
    logger.info("w1 consistency on %s: converging=%s, verdict=%s, holds=%s", family.label, converging, verdict, holds)
    return ConsistencyReport(
        family=family.label, indices=indices, w1=distances, mean_gaps=gaps, ui_verdict=verdict, holds=holds
    )


def monotone_within_noise(values: Sequence[float], replications: int) -> bool:
    """Non-increasing up to the Monte Carlo allowance 3 / sqrt(R)."""
    slack = 3.0 / math.sqrt(replications)
    return all(b <= a + slack for a, b in zip(values, values[1:]))
