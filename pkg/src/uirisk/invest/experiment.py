"""
Stability of eps-optimizers under convergent background laws.

Step k solves against Y_k (empirical samples of Y of size base * 2^(k-1)
unless supplied) with eps_k = 1/k. The solutions are clustered in w1; the
candidate X* is the center of the largest cluster. Each step is checked
against the Lipschitz chain

    E[u(-X*, Y)] >= E[u(-X_k, Y_k)] - eps_k - 3 c delta_k,
    delta_k = max(w1(X_k, X*), w1(Y_k, Y)).
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from uirisk.config import settings
from uirisk.convergence.subsequence import w1_clusters
from uirisk.convergence.wasserstein import w1
from uirisk.core.distribution import DiscreteDistribution, from_samples
from uirisk.core.rng import stream
from uirisk.exceptions import ParameterRangeError
from uirisk.invest.problem import InvestProblem, objective
from uirisk.invest.solver import solve_eps
from uirisk.logging_config import get_logger
from uirisk.schemas import Prop61Report, Prop61Step, QuantileDecision

logger = get_logger(__name__)

BASE_SAMPLE_SIZE = 100
DEFAULT_STEPS = 5
CLUSTER_TOLERANCE = 1e-2


def _decision_law(decision: QuantileDecision) -> DiscreteDistribution:
    return DiscreteDistribution.uniform(decision.x)


def sample_schedule(
    Y: DiscreteDistribution, steps: int, seed: int, base: int = BASE_SAMPLE_SIZE
) -> list[DiscreteDistribution]:
    """Empirical laws of base * 2^(k-1) draws from Y, k = 1..steps."""
    laws = []
    for k in range(1, steps + 1):
        draws = stream(seed, "invest.prop61", k).choice(Y.atoms, size=base * 2 ** (k - 1), p=Y.weights)
        laws.append(from_samples(draws))
    return laws


def best_known_value(prob: InvestProblem, Y: DiscreteDistribution, seed: int) -> float:
    """Best of the solver value and, for concave v, the optimal constant position."""
    best = solve_eps(prob, Y, eps=0.0, seed=seed).objective
    constant = prob.jensen_constant()
    if constant is not None:
        best = max(best, objective(prob, np.full(prob.n, constant), Y))
    return best


def prop61_experiment(
    prob: InvestProblem,
    Y: DiscreteDistribution | None = None,
    Y_schedule: Sequence[DiscreteDistribution] | None = None,
    eps_schedule: Sequence[float] | None = None,
    seed: int | None = None,
    steps: int = DEFAULT_STEPS,
    tolerance: float = CLUSTER_TOLERANCE,
) -> Prop61Report:
    Y = prob.Y if Y is None else Y
    seed = settings.runtime.seed if seed is None else seed
    if Y_schedule is None:
        Y_schedule = sample_schedule(Y, steps, seed)
    steps = len(Y_schedule)
    if steps < 1:
        raise ParameterRangeError("steps", steps, "positive integers")
    eps_schedule = [1.0 / k for k in range(1, steps + 1)] if eps_schedule is None else list(eps_schedule)
    if len(eps_schedule) != steps or any(e < 0.0 for e in eps_schedule):
        raise ParameterRangeError("eps_schedule", eps_schedule, f"{steps} non-negative tolerances")

    decisions = [solve_eps(prob, Y_k, eps_k, seed) for Y_k, eps_k in zip(Y_schedule, eps_schedule)]
    laws = {k: _decision_law(d) for k, d in enumerate(decisions, start=1)}
    gaps = [w1(laws[k], laws[k + 1]) for k in range(1, steps)]

    clusters = w1_clusters(list(laws), laws, tolerance)
    candidates = [center for center, _ in clusters]
    candidate, _ = max(clusters, key=lambda c: (len(c[1]), max(c[1])))
    X_star = decisions[candidate - 1]
    candidate_objective = objective(prob, X_star.x, Y)
    c = prob.lipschitz

    rows = []
    for k, (decision, Y_k, eps_k) in enumerate(zip(decisions, Y_schedule, eps_schedule), start=1):
        w1_x = w1(laws[k], laws[candidate])
        w1_y = w1(Y_k, Y)
        delta = max(w1_x, w1_y)
        lower = decision.objective - eps_k - 3.0 * c * delta
        rows.append(
            Prop61Step(
                step=k,
                support_size=Y_k.size,
                eps=eps_k,
                w1_y=w1_y,
                w1_x=w1_x,
                delta=delta,
                objective_sample=decision.objective,
                lower_bound=lower,
                holds=candidate_objective >= lower - settings.invest.feasibility_tol,
            )
        )

    best = best_known_value(prob, Y, seed)
    slack = eps_schedule[-1] + 3.0 * c * rows[-1].delta + tolerance
    optimal = candidate_objective >= best - slack
    violation = max(0.0, max(r.lower_bound - candidate_objective for r in rows))
    feasible = all(d.feasible_risk and d.feasible_price for d in decisions)
    if not optimal:
        logger.warning("Cluster candidate %.6g falls short of best known %.6g", candidate_objective, best)
    logger.info(
        "Stability experiment: %d steps, %d clusters, candidate step %d, objective %.6g vs best %.6g",
        steps, len(clusters), candidate, candidate_objective, best,
    )
    return Prop61Report(
        lipschitz=c,
        steps=rows,
        gaps=gaps,
        candidates=candidates,
        candidate=candidate,
        candidate_objective=candidate_objective,
        best_known=best,
        tolerance=tolerance,
        optimal_within_tolerance=optimal,
        max_violation=violation,
        all_feasible=feasible,
    )
