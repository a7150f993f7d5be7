"""
Multi-start projected gradient ascent for the quantile-vector problem.

The feasible set is the intersection of the monotone cone with two
half-spaces (risk and price), so projection is done by Dykstra's
alternating scheme with the isotonic projection last. A closed-form
segment repair from the current feasible iterate then restores exact
feasibility of the half-space constraints.
"""

from __future__ import annotations

import numpy as np
from sklearn.isotonic import isotonic_regression

from uirisk.config import settings
from uirisk.core.distribution import DiscreteDistribution
from uirisk.core.rng import stream
from uirisk.exceptions import InfeasibleProblemError, ParameterRangeError
from uirisk.invest.problem import InvestProblem, constraints
from uirisk.logging_config import get_logger
from uirisk.parallel import parallel_map
from uirisk.schemas import QuantileDecision

logger = get_logger(__name__)

DYKSTRA_ITERATIONS = 200
DYKSTRA_TOL = 1e-10
ARMIJO_SIGMA = 1e-4
MAX_BACKTRACKS = 40
START_NOISE = 0.1


class _Objective:
    """Separable objective (1/n) sum_i phi(x_i) with phi(s) = E[u(-s, Y)]."""

    def __init__(self, prob: InvestProblem, Y: DiscreteDistribution):
        self.u = prob.u
        self.atoms = Y.atoms
        self.weights = Y.weights
        self.n = prob.n

    def phi(self, s: np.ndarray) -> np.ndarray:
        return self.u(-s[:, None], self.atoms[None, :]) @ self.weights

    def value(self, x: np.ndarray) -> float:
        return float(np.mean(self.phi(x)))

    def gradient(self, x: np.ndarray, step: float) -> np.ndarray:
        return (self.phi(x + step) - self.phi(x - step)) / (2.0 * step * self.n)


class _FeasibleSet:
    """Monotone cone intersected with {a_r . x <= r0} and {a_p . x <= x0}."""

    def __init__(self, prob: InvestProblem):
        self.halfspaces = [
            (prob.risk_weights[::-1].copy(), prob.r0),
            (-prob.price_weights, prob.x0),
        ]
        self.tol = settings.invest.feasibility_tol

    def violation(self, x: np.ndarray) -> float:
        return max(float(a @ x - b) for a, b in self.halfspaces)

    @staticmethod
    def _halfspace(z: np.ndarray, a: np.ndarray, b: float) -> np.ndarray:
        excess = float(a @ z) - b
        if excess <= 0.0:
            return z
        return z - (excess / float(a @ a)) * a

    def project(self, z: np.ndarray) -> np.ndarray:
        """Dykstra projection; the final step is isotonic so the output is monotone."""
        x = z.copy()
        corrections = [np.zeros_like(z) for _ in range(len(self.halfspaces) + 1)]
        for _ in range(DYKSTRA_ITERATIONS):
            start = x
            for k, (a, b) in enumerate(self.halfspaces):
                y = self._halfspace(x + corrections[k], a, b)
                corrections[k] = x + corrections[k] - y
                x = y
            y = isotonic_regression(x + corrections[-1], increasing=True)
            corrections[-1] = x + corrections[-1] - y
            x = y
            if np.max(np.abs(x - start)) <= DYKSTRA_TOL:
                break
        return x

    def repair(self, base: np.ndarray, target: np.ndarray) -> np.ndarray:
        """Furthest point of the segment base -> target inside both half-spaces."""
        direction = target - base
        theta = 1.0
        for a, b in self.halfspaces:
            rate = float(a @ direction)
            if rate > 0.0:
                theta = min(theta, max(0.0, (b - float(a @ base)) / rate))
        return base + theta * direction


def _start(prob: InvestProblem, feasible: _FeasibleSet, level: float, seed: int, index: int) -> np.ndarray:
    """Constant `level` perturbed by sorted noise, repaired toward the constant."""
    constant = np.full(prob.n, level)
    if index == 0:
        return constant
    scale = START_NOISE * (1.0 + abs(prob.r0) + abs(prob.x0))
    noisy = constant + np.sort(stream(seed, "invest.solve", index).normal(0.0, scale, prob.n))
    return feasible.repair(constant, noisy)


def _ascend(x: np.ndarray, f: _Objective, feasible: _FeasibleSet) -> tuple[np.ndarray, float, int]:
    cfg = settings.invest
    value = f.value(x)
    iterations = 0
    for iterations in range(1, cfg.max_iter + 1):
        g = f.gradient(x, cfg.fd_step)
        step = float(f.n)
        accepted = False
        for _ in range(MAX_BACKTRACKS):
            candidate = feasible.repair(x, feasible.project(x + step * g))
            candidate_value = f.value(candidate)
            if candidate_value >= value + ARMIJO_SIGMA * float(g @ (candidate - x)):
                accepted = True
                break
            step *= 0.5
        if not accepted or candidate_value - value <= 1e-14 * max(1.0, abs(value)):
            if accepted and candidate_value > value:
                x, value = candidate, candidate_value
            break
        x, value = candidate, candidate_value
    return x, value, iterations


def solve_eps(
    prob: InvestProblem,
    Y: DiscreteDistribution | None = None,
    eps: float = 1e-3,
    seed: int | None = None,
    starts: int | None = None,
) -> QuantileDecision:
    """
    An eps-optimizer of the problem against background law Y.

    Starts sit at constants spread over [-x0, r0]. The reported gap is the
    spread of the start objectives plus the gap floor; the decision is
    certified when the gap does not exceed eps.
    """
    if eps < 0.0:
        raise ParameterRangeError("eps", eps, "[0, inf)")
    if not prob.is_feasible:
        raise InfeasibleProblemError(prob.r0, prob.x0)
    Y = prob.Y if Y is None else Y
    seed = settings.runtime.seed if seed is None else seed
    starts = settings.invest.starts if starts is None else starts
    if starts < 1:
        raise ParameterRangeError("starts", starts, "positive integers")

    f = _Objective(prob, Y)
    feasible = _FeasibleSet(prob)
    levels = np.linspace(-prob.x0, prob.r0, starts)

    def run(index: int) -> tuple[np.ndarray, float, int]:
        return _ascend(_start(prob, feasible, float(levels[index]), seed, index), f, feasible)

    results = parallel_map(run, range(starts))
    values = [value for _, value, _ in results]
    best = int(np.argmax(values))
    x, value, iterations = results[best]
    x = np.maximum.accumulate(x)
    value = f.value(x)

    risk, price = constraints(prob, x)
    logger.debug("Worst constraint slack %.3g", -feasible.violation(x))
    gap = float(max(values) - min(values)) + settings.invest.gap_floor
    decision = QuantileDecision(
        x=x.tolist(),
        objective=value,
        risk=risk,
        price=price,
        feasible_risk=risk <= prob.r0 + settings.invest.feasibility_tol,
        feasible_price=price <= prob.x0 + settings.invest.feasibility_tol,
        gap=gap,
        certified=gap <= eps,
        start_objectives=values,
    )
    if not decision.certified:
        logger.warning("Solver gap %.3g exceeds eps %.3g", gap, eps)
    logger.info(
        "Solved n=%d against %d atoms: objective %.6g (start %d, %d iterations), gap %.3g",
        prob.n, Y.size, value, best, iterations, gap,
    )
    return decision
