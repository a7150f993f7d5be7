"""
Risk measures.

RiskMeasure is a tagged union of five kinds:

    Distortion(h)       rho_h, law invariant
    Entropic(beta)      (1/beta) log E[exp(beta X)], law invariant
    KusuokaSup(hs)      max_k rho_{h_k}, law invariant
    ScenarioSup(Q)      max_j E^{Q_j}[X] on a fixed finite space
    Capacity(nu)        Choquet integral against a capacity on a fixed finite space

Law-invariant kinds take DiscreteDistributions. The two space-based kinds
take position vectors on their finite space.
"""

from __future__ import annotations

import math
from abc import ABC, abstractmethod
from typing import Any, Callable, ClassVar, Sequence, Union

import numpy as np
from scipy.special import logsumexp

from uirisk.config import settings
from uirisk.core.distribution import DiscreteDistribution, fold, mean, negate
from uirisk.core.extended import ExtendedReal
from uirisk.core.rng import stream
from uirisk.exceptions import (
    DimensionMismatchError,
    InvalidCapacityError,
    InvalidScenarioError,
    MeasureError,
    NonConcaveDistortionError,
    ParameterRangeError,
)
from uirisk.logging_config import get_logger
from uirisk.measures import specs
from uirisk.measures.choquet import choquet, choquet_batch
from uirisk.measures.distortion import DistortionFunction, distortion_from_spec, slope_limit

logger = get_logger(__name__)

Position = Union[DiscreteDistribution, np.ndarray]

CAPACITY_CHECK_MAX_CELLS = 12


class RiskMeasure(ABC):
    """Common interface of all risk-measure kinds."""

    kind: ClassVar[str]
    law_invariant: ClassVar[bool] = True

    @abstractmethod
    def evaluate(self, X: Position) -> float:
        """Value of the measure on one position."""

    @abstractmethod
    def to_spec(self) -> dict[str, Any]:
        """JSON-ready spec."""

    def evaluate_batch(self, atoms: np.ndarray, weights: np.ndarray) -> np.ndarray:
        """Values on a batch of laws given row-wise; law-invariant kinds only."""
        return np.array([self.evaluate(DiscreteDistribution(a, w)) for a, w in zip(atoms, weights)])


class Distortion(RiskMeasure):
    kind = "distortion"

    def __init__(self, h: DistortionFunction):
        self.h = h

    def evaluate(self, X: Position) -> float:
        return choquet(self.h, _as_law(X))

    def evaluate_batch(self, atoms, weights):
        return choquet_batch(self.h, atoms, weights)

    def to_spec(self):
        return self.h.to_spec().model_dump()

    def __repr__(self) -> str:
        return f"Distortion({self.h!r})"


class Entropic(RiskMeasure):
    kind = "entropic"

    def __init__(self, beta: float):
        if not beta > 0:
            raise ParameterRangeError("beta", beta, "(0, inf)")
        self.beta = float(beta)

    def evaluate(self, X: Position) -> float:
        law = _as_law(X)
        return float(logsumexp(self.beta * law.atoms, b=law.weights)) / self.beta

    def evaluate_batch(self, atoms, weights):
        return logsumexp(self.beta * atoms, b=weights, axis=1) / self.beta

    def to_spec(self):
        return specs.EntropicSpec(beta=self.beta).model_dump()

    def __repr__(self) -> str:
        return f"Entropic(beta={self.beta:g})"


class KusuokaSup(RiskMeasure):
    """Maximum over a finite list of concave distortion measures."""

    kind = "kusuoka_sup"

    def __init__(self, hs: Sequence[DistortionFunction]):
        if not hs:
            raise MeasureError(message="kusuoka_sup needs at least one distortion")
        for h in hs:
            if not h.is_concave:
                raise NonConcaveDistortionError(h.kind)
        self.hs = list(hs)

    def evaluate(self, X: Position) -> float:
        law = _as_law(X)
        return max(choquet(h, law) for h in self.hs)

    def evaluate_batch(self, atoms, weights):
        return np.max(np.vstack([choquet_batch(h, atoms, weights) for h in self.hs]), axis=0)

    def to_spec(self):
        return specs.KusuokaSupSpec(members=[h.to_spec() for h in self.hs]).model_dump()

    def __repr__(self) -> str:
        return f"KusuokaSup({len(self.hs)} members)"


class ScenarioSup(RiskMeasure):
    """max over scenario expectations on a k-cell space."""

    kind = "scenario_sup"
    law_invariant = False

    def __init__(self, scenarios: Sequence[Sequence[float]]):
        Q = np.asarray(scenarios, dtype=float)
        if Q.ndim != 2 or Q.shape[0] == 0:
            raise InvalidScenarioError(message="scenarios must be a non-empty list of equal-length vectors")
        tol = settings.numerics.weight_tol
        for j, q in enumerate(Q):
            if np.any(q < 0) or abs(math.fsum(q) - 1.0) > tol:
                raise InvalidScenarioError(
                    message=f"scenario {j} is not a probability vector", details={"scenario": j}
                )
        self.scenarios = Q

    @property
    def dimension(self) -> int:
        return int(self.scenarios.shape[1])

    def evaluate(self, X: Position) -> float:
        x = _as_vector(X, self.dimension)
        return float(np.max(self.scenarios @ x))

    def evaluate_vectors(self, V: np.ndarray) -> np.ndarray:
        return np.max(V @ self.scenarios.T, axis=1)

    def to_spec(self):
        return specs.ScenarioSupSpec(scenarios=self.scenarios.tolist()).model_dump()

    def __repr__(self) -> str:
        return f"ScenarioSup({self.scenarios.shape[0]} scenarios on {self.dimension} cells)"


class Capacity(RiskMeasure):
    """
    Choquet integral against a normalized monotone submodular capacity.

    nu is stored by bitmask: values[mask] = nu({cells with bit set}).
    """

    kind = "capacity"
    law_invariant = False

    def __init__(self, values: Sequence[float]):
        nu = np.asarray(values, dtype=float)
        k = int(round(math.log2(nu.size))) if nu.size > 0 else 0
        if nu.size < 2 or 2**k != nu.size:
            raise InvalidCapacityError(message=f"capacity needs 2^k values, got {nu.size}")
        self.nu = nu
        self.cells = k
        self._validate()

    @classmethod
    def from_function(cls, cells: int, fn: Callable[[frozenset[int]], float]) -> Capacity:
        values = [fn(frozenset(i for i in range(cells) if mask >> i & 1)) for mask in range(2**cells)]
        return cls(values)

    def _validate(self) -> None:
        tol = settings.numerics.concavity_tol
        full = 2**self.cells - 1
        if abs(self.nu[0]) > tol or abs(self.nu[full] - 1.0) > tol:
            raise InvalidCapacityError(message="capacity needs nu(empty)=0 and nu(full)=1")
        if self.cells > CAPACITY_CHECK_MAX_CELLS:
            logger.warning("Capacity on %d cells: monotonicity/submodularity not checked", self.cells)
            return
        for mask in range(full + 1):
            for i in range(self.cells):
                bit = 1 << i
                if mask & bit:
                    continue
                gain_i = self.nu[mask | bit] - self.nu[mask]
                if gain_i < -tol:
                    raise InvalidCapacityError(message="capacity is not monotone", details={"mask": mask})
                for j in range(i + 1, self.cells):
                    other = 1 << j
                    if mask & other:
                        continue
                    if self.nu[mask | bit | other] - self.nu[mask | other] > gain_i + tol:
                        raise InvalidCapacityError(
                            message="capacity is not submodular", details={"mask": mask, "cells": [i, j]}
                        )

    def evaluate(self, X: Position) -> float:
        x = _as_vector(X, self.cells)
        order = np.argsort(-x, kind="stable")
        masks = np.cumsum(1 << order)
        nu_chain = self.nu[masks]
        increments = np.diff(np.concatenate(([0.0], nu_chain)))
        return math.fsum(x[order] * increments)

    def evaluate_vectors(self, V: np.ndarray) -> np.ndarray:
        return np.array([self.evaluate(v) for v in V])

    def to_spec(self):
        return specs.CapacitySpec(values=self.nu.tolist()).model_dump()

    def __repr__(self) -> str:
        return f"Capacity({self.cells} cells)"


# ─── Helpers ───────────────────────────────────────────────────


def _as_law(X: Position) -> DiscreteDistribution:
    if isinstance(X, DiscreteDistribution):
        return X
    return DiscreteDistribution.uniform(np.asarray(X, dtype=float))


def _as_vector(X: Position, dimension: int) -> np.ndarray:
    if isinstance(X, DiscreteDistribution):
        raise MeasureError(message="space-based measures take position vectors, not laws")
    x = np.asarray(X, dtype=float).ravel()
    if x.size != dimension:
        raise DimensionMismatchError(dimension, int(x.size))
    return x


# ─── Operations ────────────────────────────────────────────────


def evaluate(rho: RiskMeasure, X: Position) -> float:
    return rho.evaluate(X)


def negate_position(X: Position) -> Position:
    return negate(X) if isinstance(X, DiscreteDistribution) else -np.asarray(X, dtype=float)


def fold_position(X: Position) -> Position:
    return fold(X) if isinstance(X, DiscreteDistribution) else np.abs(np.asarray(X, dtype=float))


def certify_domination(h: DistortionFunction, c: float, seed: int | None = None, trials: int = 200) -> bool:
    """Check rho_h(X) <= c E[X] on Bernoulli laws and random nonnegative laws."""
    seed = settings.runtime.seed if seed is None else seed
    battery = [DiscreteDistribution.bernoulli(t) for t in np.geomspace(1e-12, 1.0, 60)]
    rng = stream(seed, "measures.certify_domination")
    for _ in range(trials):
        k = int(rng.integers(1, 7))
        atoms = rng.exponential(1.0, k) * np.exp(rng.normal(0.0, 2.0))
        battery.append(DiscreteDistribution(atoms, rng.dirichlet(np.ones(k))))
    for X in battery:
        if choquet(h, X) > c * mean(X) * (1.0 + 1e-9) + 1e-12:
            logger.debug("Domination by %g fails on %r", c, X)
            return False
    return True


def expectation_domination_constant(h: DistortionFunction) -> ExtendedReal:
    """The least c with rho_h <= c E on nonnegative losses, i.e. the slope limit."""
    c = slope_limit(h)
    if c.is_finite:
        certified = certify_domination(h, c.value)
        logger.info("Expectation domination of %s by c=%g certified=%s", h.kind, c.value, certified)
    return c


def measure_from_spec(spec: Any) -> RiskMeasure:
    """Build a risk measure; bare distortion specs become Distortion(h)."""
    if isinstance(spec, (str, dict)):
        spec = specs.parse_measure_spec(spec)
    if isinstance(spec, specs.EntropicSpec):
        return Entropic(spec.beta)
    if isinstance(spec, specs.ScenarioSupSpec):
        return ScenarioSup(spec.scenarios)
    if isinstance(spec, specs.CapacitySpec):
        return Capacity(spec.values)
    if isinstance(spec, specs.KusuokaSupSpec):
        return KusuokaSup([distortion_from_spec(m) for m in spec.members])
    return Distortion(distortion_from_spec(spec))
