"""
Risk- and price-constrained utility maximization over decision laws.

The decision X is independent of the background risk Y and enters only
through its law, stored as the quantile vector x_1 <= ... <= x_n on the
uniform grid midpoints. The problem is

    maximize   E[u(-X, Y)]
    subject to rho(X) <= r0,  P(-X) <= x0

with u(x, y) = v(a x + b y). Both constraint functionals are linear in the
sorted vector: rho(X) = sum d_i x_{n+1-i} with d_i = h(i/n) - h((i-1)/n).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Literal

import numpy as np
from pydantic import BaseModel, Field
from pydantic import ValidationError as PydanticValidationError

from uirisk.config import settings
from uirisk.convergence.generators import normal_quadrature
from uirisk.core.distribution import DiscreteDistribution
from uirisk.core.io import distribution_from_spec
from uirisk.exceptions import InvalidProblemError, NonMonotoneDecisionError, ParameterRangeError, SpecParseError
from uirisk.measures.distortion import IES, DistortionFunction, Power, distortion_from_spec, is_Dc
from uirisk.measures.specs import DistortionSpec
from uirisk.schemas import DistributionSpec

BACKGROUND_QUADRATURE_POINTS = 200
MONOTONE_TOL = 1e-12


class Utility(BaseModel):
    """u(x, y) = v(a x + b y) for v in {identity, tanh, piecewise_linear}."""

    family: Literal["identity", "tanh", "piecewise_linear"] = "tanh"
    a: float = 1.0
    b: float = 0.5
    slope: float = Field(0.5, ge=0.0, le=1.0, description="Slope of v above the kink at 0.")

    model_config = {"frozen": True}

    def v(self, z: np.ndarray) -> np.ndarray:
        if self.family == "identity":
            return z
        if self.family == "tanh":
            return np.tanh(z)
        return np.where(z > 0.0, self.slope * z, z)

    def __call__(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return self.v(self.a * np.asarray(x, dtype=float) + self.b * np.asarray(y, dtype=float))

    @property
    def v_lipschitz(self) -> float:
        # tanh' <= 1; the piecewise-linear v has slopes 1 and slope <= 1
        return 1.0

    @property
    def lipschitz(self) -> float:
        return self.v_lipschitz * max(abs(self.a), abs(self.b))

    @property
    def is_concave(self) -> bool:
        return self.family != "tanh"


class InvestProblemSpec(BaseModel):
    """JSON form of a problem; a missing background law means normal quadrature."""

    n: int = Field(default_factory=lambda: settings.invest.grid_size, ge=1)
    utility: Utility = Field(default_factory=Utility)
    risk: DistortionSpec = Field(default_factory=lambda: IES().to_spec())
    price: DistortionSpec = Field(default_factory=lambda: Power(0.5).to_spec())
    r0: float = 1.0
    x0: float = 0.5
    background: DistributionSpec | None = None


@dataclass
class InvestProblem:
    n: int
    u: Utility
    rho: DistortionFunction
    price: DistortionFunction
    r0: float
    x0: float
    Y: DiscreteDistribution = field(default_factory=lambda: normal_quadrature(BACKGROUND_QUADRATURE_POINTS))

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ParameterRangeError("n", self.n, "positive integers")
        for role, h in (("risk", self.rho), ("price", self.price)):
            if not is_Dc(h):
                raise InvalidProblemError(
                    message=f"{role} distortion {h.kind} is not concave with infinite slope at zero",
                    details={"role": role, "kind": h.kind},
                )
        self.risk_weights = order_statistic_weights(self.rho, self.n)
        self.price_weights = order_statistic_weights(self.price, self.n)

    @property
    def lipschitz(self) -> float:
        return self.u.lipschitz

    @property
    def is_feasible(self) -> bool:
        """Some constant c satisfies c <= r0 and -c <= x0."""
        return self.r0 >= -self.x0

    def jensen_constant(self) -> float | None:
        """
        The optimal constant position for concave v, or None when v is not
        concave or a = 0. For a > 0 the objective decreases in x, so the
        cheapest admissible constant -x0 wins; for a < 0 the largest, r0.
        """
        if not self.u.is_concave or self.u.a == 0.0:
            return None
        return -self.x0 if self.u.a > 0.0 else self.r0

    def to_spec(self) -> InvestProblemSpec:
        return InvestProblemSpec(
            n=self.n,
            utility=self.u,
            risk=self.rho.to_spec(),
            price=self.price.to_spec(),
            r0=self.r0,
            x0=self.x0,
            background=DistributionSpec(atoms=self.Y.atoms.tolist(), weights=self.Y.weights.tolist()),
        )


def problem_from_spec(spec: InvestProblemSpec | dict[str, Any] | str) -> InvestProblem:
    if isinstance(spec, str):
        try:
            spec = InvestProblemSpec.model_validate_json(spec)
        except PydanticValidationError as e:
            first = e.errors()[0]
            raise SpecParseError(
                message=f"invalid problem spec at '{'.'.join(str(p) for p in first['loc'])}': {first['msg']}",
                details={"errors": len(e.errors())},
            ) from e
    elif isinstance(spec, dict):
        try:
            spec = InvestProblemSpec.model_validate(spec)
        except PydanticValidationError as e:
            raise SpecParseError(message=f"invalid problem spec: {e.errors()[0]['msg']}") from e
    background = (
        normal_quadrature(BACKGROUND_QUADRATURE_POINTS)
        if spec.background is None
        else distribution_from_spec(spec.background)
    )
    return InvestProblem(
        n=spec.n,
        u=spec.utility,
        rho=distortion_from_spec(spec.risk),
        price=distortion_from_spec(spec.price),
        r0=spec.r0,
        x0=spec.x0,
        Y=background,
    )


def default_problem(n: int | None = None) -> InvestProblem:
    """tanh(x + 0.5 y) under an IES risk bound 1 and a square-root price bound 0.5."""
    return InvestProblem(
        n=settings.invest.grid_size if n is None else n,
        u=Utility(family="tanh", a=1.0, b=0.5),
        rho=IES(),
        price=Power(0.5),
        r0=1.0,
        x0=0.5,
    )


def order_statistic_weights(h: DistortionFunction, n: int) -> np.ndarray:
    """d_i = h(i/n) - h((i-1)/n), the weight of the i-th largest value."""
    return np.diff(np.asarray(h(np.arange(n + 1) / n), dtype=float))


def _as_vector(x: Any) -> np.ndarray:
    values = np.asarray(getattr(x, "x", x), dtype=float)
    if values.ndim != 1 or values.size == 0:
        raise NonMonotoneDecisionError(message="decision must be a non-empty vector", details={"shape": values.shape})
    if np.any(np.diff(values) < -MONOTONE_TOL * max(1.0, float(np.max(np.abs(values))))):
        raise NonMonotoneDecisionError(
            message="decision quantiles are not non-decreasing",
            details={"worst_drop": float(-np.min(np.diff(values)))},
        )
    return values


def objective(prob: InvestProblem, x: Any, Y: DiscreteDistribution | None = None) -> float:
    """E[u(-X, Y)] as the double sum over quantile cells and atoms of Y."""
    values = _as_vector(x)
    Y = prob.Y if Y is None else Y
    utilities = prob.u(-values[:, None], Y.atoms[None, :])
    return float(np.mean(utilities @ Y.weights))


def constraints(prob: InvestProblem, x: Any) -> tuple[float, float]:
    """(rho(X), P(-X)) from the order-statistic weights."""
    values = _as_vector(x)
    if values.size != prob.n:
        raise InvalidProblemError(
            message=f"decision has {values.size} quantiles, problem expects {prob.n}",
            details={"size": values.size, "n": prob.n},
        )
    return float(prob.risk_weights @ values[::-1]), float(-(prob.price_weights @ values))
