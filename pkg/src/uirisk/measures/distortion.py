"""
Distortion functions.

A distortion h: [0,1] -> [0,1] is non-decreasing with h(0)=0 and h(1)=1.
Concave distortions give coherent risk measures. Each kind evaluates in
closed form on numpy arrays and knows its slope limit lim_{t->0} h(t)/t
symbolically, so infinite slopes never pass through float arithmetic.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from functools import cached_property
from typing import Any, Callable, ClassVar, Sequence

import numpy as np

from uirisk.config import settings
from uirisk.core.extended import POS_INF, ExtendedReal
from uirisk.exceptions import InvalidDistortionError, NonConcaveDistortionError, ParameterRangeError
from uirisk.measures import specs

# Dyadic points near zero that every check grid includes
_NEAR_ZERO = 2.0 ** -np.arange(12, 60)


class DistortionFunction(ABC):
    """Base class for all distortion kinds."""

    kind: ClassVar[str]

    def __call__(self, t: float | np.ndarray) -> float | np.ndarray:
        arr = np.clip(np.asarray(t, dtype=float), 0.0, 1.0)
        out = self._evaluate(arr)
        return float(out) if np.ndim(out) == 0 else out

    @abstractmethod
    def _evaluate(self, t: np.ndarray) -> np.ndarray:
        """Vectorized h on values already clipped to [0, 1]."""

    @abstractmethod
    def _slope(self) -> ExtendedReal:
        """Closed-form lim_{t->0} h(t)/t, valid for concave h."""

    @abstractmethod
    def to_spec(self) -> Any:
        """Pydantic spec model of this distortion."""

    def knots(self) -> np.ndarray:
        return np.empty(0)

    # ─── Cached metadata ───────────────────────────────────────

    def check_grid(self) -> np.ndarray:
        grid = np.linspace(0.0, 1.0, settings.numerics.concavity_grid)
        knots = self.knots()
        knots = knots[(knots > 0.0) & (knots < 1.0)]
        return np.unique(np.concatenate((grid, _NEAR_ZERO, knots)))

    @cached_property
    def is_concave(self) -> bool:
        t = self.check_grid()
        h = self._evaluate(t)
        t0, t1, t2 = t[:-2], t[1:-1], t[2:]
        chord = h[:-2] + (h[2:] - h[:-2]) * (t1 - t0) / (t2 - t0)
        return bool(np.all(h[1:-1] >= chord - settings.numerics.concavity_tol))

    @cached_property
    def half_value(self) -> float:
        return float(self._evaluate(np.asarray(0.5)))

    def validate(self) -> None:
        """Check h(0)=0, h(1)=1 and monotonicity on the check grid."""
        tol = settings.numerics.concavity_tol
        ends = self._evaluate(np.array([0.0, 1.0]))
        if abs(ends[0]) > tol or abs(ends[1] - 1.0) > tol:
            raise InvalidDistortionError(
                message=f"{self.kind}: need h(0)=0 and h(1)=1, got {ends[0]:g} and {ends[1]:g}",
                details={"kind": self.kind},
            )
        values = self._evaluate(self.check_grid())
        if np.any(np.diff(values) < -tol):
            raise InvalidDistortionError(message=f"{self.kind}: h is not non-decreasing", details={"kind": self.kind})

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.to_spec().model_dump_json(exclude={'kind'})})"


# ─── Kinds ─────────────────────────────────────────────────────


class Identity(DistortionFunction):
    kind = "identity"

    def _evaluate(self, t):
        return t.copy()

    def _slope(self):
        return ExtendedReal.finite(1.0)

    def to_spec(self):
        return specs.IdentitySpec()


class ESClip(DistortionFunction):
    """h_p(t) = min(t / (1 - p), 1); the distortion of ES_p."""

    kind = "es_clip"

    def __init__(self, p: float):
        if not 0.0 <= p < 1.0:
            raise ParameterRangeError("p", p, "[0, 1)")
        self.p = float(p)

    def _evaluate(self, t):
        return np.minimum(t / (1.0 - self.p), 1.0)

    def _slope(self):
        return ExtendedReal.finite(1.0 / (1.0 - self.p))

    def knots(self):
        return np.array([1.0 - self.p])

    def to_spec(self):
        return specs.ESClipSpec(p=self.p)


class Power(DistortionFunction):
    """h(t) = t^alpha, alpha in (0, 1]."""

    kind = "power"

    def __init__(self, alpha: float):
        if not 0.0 < alpha <= 1.0:
            raise ParameterRangeError("alpha", alpha, "(0, 1]")
        self.alpha = float(alpha)

    def _evaluate(self, t):
        return np.power(t, self.alpha)

    def _slope(self):
        return ExtendedReal.finite(1.0) if self.alpha == 1.0 else POS_INF

    def to_spec(self):
        return specs.PowerSpec(alpha=self.alpha)


class IES(DistortionFunction):
    """h(t) = t (1 - log t), extended by h(0) = 0."""

    kind = "ies"

    def _evaluate(self, t):
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(t > 0.0, t * (1.0 - np.log(np.where(t > 0.0, t, 1.0))), 0.0)

    def _slope(self):
        return POS_INF

    def to_spec(self):
        return specs.IESSpec()


class PiecewiseLinear(DistortionFunction):
    """Linear interpolation through knots (t_i, h_i) from (0,0) to (1,1)."""

    kind = "piecewise_linear"

    def __init__(self, knots: Sequence[tuple[float, float]]):
        pts = np.asarray(knots, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] < 2:
            raise InvalidDistortionError(message="knots must be a list of (t, h) pairs")
        if pts[0, 0] != 0.0 or pts[-1, 0] != 1.0 or np.any(np.diff(pts[:, 0]) <= 0):
            raise InvalidDistortionError(message="knot abscissae must increase strictly from 0 to 1")
        self._t = pts[:, 0]
        self._h = pts[:, 1]

    def _evaluate(self, t):
        return np.interp(t, self._t, self._h)

    def _slope(self):
        return ExtendedReal.finite((self._h[1] - self._h[0]) / self._t[1])

    def knots(self):
        return self._t.copy()

    def to_spec(self):
        return specs.PiecewiseLinearSpec(knots=[(float(a), float(b)) for a, b in zip(self._t, self._h)])


class ESLadder(DistortionFunction):
    """
    Normalized dyadic ES series sum_{j>=1} min(t, base 2^-j) / base.

    Closed form: with J = max(0, floor(log2(base / t))), the sum equals
    J t + base 2^-J. The slope at zero is infinite.
    """

    kind = "es_ladder"

    def __init__(self, base: float):
        if not 0.0 < base <= 1.0:
            raise ParameterRangeError("base", base, "(0, 1]")
        self.base = float(base)

    def _evaluate(self, t):
        with np.errstate(divide="ignore"):
            J = np.floor(np.log2(self.base / np.where(t > 0.0, t, 1.0)))
        J = np.maximum(J, 0.0)
        g = J * t + self.base * np.exp2(-J)
        return np.where(t > 0.0, g / self.base, 0.0)

    def _slope(self):
        return POS_INF

    def knots(self):
        return self.base * 2.0 ** -np.arange(1, 60)

    def to_spec(self):
        return specs.ESLadderSpec(base=self.base)


class NormalizedSum(DistortionFunction):
    """sum_k c_k h_k(t) / sum_k c_k for positive coefficients c_k."""

    kind = "normalized_sum"

    def __init__(self, components: Sequence[DistortionFunction], coefficients: Sequence[float]):
        if len(components) != len(coefficients) or not components:
            raise InvalidDistortionError(message="normalized_sum needs matching non-empty components and coefficients")
        c = np.asarray(coefficients, dtype=float)
        if np.any(c <= 0) or not np.all(np.isfinite(c)):
            raise InvalidDistortionError(message="normalized_sum coefficients must be positive")
        self.components = list(components)
        self.coefficients = c
        self.total = float(np.sum(c))

    @classmethod
    def of_levels(cls, levels: Sequence[float], coefficients: Sequence[float]) -> NormalizedSum:
        return cls([ESClip(p) for p in levels], coefficients)

    def _evaluate(self, t):
        acc = np.zeros_like(t, dtype=float)
        for h, c in zip(self.components, self.coefficients):
            acc = acc + c * h._evaluate(t)
        return acc / self.total

    def unnormalized(self, t: float | np.ndarray) -> float | np.ndarray:
        """g(t) = sum_k c_k h_k(t), before division by g(1)."""
        return self(t) * self.total

    def _slope(self):
        slopes = [h._slope() for h in self.components]
        if any(s.is_pos_inf for s in slopes):
            return POS_INF
        return ExtendedReal.finite(sum(c * s.value for c, s in zip(self.coefficients, slopes)) / self.total)

    def knots(self):
        parts = [h.knots() for h in self.components]
        return np.unique(np.concatenate(parts)) if parts else np.empty(0)

    def to_spec(self):
        if all(isinstance(h, ESClip) for h in self.components):
            return specs.NormalizedSumSpec(
                coefficients=self.coefficients.tolist(), levels=[h.p for h in self.components]  # type: ignore[attr-defined]
            )
        return specs.NormalizedSumSpec(
            coefficients=self.coefficients.tolist(), components=[h.to_spec() for h in self.components]
        )


class PointwiseMin(DistortionFunction):
    """min_k h_k(t)."""

    kind = "pointwise_min"

    def __init__(self, *members: DistortionFunction):
        if len(members) < 2:
            raise InvalidDistortionError(message="pointwise_min needs at least two members")
        self.members = list(members)

    def _evaluate(self, t):
        return np.minimum.reduce([h._evaluate(t) for h in self.members])

    def _slope(self):
        return min(h._slope() for h in self.members)

    def knots(self):
        return np.unique(np.concatenate([h.knots() for h in self.members]))

    def to_spec(self):
        return specs.PointwiseMinSpec(members=[h.to_spec() for h in self.members])


# ─── Operations ────────────────────────────────────────────────


def slope_limit(h: DistortionFunction) -> ExtendedReal:
    """lim_{t->0} h(t)/t for concave h."""
    if not h.is_concave:
        raise NonConcaveDistortionError(h.kind)
    return h._slope()


def is_Dc(h: DistortionFunction) -> bool:
    """True when h is concave with infinite slope at zero."""
    return slope_limit(h).is_pos_inf


def dual(h: DistortionFunction) -> Callable[[np.ndarray], np.ndarray]:
    """The dual distortion g(t) = 1 - h(1 - t)."""

    def g(t: float | np.ndarray) -> float | np.ndarray:
        return 1.0 - h(1.0 - np.asarray(t, dtype=float))

    return g


def distortion_from_spec(spec: Any) -> DistortionFunction:
    """Build and validate a distortion from its spec model, dict or JSON text."""
    if isinstance(spec, (str, dict)):
        spec = specs.parse_distortion_spec(spec)
    h: DistortionFunction
    if isinstance(spec, specs.IdentitySpec):
        h = Identity()
    elif isinstance(spec, specs.ESClipSpec):
        h = ESClip(spec.p)
    elif isinstance(spec, specs.PowerSpec):
        h = Power(spec.alpha)
    elif isinstance(spec, specs.IESSpec):
        h = IES()
    elif isinstance(spec, specs.PiecewiseLinearSpec):
        h = PiecewiseLinear(spec.knots)
    elif isinstance(spec, specs.ESLadderSpec):
        h = ESLadder(spec.base)
    elif isinstance(spec, specs.NormalizedSumSpec):
        if spec.levels is not None:
            h = NormalizedSum.of_levels(spec.levels, spec.coefficients)
        else:
            h = NormalizedSum([distortion_from_spec(c) for c in spec.components or []], spec.coefficients)
    elif isinstance(spec, specs.PointwiseMinSpec):
        h = PointwiseMin(*(distortion_from_spec(m) for m in spec.members))
    else:
        raise InvalidDistortionError(message=f"not a distortion spec: {type(spec).__name__}")
    h.validate()
    return h
