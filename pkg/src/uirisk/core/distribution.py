"""
Finite discrete distributions.

A DiscreteDistribution is the law of a loss X with finite support. It is
immutable once built: atoms are sorted strictly increasing, atoms closer
than the merge tolerance are identified, zero-weight atoms are dropped and
the weights are renormalized to sum to one exactly.

Quantiles use the left-continuous inverse VaR_p(X) = inf{x : P(X <= x) >= p}.
All integrals of quantile functions are computed in closed form per step.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from uirisk.config import settings
from uirisk.exceptions import (
    EmptySampleError,
    InvalidWeightsError,
    LevelOutOfRangeError,
    MixtureMismatchError,
    NonFiniteSampleError,
)


def _frozen(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


def _merge_sorted(atoms: np.ndarray, weights: np.ndarray, tol: float) -> tuple[np.ndarray, np.ndarray]:
    """Merge runs of sorted atoms whose consecutive gaps are within tol."""
    starts = np.concatenate(([True], np.diff(atoms) > tol))
    groups = np.cumsum(starts) - 1
    return atoms[starts], np.bincount(groups, weights=weights)


class DiscreteDistribution:
    """Law of a random variable with finite support."""

    __slots__ = ("_atoms", "_weights")

    def __init__(self, atoms: Iterable[float], weights: Iterable[float] | None = None):
        a = np.asarray(list(atoms) if not isinstance(atoms, np.ndarray) else atoms, dtype=float).ravel()
        if a.size == 0:
            raise EmptySampleError("atoms")
        bad = int(np.count_nonzero(~np.isfinite(a)))
        if bad:
            raise NonFiniteSampleError(bad)

        if weights is None:
            w = np.full(a.size, 1.0 / a.size)
        else:
            w = np.asarray(list(weights) if not isinstance(weights, np.ndarray) else weights, dtype=float).ravel()
        if w.shape != a.shape:
            raise InvalidWeightsError(
                message=f"{w.size} weights for {a.size} atoms",
                details={"atoms": int(a.size), "weights": int(w.size)},
            )
        if not np.all(np.isfinite(w)) or np.any(w < 0):
            raise InvalidWeightsError(message="weights must be finite and non-negative")
        total = math.fsum(w)
        if abs(total - 1.0) > settings.numerics.weight_tol:
            raise InvalidWeightsError(
                message=f"weights sum to {total!r}, expected 1",
                details={"total": total},
            )

        keep = w > 0
        a, w = a[keep], w[keep]
        order = np.argsort(a, kind="stable")
        a, w = _merge_sorted(a[order], w[order], settings.numerics.atom_tol)
        w = w / math.fsum(w)
        self._atoms = _frozen(a)
        self._weights = _frozen(w)

    # ─── Constructors ──────────────────────────────────────────

    @classmethod
    def point(cls, value: float) -> DiscreteDistribution:
        return cls([value], [1.0])

    @classmethod
    def uniform(cls, values: Sequence[float]) -> DiscreteDistribution:
        """Law of a vector on a uniform finite probability space."""
        return cls(np.asarray(values, dtype=float))

    @classmethod
    def two_point(cls, low: float, high: float, p_high: float) -> DiscreteDistribution:
        return cls([low, high], [1.0 - p_high, p_high])

    @classmethod
    def bernoulli(cls, theta: float, scale: float = 1.0) -> DiscreteDistribution:
        """scale * Bernoulli(theta)."""
        if not 0.0 <= theta <= 1.0:
            raise LevelOutOfRangeError(theta, "[0, 1]")
        return cls([0.0, scale], [1.0 - theta, theta])

    # ─── Accessors ─────────────────────────────────────────────

    @property
    def atoms(self) -> np.ndarray:
        return self._atoms

    @property
    def weights(self) -> np.ndarray:
        return self._weights

    @property
    def size(self) -> int:
        return int(self._atoms.size)

    @property
    def cumulative(self) -> np.ndarray:
        """P(X <= a_i) per atom; the last entry is exactly 1."""
        c = np.cumsum(self._weights)
        c[-1] = 1.0
        return c

    @property
    def survival(self) -> np.ndarray:
        """P(X >= a_i) per atom; the first entry is exactly 1."""
        s = np.cumsum(self._weights[::-1])[::-1].copy()
        s[0] = 1.0
        return s

    def __len__(self) -> int:
        return self.size

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DiscreteDistribution):
            return NotImplemented
        return np.array_equal(self._atoms, other._atoms) and np.array_equal(self._weights, other._weights)

    def __hash__(self) -> int:
        return hash((self._atoms.tobytes(), self._weights.tobytes()))

    def __repr__(self) -> str:
        if self.size <= 6:
            pairs = ", ".join(f"{a:g}:{w:.4g}" for a, w in zip(self._atoms, self._weights))
            return f"DiscreteDistribution({pairs})"
        return f"DiscreteDistribution(<{self.size} atoms in [{self._atoms[0]:g}, {self._atoms[-1]:g}]>)"


@dataclass(frozen=True, eq=False)
class QuantileFunction:
    """Left-continuous step function t -> VaR_t on (0, 1]."""

    breakpoints: np.ndarray
    values: np.ndarray

    def __call__(self, t: float | np.ndarray) -> float | np.ndarray:
        t_arr = np.asarray(t, dtype=float)
        # first atom with F(a_i) >= t; t = 1 is the largest atom
        idx = np.searchsorted(self.breakpoints, t_arr, side="left")
        idx = np.where(t_arr >= 1.0, self.values.size - 1, np.minimum(idx, self.values.size - 1))
        out = self.values[idx]
        return float(out) if out.ndim == 0 else out

    def integral(self, lo: float = 0.0, hi: float = 1.0) -> float:
        """Exact integral of the step function over [lo, hi]."""
        lower = np.concatenate(([0.0], self.breakpoints[:-1]))
        lengths = np.clip(np.minimum(self.breakpoints, hi) - np.maximum(lower, lo), 0.0, None)
        return math.fsum(lengths * self.values)


# ─── Operations ────────────────────────────────────────────────


def from_samples(samples: Iterable[float]) -> DiscreteDistribution:
    """Empirical law: distinct sorted values weighted by relative frequency."""
    arr = np.asarray(list(samples) if not isinstance(samples, np.ndarray) else samples, dtype=float).ravel()
    if arr.size == 0:
        raise EmptySampleError("sample")
    bad = int(np.count_nonzero(~np.isfinite(arr)))
    if bad:
        raise NonFiniteSampleError(bad)
    values, counts = np.unique(arr, return_counts=True)
    return DiscreteDistribution(values, counts / arr.size)


def quantile_function(X: DiscreteDistribution) -> QuantileFunction:
    return QuantileFunction(breakpoints=X.cumulative, values=X.atoms)


def var(X: DiscreteDistribution, p: float) -> float:
    """Value-at-Risk, the left-continuous p-quantile."""
    if not 0.0 < p < 1.0:
        raise LevelOutOfRangeError(p, "(0, 1)")
    return float(quantile_function(X)(p))


def mean(X: DiscreteDistribution) -> float:
    return math.fsum(X.atoms * X.weights)


def negate(X: DiscreteDistribution) -> DiscreteDistribution:
    return DiscreteDistribution(-X.atoms[::-1], X.weights[::-1])


def fold(X: DiscreteDistribution) -> DiscreteDistribution:
    """Law of |X|."""
    return DiscreteDistribution(np.abs(X.atoms), X.weights)


def truncate(X: DiscreteDistribution, M: float) -> DiscreteDistribution:
    """Law of min(X, M)."""
    return DiscreteDistribution(np.minimum(X.atoms, M), X.weights)


def affine(X: DiscreteDistribution, scale: float = 1.0, shift: float = 0.0) -> DiscreteDistribution:
    """Law of scale * X + shift."""
    return DiscreteDistribution(scale * X.atoms + shift, X.weights)


def mix(Xs: Sequence[DiscreteDistribution], ws: Sequence[float]) -> DiscreteDistribution:
    """The ws-mixture of the laws Xs."""
    if len(Xs) != len(ws):
        raise MixtureMismatchError(
            message=f"{len(Xs)} components but {len(ws)} mixture weights",
            details={"components": len(Xs), "weights": len(ws)},
        )
    if not Xs:
        raise EmptySampleError("mixture")
    ws_arr = np.asarray(ws, dtype=float)
    if np.any(ws_arr < 0) or abs(math.fsum(ws_arr) - 1.0) > settings.numerics.weight_tol:
        raise InvalidWeightsError(message="mixture weights must form a probability vector")
    atoms = np.concatenate([X.atoms for X in Xs])
    weights = np.concatenate([w * X.weights for X, w in zip(Xs, ws_arr)])
    return DiscreteDistribution(atoms, weights)


def upper_tail_integral(X: DiscreteDistribution, delta: float | np.ndarray) -> float | np.ndarray:
    """
    Integral of VaR_q over q in [1 - delta, 1], i.e. delta * ES_{1-delta}(X).

    Computed from the top of the support downwards so that tiny tail masses
    keep full precision.
    """
    d = np.asarray(delta, dtype=float)
    if np.any(d < 0.0) or np.any(d > 1.0):
        raise LevelOutOfRangeError(float(np.min(d)) if np.any(d < 0) else float(np.max(d)), "[0, 1]")
    atoms = X.atoms[::-1]
    mass = np.cumsum(X.weights[::-1])
    mass[-1] = 1.0
    before = np.concatenate(([0.0], mass[:-1]))
    partial = np.concatenate(([0.0], np.cumsum(atoms * X.weights[::-1])[:-1]))
    k = np.minimum(np.searchsorted(mass, d, side="left"), atoms.size - 1)
    out = partial[k] + (d - before[k]) * atoms[k]
    return float(out) if out.ndim == 0 else out
