"""
Choquet integrals of distortions and the ES family.

For a law with sorted atoms a_1 < ... < a_k and upper masses
S_i = P(X >= a_i), the Choquet integral of h is

    rho_h(X) = a_1 + sum_{i>=2} (a_i - a_{i-1}) h(S_i),

the survival-form integral evaluated exactly on each step.
"""

import itertools
import math
from typing import Sequence

import numpy as np

from uirisk.core.distribution import DiscreteDistribution, fold, upper_tail_integral
from uirisk.exceptions import LevelOutOfRangeError, ParameterRangeError
from uirisk.measures.distortion import DistortionFunction

ES_BRUTEFORCE_MAX_ATOMS = 16


def choquet(h: DistortionFunction, X: DiscreteDistribution) -> float:
    """Survival-form Choquet integral of X with respect to h(P)."""
    atoms = X.atoms
    if atoms.size == 1:
        return float(atoms[0])
    terms = np.diff(atoms) * h(X.survival[1:])
    return math.fsum(np.concatenate(([atoms[0]], terms)))


def choquet_quantile_form(h: DistortionFunction, X: DiscreteDistribution) -> float:
    """Quantile-form integral of VaR_{1-q} dh(q): atom a_i carries h(S_i) - h(S_{i+1})."""
    upper = X.survival
    lower = np.concatenate((upper[1:], [0.0]))
    return math.fsum(X.atoms * (h(upper) - h(lower)))


def choquet_batch(h: DistortionFunction, atoms: np.ndarray, weights: np.ndarray) -> np.ndarray:
    """
    Choquet integrals for a batch of laws given row-wise.

    Atoms need not be sorted or distinct; zero-length steps contribute nothing.
    """
    order = np.argsort(atoms, axis=1, kind="stable")
    a = np.take_along_axis(atoms, order, axis=1)
    w = np.take_along_axis(weights, order, axis=1)
    upper = np.cumsum(w[:, ::-1], axis=1)[:, ::-1]
    return a[:, 0] + np.sum(np.diff(a, axis=1) * h(upper[:, 1:]), axis=1)


def _check_level(p: float) -> None:
    if not 0.0 < p < 1.0:
        raise LevelOutOfRangeError(p, "(0, 1)")


def es(X: DiscreteDistribution, p: float) -> float:
    """Expected Shortfall: the average of VaR_q over q in (p, 1)."""
    _check_level(p)
    return float(upper_tail_integral(X, 1.0 - p)) / (1.0 - p)


def es_folded(X: DiscreteDistribution, p: float) -> float:
    return es(fold(X), p)


def es_sup_bruteforce(values: Sequence[float], p: float) -> float:
    """
    ES on a uniform n-atom space as the largest conditional mean over events
    of probability 1 - p, by exhaustive enumeration.
    """
    _check_level(p)
    arr = np.asarray(values, dtype=float)
    n = arr.size
    if n == 0 or n > ES_BRUTEFORCE_MAX_ATOMS:
        raise ParameterRangeError("n", n, f"[1, {ES_BRUTEFORCE_MAX_ATOMS}]")
    size = (1.0 - p) * n
    k = round(size)
    if k < 1 or abs(size - k) > 1e-9:
        raise ParameterRangeError("(1-p)n", size, "positive integers")
    best = -math.inf
    for subset in itertools.combinations(range(n), k):
        best = max(best, math.fsum(arr[list(subset)]) / k)
    return best


def ies_direct(X: DiscreteDistribution) -> float:
    """
    Integral of -log(1-q) VaR_q(X) over q in (0, 1).

    With s = 1 - q the antiderivative of -log(1-q) is -s(1 - log s); the
    integral over the cell of atom a_i runs between its upper masses.
    """
    upper = np.cumsum(X.weights[::-1])[::-1]
    upper[0] = 1.0
    lower = np.concatenate((upper[1:], [0.0]))

    def antiderivative(s: np.ndarray) -> np.ndarray:
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(s > 0.0, -s * (1.0 - np.log(np.where(s > 0.0, s, 1.0))), 0.0)

    return math.fsum(X.atoms * (antiderivative(lower) - antiderivative(upper)))
