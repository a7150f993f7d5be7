"""
Randomized search for empirical folding scores.

Strategies, in order:

    symmetric     the law (or vector) +-1; an infinite ratio ends the search
    sharpness     the ES two-point family at eps = 0.01 (es_clip, p >= 1/2)
    two_point     X = -1 w.p. 1-w, c w.p. w over a log grid of (w, c)
    random        random k-atom laws in seeded chunks

Space-based measures replace the law strategies by sign patterns on the
cells and random position vectors.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import partial
from typing import Optional

import numpy as np
from pydantic import BaseModel, Field

from uirisk.config import settings
from uirisk.core.distribution import DiscreteDistribution
from uirisk.core.rng import stream
from uirisk.exceptions import SpecParseError
from uirisk.folding.score import folding_ratio, sharpness_family
from uirisk.logging_config import get_logger
from uirisk.measures.distortion import ESClip
from uirisk.measures.measures import Capacity, Distortion, RiskMeasure, ScenarioSup
from uirisk.parallel import parallel_map
from uirisk.schemas import FoldingReport

logger = get_logger(__name__)

SIGN_PATTERN_MAX_CELLS = 8
TWO_POINT_GRID = 200


class SearchConfig(BaseModel):
    """Searcher settings: atom count, total iterations and master seed."""

    atoms: int = Field(default_factory=lambda: settings.search.atoms, ge=1)
    iterations: int = Field(default_factory=lambda: settings.search.iterations, ge=0)
    seed: int = Field(default_factory=lambda: settings.runtime.seed)
    batch_size: int = Field(default_factory=lambda: settings.search.batch_size, ge=1)

    @classmethod
    def parse(cls, text: str) -> SearchConfig:
        """Parse 'k=4,iters=1e5,seed=7'; omitted keys take their defaults."""
        aliases = {"k": "atoms", "atoms": "atoms", "iters": "iterations", "iterations": "iterations",
                   "seed": "seed", "batch": "batch_size"}
        values: dict[str, int] = {}
        for part in filter(None, (p.strip() for p in text.split(","))):
            key, sep, raw = part.partition("=")
            if not sep or key.strip() not in aliases:
                raise SpecParseError(message=f"bad search option '{part}'", details={"option": part})
            try:
                number = float(raw)
            except ValueError as e:
                raise SpecParseError(message=f"search option '{key}' needs a number") from e
            if not number.is_integer():
                raise SpecParseError(message=f"search option '{key}' needs an integer")
            values[aliases[key.strip()]] = int(number)
        config = cls(**values)
        if config.atoms > settings.search.max_atoms:
            raise SpecParseError(
                message=f"at most {settings.search.max_atoms} atoms, got {config.atoms}",
                details={"atoms": config.atoms},
            )
        return config


@dataclass
class _Candidate:
    ratio: float
    atoms: Optional[np.ndarray]
    weights: Optional[np.ndarray]
    strategy: str


def _batch_ratios(folded: np.ndarray, positive: np.ndarray, negative: np.ndarray) -> np.ndarray:
    """Vectorized ratio with the same conventions as the scalar one."""
    den = np.maximum(positive, negative)
    tol = settings.numerics.zero_tol * np.maximum(1.0, np.abs(folded))
    zero_den = np.abs(den) <= tol
    with np.errstate(divide="ignore", invalid="ignore"):
        out = folded / np.where(zero_den, 1.0, den)
    out = np.where(zero_den & (np.abs(folded) <= tol), 1.0, out)
    return np.where(zero_den & (np.abs(folded) > tol), np.sign(folded) * np.inf, out)


def _best_of_laws(rho: RiskMeasure, atoms: np.ndarray, weights: np.ndarray, strategy: str) -> _Candidate:
    ratios = _batch_ratios(
        rho.evaluate_batch(np.abs(atoms), weights),
        rho.evaluate_batch(atoms, weights),
        rho.evaluate_batch(-atoms, weights),
    )
    i = int(np.argmax(ratios))
    return _Candidate(float(ratios[i]), atoms[i], weights[i], strategy)


def _best_of_vectors(rho: ScenarioSup | Capacity, vectors: np.ndarray, strategy: str) -> _Candidate:
    ratios = _batch_ratios(
        rho.evaluate_vectors(np.abs(vectors)), rho.evaluate_vectors(vectors), rho.evaluate_vectors(-vectors)
    )
    i = int(np.argmax(ratios))
    return _Candidate(float(ratios[i]), vectors[i], None, strategy)


def _random_chunk(rho: RiskMeasure, config: SearchConfig, item: tuple[int, int]) -> _Candidate:
    chunk, size = item
    rng = stream(config.seed, "folding.search", chunk)
    k = config.atoms
    scale = np.exp(rng.normal(0.0, 2.0, (size, 1)))
    atoms = rng.normal(0.0, 1.0, (size, k)) * scale
    weights = rng.dirichlet(np.ones(k), size)
    return _best_of_laws(rho, atoms, weights, "random")


def _vector_chunk(rho: ScenarioSup | Capacity, config: SearchConfig, item: tuple[int, int]) -> _Candidate:
    chunk, size = item
    rng = stream(config.seed, "folding.search", chunk)
    vectors = rng.normal(0.0, 1.0, (size, _dimension(rho))) * np.exp(rng.normal(0.0, 2.0, (size, 1)))
    return _best_of_vectors(rho, vectors, "random")


def _dimension(rho: ScenarioSup | Capacity) -> int:
    return rho.dimension if isinstance(rho, ScenarioSup) else rho.cells


def _two_point_grid() -> tuple[np.ndarray, np.ndarray]:
    w, c = np.meshgrid(np.logspace(-6, math.log10(0.999), TWO_POINT_GRID), np.logspace(-3, 6, TWO_POINT_GRID))
    w, c = w.ravel(), c.ravel()
    atoms = np.column_stack((-np.ones_like(c), c))
    weights = np.column_stack((1.0 - w, w))
    return atoms, weights


def _chunks(config: SearchConfig) -> list[tuple[int, int]]:
    sizes = []
    remaining = config.iterations
    chunk = 0
    while remaining > 0:
        size = min(config.batch_size, remaining)
        sizes.append((chunk, size))
        remaining -= size
        chunk += 1
    return sizes


def _reduce(candidates: list[_Candidate]) -> _Candidate:
    """Max-reduction; ties keep the earliest candidate."""
    best = candidates[0]
    for candidate in candidates[1:]:
        if candidate.ratio > best.ratio:
            best = candidate
    return best


def empirical_folding_score(rho: RiskMeasure, config: SearchConfig | None = None) -> FoldingReport:
    """Best folding ratio found by the search strategies, with its witness."""
    config = config or SearchConfig()
    space_based = isinstance(rho, (ScenarioSup, Capacity))

    if space_based:
        d = _dimension(rho)  # type: ignore[arg-type]
        symmetric: DiscreteDistribution | np.ndarray = np.where(np.arange(d) % 2 == 0, 1.0, -1.0)
    else:
        symmetric = DiscreteDistribution([-1.0, 1.0])
    report = folding_ratio(rho, symmetric)
    if report.ratio.is_pos_inf:
        logger.info("Symmetric witness gives an infinite folding ratio for %r", rho)
        return report.model_copy(update={"strategy": "symmetric", "evaluated": 1})

    candidates = [_Candidate(report.ratio.to_float(), None, None, "symmetric")]
    evaluated = 1

    if space_based:
        d = _dimension(rho)  # type: ignore[arg-type]
        if d <= SIGN_PATTERN_MAX_CELLS:
            patterns = np.array(list(itertools.product((-1.0, 0.0, 1.0), repeat=d)))
            candidates.append(_best_of_vectors(rho, patterns, "sign_patterns"))  # type: ignore[arg-type]
            evaluated += len(patterns)
        chunk_fn = partial(_vector_chunk, rho, config)
    else:
        if isinstance(rho, Distortion) and isinstance(rho.h, ESClip) and rho.h.p >= 0.5:
            X = sharpness_family(rho.h.p, 0.01)
            candidates.append(_best_of_laws(rho, X.atoms[None, :], X.weights[None, :], "sharpness"))
            evaluated += 1
        atoms, weights = _two_point_grid()
        candidates.append(_best_of_laws(rho, atoms, weights, "two_point"))
        evaluated += len(atoms)
        chunk_fn = partial(_random_chunk, rho, config)

    chunks = _chunks(config)
    candidates.extend(parallel_map(chunk_fn, chunks))
    evaluated += config.iterations

    best = _reduce(candidates)
    logger.info("Folding search on %r: best ratio %g via %s over %d positions", rho, best.ratio, best.strategy, evaluated)
    if best.atoms is None:
        witness: DiscreteDistribution | np.ndarray = symmetric
    elif space_based:
        witness = best.atoms
    else:
        witness = DiscreteDistribution(best.atoms, best.weights)
    return folding_ratio(rho, witness).model_copy(update={"strategy": best.strategy, "evaluated": evaluated})
