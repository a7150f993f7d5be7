import sys
import os

import numpy as np
import pytest

# Append the project `src/` directory to the path so pytest can find it
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '../src')))

from uirisk.core.distribution import DiscreteDistribution  # noqa: E402


@pytest.fixture
def a1_law():
    """Two-point law -1 w.p. 11/12 and 6 w.p. 1/12."""
    return DiscreteDistribution([-1.0, 6.0], [11.0 / 12.0, 1.0 / 12.0])


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def make_law(rng):
    """Factory for random laws with up to max_atoms atoms on a random scale."""

    def build(max_atoms=6, scale=True):
        k = int(rng.integers(1, max_atoms + 1))
        atoms = rng.normal(0.0, 1.0, k)
        if scale:
            atoms = atoms * np.exp(rng.normal(0.0, 1.5))
        return DiscreteDistribution(atoms, rng.dirichlet(np.ones(k)))

    return build
