"""
Tests for the risk-measure union and expectation domination.
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings as hyp_settings
from hypothesis import strategies as st

from uirisk.core.distribution import DiscreteDistribution
from uirisk.core.extended import POS_INF
from uirisk.exceptions import (
    DimensionMismatchError,
    InvalidCapacityError,
    InvalidScenarioError,
    MeasureError,
    NonConcaveDistortionError,
    ParameterRangeError,
    SpecParseError,
)
from uirisk.measures.distortion import IES, ESClip, PiecewiseLinear, Power
from uirisk.measures.measures import (
    Capacity,
    Distortion,
    Entropic,
    KusuokaSup,
    ScenarioSup,
    certify_domination,
    evaluate,
    expectation_domination_constant,
    measure_from_spec,
    negate_position,
)


class TestDistortionMeasure:
    """Distortion measures on laws and on vectors."""

    def test_law_and_vector_agree(self):
        """Should read a vector as the uniform law on its entries."""
        rho = Distortion(ESClip(0.5))
        x = np.array([3.0, -1.0, 0.0, 2.0])
        assert evaluate(rho, x) == pytest.approx(evaluate(rho, DiscreteDistribution.uniform(x)))
        assert evaluate(rho, x) == pytest.approx(2.5)

    def test_batch(self):
        """Should evaluate rows of atoms and weights in one call."""
        rho = Distortion(IES())
        atoms = np.array([[0.0, 1.0], [-1.0, 1.0]])
        weights = np.full((2, 2), 0.5)
        out = rho.evaluate_batch(atoms, weights)
        assert out[0] == pytest.approx(0.5 * (1.0 + math.log(2.0)))


class TestEntropic:
    """(1/beta) log E exp(beta X)."""

    def test_point_mass(self):
        """Should return the atom of a point mass."""
        assert Entropic(2.0).evaluate(DiscreteDistribution.point(1.5)) == pytest.approx(1.5)

    def test_bernoulli(self):
        """Should follow the closed form on a Bernoulli law."""
        beta = 3.0
        value = Entropic(beta).evaluate(DiscreteDistribution.bernoulli(0.5))
        assert value == pytest.approx(math.log(0.5 + 0.5 * math.exp(beta)) / beta)

    def test_large_beta_is_stable(self):
        """Should approach the maximum without overflow for large beta."""
        assert Entropic(1e4).evaluate(DiscreteDistribution.uniform([0.0, 1.0])) == pytest.approx(1.0, abs=1e-3)

    def test_beta_range(self):
        """Should reject beta = 0."""
        with pytest.raises(ParameterRangeError):
            Entropic(0.0)


class TestKusuokaSup:
    """Suprema of concave distortion measures."""

    def test_max_of_members(self, a1_law):
        """Should take the largest member value."""
        rho = KusuokaSup([ESClip(0.75), Power(0.5)])
        assert rho.evaluate(a1_law) == pytest.approx(max(4.0 / 3.0, -1.0 + 7.0 * math.sqrt(1.0 / 12.0)))

    def test_rejects_non_concave(self):
        """Should refuse non-concave members."""
        with pytest.raises(NonConcaveDistortionError):
            KusuokaSup([PiecewiseLinear([(0.0, 0.0), (0.5, 0.1), (1.0, 1.0)])])

    def test_rejects_empty(self):
        """Should refuse an empty member list."""
        with pytest.raises(MeasureError):
            KusuokaSup([])


class TestScenarioSup:
    """Worst scenario expectation on a finite space."""

    def test_value(self):
        """Should take the worst scenario expectation."""
        rho = ScenarioSup([[1.0, 0.0, 0.0], [0.0, 0.0, 1.0]])
        assert rho.evaluate(np.array([1.0, 0.0, -1.0])) == 1.0
        assert rho.evaluate(np.array([-2.0, 5.0, -1.0])) == -1.0

    def test_invalid_scenario(self):
        """Should reject a scenario not summing to 1."""
        with pytest.raises(InvalidScenarioError):
            ScenarioSup([[0.5, 0.6]])

    def test_dimension_mismatch(self):
        """Should reject vectors of the wrong length."""
        with pytest.raises(DimensionMismatchError):
            ScenarioSup([[0.5, 0.5]]).evaluate(np.array([1.0, 2.0, 3.0]))

    def test_rejects_laws(self, a1_law):
        """Should refuse laws in place of vectors."""
        with pytest.raises(MeasureError):
            ScenarioSup([[0.5, 0.5]]).evaluate(a1_law)


class TestCapacity:
    """Choquet integral against a submodular capacity."""

    def test_half_capacity(self):
        """Should give 0 on the split vector and 1 on the constant one."""
        rho = Capacity([0.0, 0.5, 0.5, 1.0])
        assert rho.evaluate(np.array([1.0, -1.0])) == pytest.approx(0.0)
        assert rho.evaluate(np.array([1.0, 1.0])) == pytest.approx(1.0)

    def test_probability_capacity_is_expectation(self):
        """Should reduce to the expectation for an additive capacity."""
        p = np.array([0.2, 0.3, 0.5])
        rho = Capacity.from_function(3, lambda A: float(sum(p[i] for i in A)))
        x = np.array([4.0, -1.0, 2.0])
        assert rho.evaluate(x) == pytest.approx(float(p @ x))

    def test_size_must_be_power_of_two(self):
        """Should need 2^k values."""
        with pytest.raises(InvalidCapacityError):
            Capacity([0.0, 0.5, 1.0])

    def test_normalization(self):
        """Should need nu(full) = 1."""
        with pytest.raises(InvalidCapacityError):
            Capacity([0.0, 0.5, 0.5, 0.9])

    def test_monotonicity(self):
        """Should reject a non-monotone capacity."""
        with pytest.raises(InvalidCapacityError):
            Capacity([0.0, 1.2, 0.5, 1.0])

    def test_submodularity(self):
        """Should reject a supermodular capacity."""
        with pytest.raises(InvalidCapacityError):
            Capacity([0.0, 0.1, 0.1, 1.0])


class TestExpectationDomination:
    """Constants c with rho_h <= c E on nonnegative losses."""

    def test_es_constant(self):
        """Should give 1 / (1 - p) for ES."""
        c = expectation_domination_constant(ESClip(0.75))
        assert c == pytest.approx(4.0)

    def test_infinite_for_Dc(self):
        """Should be infinite under infinite slope."""
        assert expectation_domination_constant(IES()) == POS_INF

    def test_certified_at_slope(self):
        """Should certify domination at the slope."""
        assert certify_domination(ESClip(0.75), 4.0, seed=1)

    def test_fails_below_slope(self):
        """Should find a counterexample below the slope."""
        assert not certify_domination(ESClip(0.75), 2.0, seed=1)


class TestMeasureFromSpec:
    """JSON construction of every kind."""

    def test_distortion_kinds_wrap(self):
        """Should wrap bare distortion specs in a distortion measure."""
        rho = measure_from_spec('{"kind": "ies"}')
        assert isinstance(rho, Distortion)

    def test_entropic(self):
        """Should build the entropic measure."""
        assert isinstance(measure_from_spec({"kind": "entropic", "beta": 0.5}), Entropic)

    def test_scenario_sup(self):
        """Should build a scenario supremum."""
        rho = measure_from_spec({"kind": "scenario_sup", "scenarios": [[1, 0], [0, 1]]})
        assert rho.evaluate(np.array([2.0, 3.0])) == 3.0

    def test_capacity(self):
        """Should build a capacity measure."""
        assert isinstance(measure_from_spec({"kind": "capacity", "values": [0, 0.5, 0.5, 1]}), Capacity)

    def test_kusuoka(self):
        """Should build every Kusuoka member."""
        rho = measure_from_spec({"kind": "kusuoka_sup", "members": [{"kind": "es_clip", "p": 0.5}, {"kind": "ies"}]})
        assert isinstance(rho, KusuokaSup)
        assert len(rho.hs) == 2

    def test_spec_round_trip(self):
        """Should rebuild a measure from its own spec."""
        rho = KusuokaSup([ESClip(0.5), IES()])
        assert isinstance(measure_from_spec(rho.to_spec()), KusuokaSup)

    def test_invalid(self):
        """Should reject a negative beta."""
        with pytest.raises(SpecParseError):
            measure_from_spec({"kind": "entropic", "beta": -1})


CELLS = 3
cell_values = st.floats(-100, 100, allow_nan=False, allow_infinity=False)
positions = st.lists(cell_values, min_size=CELLS, max_size=CELLS).map(np.array)


def _shared_space_measures():
    """Coherent measures that all act on vectors over the same three equally likely cells."""
    return [
        Distortion(IES()),
        Distortion(ESClip(0.5)),
        KusuokaSup([ESClip(0.75), Power(0.5)]),
        Capacity.from_function(CELLS, lambda A: math.sqrt(len(A) / CELLS)),
    ]


def _slack(*vectors):
    return 1e-9 * (1.0 + sum(float(np.max(np.abs(v))) for v in vectors))


class TestCoherenceProperties:
    """Coherence consequences on a shared finite space."""

    @given(positions, positions)
    @hyp_settings(max_examples=80, deadline=None)
    def test_subadditive(self, x, y):
        """Should satisfy rho(x + y) <= rho(x) + rho(y) for every measure."""
        for rho in _shared_space_measures():
            assert evaluate(rho, x + y) <= evaluate(rho, x) + evaluate(rho, y) + _slack(x, y)

    @given(positions, positions)
    @hyp_settings(max_examples=80, deadline=None)
    def test_comonotone_additive(self, x, y):
        """Should add exactly on comonotone pairs for distortion and capacity measures."""
        x, y = np.sort(x), np.sort(y)
        measures = [rho for rho in _shared_space_measures() if not isinstance(rho, KusuokaSup)]
        for rho in measures:
            assert evaluate(rho, x + y) == pytest.approx(evaluate(rho, x) + evaluate(rho, y), abs=_slack(x, y))

    @given(positions)
    @hyp_settings(max_examples=80, deadline=None)
    def test_position_and_negation_sum_nonnegative(self, x):
        """Should keep rho(X) + rho(-X) >= 0."""
        for rho in _shared_space_measures():
            assert evaluate(rho, x) + evaluate(rho, negate_position(x)) >= -_slack(x)

    @given(st.lists(st.floats(0, 100, allow_nan=False, allow_infinity=False), min_size=1, max_size=8))
    @hyp_settings(max_examples=40, deadline=None)
    def test_kusuoka_sup_below_largest_slope(self, values):
        """Should bound a supremum of finite-slope distortions by its largest slope times the mean."""
        members = [ESClip(0.75), ESClip(0.5)]
        c = max(expectation_domination_constant(h).value for h in members)
        x = np.array(values)
        assert evaluate(KusuokaSup(members), x) <= c * float(np.mean(x)) + _slack(x)
