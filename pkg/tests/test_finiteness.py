"""
Tests for finiteness on L1 and the heavy-tailed IES example.
"""

import math

import pytest

from uirisk.core.distribution import mean
from uirisk.exceptions import ParameterRangeError
from uirisk.measures.distortion import IES, ESClip, NormalizedSum, Power
from uirisk.ui import classify_finiteness, comonotone_witness, example_ies_law, ies_divergence_series


class TestClassification:
    """Expectation domination against divergence on L1."""

    def test_es_is_expectation_dominated(self):
        """Should bound ES at 3/4 by 4 times the mean, with no witness."""
        report = classify_finiteness(ESClip(0.75))
        assert report.classification == "expectation-dominated"
        assert report.constant.value == pytest.approx(4.0)
        assert report.witness is None

    def test_normalized_sum_constant(self):
        """Should average the slopes of the summed ES distortions."""
        report = classify_finiteness(NormalizedSum.of_levels([0.5, 0.75], [1.0, 1.0]))
        assert report.constant.value == pytest.approx(3.0)

    @pytest.mark.parametrize("h", [Power(0.5), IES()])
    def test_infinite_slope_has_witness(self, h):
        """Should build a witness above 10 with mean below 1."""
        report = classify_finiteness(h)
        assert report.classification == "not-finite-on-L1"
        assert report.witness.reached
        assert report.witness.value > 10.0
        assert report.witness.mean < 1.0


class TestComonotoneWitness:
    """Comonotone sums of scaled indicators."""

    def test_terms_exceed_one(self):
        """Should make every term worth more than 1."""
        witness = comonotone_witness(Power(0.5), threshold=5.0)
        assert all(v > 1.0 for v in witness.term_values)
        assert witness.value > 5.0

    def test_levels_non_increasing(self):
        """Should shrink tail masses and stop at 2^-1000."""
        witness = comonotone_witness(IES(), threshold=10.0)
        assert all(a >= b for a, b in zip(witness.levels, witness.levels[1:]))
        assert witness.levels[-1] == 2.0 ** -1000

    def test_value_tracks_terms(self):
        """Should add up its term values."""
        witness = comonotone_witness(Power(0.5), threshold=5.0)
        assert witness.value == pytest.approx(sum(witness.term_values), rel=1e-9)


class TestIESExample:
    """A law with finite mean and infinite IES."""

    def test_mean(self):
        """Should keep the mean 2 / log 2 without a cap."""
        assert mean(example_ies_law()) == pytest.approx(2.0 / math.log(2.0), rel=1e-6)

    def test_capped_mean_below(self):
        """Should not raise the mean by capping."""
        assert mean(example_ies_law(1e6)) <= mean(example_ies_law()) + 1e-9

    def test_cap_bounds_support(self):
        """Should end the support at the cap."""
        assert example_ies_law(1e4).atoms[-1] == pytest.approx(1e4)

    def test_divergence(self):
        """Should grow strictly along widely spaced caps."""
        values = [v for _, v in ies_divergence_series([1e2, 1e4, 1e8, 1e16])]
        assert all(b > a for a, b in zip(values, values[1:]))

    def test_divergence_at_small_caps(self):
        """Should already grow strictly across caps 1e2, 1e3 and 1e4."""
        rows = ies_divergence_series([1e2, 1e3, 1e4])
        assert [M for M, _ in rows] == [1e2, 1e3, 1e4]
        values = [v for _, v in rows]
        assert all(b > a for a, b in zip(values, values[1:]))

    def test_capped_means_rise_to_limit(self):
        """Should have capped means increasing towards 2 / log 2 from below."""
        limit = 2.0 / math.log(2.0)
        means = [mean(example_ies_law(M)) for M in (1e2, 1e3, 1e4)]
        assert all(b > a for a, b in zip(means, means[1:]))
        assert means[-1] <= limit + 1e-9

    def test_cap_range(self):
        """Should reject caps below 5."""
        with pytest.raises(ParameterRangeError):
            example_ies_law(1.0)
