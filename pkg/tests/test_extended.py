"""
Tests for extended-real arithmetic.
"""

import math

import pytest

from uirisk.core.extended import NEG_INF, POS_INF, ExtendedReal, ratio, xmax


class TestExtendedReal:
    """Reals with signed infinities."""

    def test_from_float(self):
        """Should map float infinities to the shared constants."""
        assert ExtendedReal.from_float(math.inf) is POS_INF
        assert ExtendedReal.from_float(-math.inf) is NEG_INF
        assert ExtendedReal.from_float(2.5).value == 2.5

    def test_nan_rejected(self):
        """Should reject NaN."""
        with pytest.raises(ValueError):
            ExtendedReal.from_float(math.nan)

    def test_parse_serialized_forms(self):
        """Should parse "inf", "-inf" and numbers."""
        assert ExtendedReal.parse("inf") == POS_INF
        assert ExtendedReal.parse("-inf") == NEG_INF
        assert ExtendedReal.parse("3") == 3.0

    def test_serialize(self):
        """Should write infinities as strings and finite values as floats."""
        assert POS_INF.serialize() == "inf"
        assert ExtendedReal.finite(2.0).serialize() == 2.0

    def test_ordering(self):
        """Should order the infinities around every finite value."""
        assert NEG_INF < ExtendedReal.finite(-1e300) < ExtendedReal.finite(0.0) < POS_INF
        assert xmax(ExtendedReal.finite(3.0), POS_INF, ExtendedReal.finite(7.0)) == POS_INF

    def test_negation(self):
        """Should swap the infinities under negation."""
        assert -POS_INF == NEG_INF
        assert -ExtendedReal.finite(2.0) == -2.0


class TestRatio:
    """Folding-ratio quotient conventions."""

    def test_finite(self):
        """Should divide finite values."""
        assert ratio(ExtendedReal.finite(6.0), ExtendedReal.finite(2.0)) == 3.0

    def test_zero_over_zero_is_one(self):
        """Should treat 0/0 as 1."""
        assert ratio(ExtendedReal.finite(0.0), ExtendedReal.finite(0.0)) == 1.0

    def test_positive_over_zero_is_inf(self):
        """Should treat a positive value over 0 as infinite."""
        assert ratio(ExtendedReal.finite(1.0), ExtendedReal.finite(0.0)) == POS_INF

    def test_inf_over_inf_is_one(self):
        """Should treat inf/inf as 1."""
        assert ratio(POS_INF, POS_INF) == 1.0

    def test_near_zero_denominator(self):
        """Should treat a denominator below the tolerance as zero."""
        assert ratio(ExtendedReal.finite(1.0), ExtendedReal.finite(1e-15), zero_tol=1e-12) == POS_INF
