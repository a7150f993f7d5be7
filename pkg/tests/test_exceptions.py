"""
Tests for the custom exception hierarchy.
"""

import pytest

from uirisk.exceptions import (
    CLIUsageError,
    DiagnosticError,
    DimensionMismatchError,
    DistortionError,
    DistributionError,
    EmptyFamilyError,
    EmptySampleError,
    ExpectationDominatedError,
    InconclusiveAtHorizonError,
    InfeasibleProblemError,
    InvalidCapacityError,
    InvalidDistortionError,
    InvalidProblemError,
    InvalidScenarioError,
    InvalidWeightsError,
    LevelOutOfRangeError,
    MeasureError,
    MixtureMismatchError,
    NonConcaveDistortionError,
    NonFiniteSampleError,
    NonMonotoneDecisionError,
    OptimizationError,
    ParameterRangeError,
    ReportIOError,
    SpecParseError,
    UIPremiseError,
    UIRiskError,
    ValidationError,
)


class TestExceptionHierarchy:
    """Tests that the exception hierarchy is correctly structured."""

    def test_distribution_errors(self):
        """Should place law errors under DistributionError."""
        for exc_class in [EmptySampleError, NonFiniteSampleError, InvalidWeightsError,
                          LevelOutOfRangeError, MixtureMismatchError]:
            assert issubclass(exc_class, DistributionError)
            assert issubclass(exc_class, UIRiskError)

    def test_distortion_errors(self):
        """Should place distortion errors under DistortionError."""
        for exc_class in [InvalidDistortionError, NonConcaveDistortionError]:
            assert issubclass(exc_class, DistortionError)

    def test_measure_errors(self):
        """Should place measure errors under MeasureError."""
        for exc_class in [DimensionMismatchError, InvalidScenarioError, InvalidCapacityError]:
            assert issubclass(exc_class, MeasureError)

    def test_diagnostic_errors(self):
        """Should place UI and convergence failures under DiagnosticError."""
        for exc_class in [EmptyFamilyError, UIPremiseError, ExpectationDominatedError,
                          InconclusiveAtHorizonError]:
            assert issubclass(exc_class, DiagnosticError)

    def test_optimization_errors(self):
        """Should place solver errors under OptimizationError."""
        for exc_class in [InfeasibleProblemError, NonMonotoneDecisionError, InvalidProblemError]:
            assert issubclass(exc_class, OptimizationError)

    def test_validation_errors(self):
        """Should place input errors under ValidationError."""
        for exc_class in [ParameterRangeError, SpecParseError, CLIUsageError]:
            assert issubclass(exc_class, ValidationError)

    def test_io_error_is_base(self):
        """Should keep I/O errors apart from validation errors."""
        assert issubclass(ReportIOError, UIRiskError)
        assert not issubclass(ReportIOError, ValidationError)


class TestExceptionDetails:
    """Tests for exception messages and details."""

    def test_base_exception_with_message(self):
        """Should use the message as the string form."""
        exc = UIRiskError("Something went wrong")
        assert str(exc) == "Something went wrong"
        assert exc.details == {}

    def test_base_exception_with_details(self):
        """Should keep the details dict."""
        exc = UIRiskError("Error", details={"key": "value"})
        assert exc.details == {"key": "value"}

    def test_level_out_of_range(self):
        """Should name the level and the admissible range."""
        exc = LevelOutOfRangeError(1.5, "[0, 1)")
        assert "1.5" in str(exc)
        assert exc.details["admissible"] == "[0, 1)"

    def test_non_finite_sample(self):
        """Should count the bad samples."""
        exc = NonFiniteSampleError(3)
        assert exc.details["count"] == 3

    def test_infeasible_problem(self):
        """Should record both bounds."""
        exc = InfeasibleProblemError(-1.0, 0.5)
        assert exc.details == {"r0": -1.0, "x0": 0.5}

    def test_expectation_dominated(self):
        """Should record the finite slope."""
        exc = ExpectationDominatedError(4.0)
        assert exc.details["slope"] == 4.0

    def test_report_io(self):
        """Should name the path and the reason."""
        exc = ReportIOError("out.json", "permission denied")
        assert "out.json" in str(exc)
        assert exc.details["reason"] == "permission denied"

    def test_catch_by_category(self):
        """Should be catchable by category."""
        with pytest.raises(ValidationError):
            raise ParameterRangeError("eps", -1.0, "[0, inf)")

        with pytest.raises(DiagnosticError):
            raise InconclusiveAtHorizonError("no subsequence")

    def test_catch_by_base(self):
        """All errors should be catchable by UIRiskError."""
        errors = [
            EmptySampleError(),
            NonConcaveDistortionError("power"),
            EmptyFamilyError("x"),
            InfeasibleProblemError(-2.0, 1.0),
            ReportIOError("p", "r"),
        ]
        for error in errors:
            with pytest.raises(UIRiskError):
                raise error
