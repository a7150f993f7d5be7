"""
Custom exception hierarchy for uirisk.

Provides specific exception types for each subsystem,
enabling targeted error handling and CLI exit codes.
"""


class UIRiskError(Exception):
    """Base exception for all uirisk errors."""

    def __init__(self, message: str = "", details: dict | None = None):
        self.message = message
        self.details = details or {}
        super().__init__(self.message)


# --- Distribution Exceptions ---


class DistributionError(UIRiskError):
    """Base exception for distribution construction and queries."""
    pass


class EmptySampleError(DistributionError):
    """Raised when a sample or atom list is empty."""

    def __init__(self, source: str = "sample"):
        super().__init__(message="empty sample", details={"source": source})


class NonFiniteSampleError(DistributionError):
    """Raised when a sample contains NaN or infinite values."""

    def __init__(self, count: int):
        super().__init__(
            message=f"non-finite sample ({count} non-finite values)",
            details={"count": count},
        )


class InvalidWeightsError(DistributionError):
    """Raised when weights are negative or do not sum to one."""
    pass


class LevelOutOfRangeError(DistributionError):
    """Raised when a quantile or ES level lies outside its admissible range."""

    def __init__(self, level: float, admissible: str):
        super().__init__(
            message=f"level out of range: {level!r} not in {admissible}",
            details={"level": level, "admissible": admissible},
        )


class MixtureMismatchError(DistributionError):
    """Raised when mixture components and weights disagree in length."""
    pass


# --- Distortion Exceptions ---


class DistortionError(UIRiskError):
    """Base exception for distortion functions."""
    pass


class InvalidDistortionError(DistortionError):
    """Raised when h fails h(0)=0, h(1)=1 or monotonicity."""
    pass


class NonConcaveDistortionError(DistortionError):
    """Raised when an operation requires a concave distortion."""

    def __init__(self, kind: str):
        super().__init__(
            message=f"slope limit undefined for non-concave h ({kind})",
            details={"kind": kind},
        )


# --- Risk Measure Exceptions ---


class MeasureError(UIRiskError):
    """Base exception for risk-measure evaluation."""
    pass


class DimensionMismatchError(MeasureError):
    """Raised when a position vector does not match the probability space."""

    def __init__(self, expected: int, got: int):
        super().__init__(
            message=f"dimension mismatch: expected {expected} cells, got {got}",
            details={"expected": expected, "got": got},
        )


class InvalidScenarioError(MeasureError):
    """Raised when a scenario is not a probability vector."""
    pass


class InvalidCapacityError(MeasureError):
    """Raised when a set function is not a normalized submodular capacity."""
    pass


# --- Diagnostic Exceptions ---


class DiagnosticError(UIRiskError):
    """Base exception for uniform-integrability and convergence diagnostics."""
    pass


class EmptyFamilyError(DiagnosticError):
    """Raised when a distribution family has no members within the horizon."""

    def __init__(self, label: str):
        super().__init__(message=f"empty family '{label}'", details={"label": label})


class UIPremiseError(DiagnosticError):
    """Raised when a construction needs a uniformly integrable family."""

    def __init__(self, label: str, reason: str):
        super().__init__(
            message=f"family fails UI premise: {label} ({reason})",
            details={"label": label, "reason": reason},
        )


class ExpectationDominatedError(DiagnosticError):
    """Raised when a UI test distortion has a finite slope limit."""

    def __init__(self, slope: float):
        super().__init__(
            message=f"test distortion is expectation-dominated (slope limit {slope:g})",
            details={"slope": slope},
        )


class InconclusiveAtHorizonError(DiagnosticError):
    """Raised when no witness or subsequence is found within the horizon."""
    pass


# --- Optimization Exceptions ---


class OptimizationError(UIRiskError):
    """Base exception for the investment solver."""
    pass


class InfeasibleProblemError(OptimizationError):
    """Raised when the risk-and-price feasible set is empty."""

    def __init__(self, r0: float, x0: float):
        super().__init__(
            message=f"empty feasible set A (r0={r0:g}, x0={x0:g})",
            details={"r0": r0, "x0": x0},
        )


class NonMonotoneDecisionError(OptimizationError):
    """Raised when a quantile decision vector is not nondecreasing."""
    pass


class InvalidProblemError(OptimizationError):
    """Raised when an investment problem is malformed."""
    pass


# --- Validation Exceptions ---


class ValidationError(UIRiskError):
    """Base exception for input validation errors."""
    pass


class ParameterRangeError(ValidationError):
    """Raised when a numeric parameter lies outside its admissible range."""

    def __init__(self, name: str, value: object, admissible: str):
        super().__init__(
            message=f"parameter '{name}'={value!r} outside {admissible}",
            details={"name": name, "value": value, "admissible": admissible},
        )


class SpecParseError(ValidationError):
    """Raised when a JSON measure, distortion or problem spec is malformed."""
    pass


class CLIUsageError(ValidationError):
    """Raised for unknown flags, commands or malformed option values."""
    pass


# --- I/O Exceptions ---


class ReportIOError(UIRiskError):
    """Raised when a report or input file cannot be read or written."""

    def __init__(self, path: str, reason: str):
        super().__init__(
            message=f"I/O failure on '{path}': {reason}",
            details={"path": path, "reason": reason},
        )
