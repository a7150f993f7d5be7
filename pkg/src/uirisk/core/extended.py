"""
Extended real numbers.

Slope limits, folding bounds and folding ratios may legitimately be
infinite. They are carried as ExtendedReal values, a three-state type
(finite, +inf, -inf), rather than sentinel floats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import total_ordering
from typing import Literal, Union

Kind = Literal["finite", "+inf", "-inf"]


@total_ordering
@dataclass(frozen=True)
class ExtendedReal:
    """A value of the extended real line."""

    kind: Kind
    value: float = 0.0

    def __post_init__(self) -> None:
        if self.kind == "finite" and not math.isfinite(self.value):
            raise ValueError(f"finite ExtendedReal needs a finite value, got {self.value!r}")

    # ─── Constructors ──────────────────────────────────────────

    @classmethod
    def finite(cls, value: float) -> ExtendedReal:
        return cls("finite", float(value))

    @classmethod
    def from_float(cls, value: float) -> ExtendedReal:
        """Lift a float, mapping float infinities to the infinite states."""
        if math.isnan(value):
            raise ValueError("NaN has no extended-real counterpart")
        if value == math.inf:
            return POS_INF
        if value == -math.inf:
            return NEG_INF
        return cls("finite", float(value))

    @classmethod
    def parse(cls, raw: Union[str, float, int, ExtendedReal]) -> ExtendedReal:
        """Accept the serialized forms 'inf' / '-inf' and plain numbers."""
        if isinstance(raw, ExtendedReal):
            return raw
        if isinstance(raw, str):
            token = raw.strip().lower()
            if token in ("inf", "+inf", "infinity"):
                return POS_INF
            if token in ("-inf", "-infinity"):
                return NEG_INF
            return cls.finite(float(token))
        return cls.from_float(float(raw))

    # ─── Queries ───────────────────────────────────────────────

    @property
    def is_finite(self) -> bool:
        return self.kind == "finite"

    @property
    def is_pos_inf(self) -> bool:
        return self.kind == "+inf"

    def to_float(self) -> float:
        """Lower to an IEEE float at output boundaries."""
        if self.kind == "+inf":
            return math.inf
        if self.kind == "-inf":
            return -math.inf
        return self.value

    def serialize(self) -> Union[float, str]:
        """JSON form: number when finite, 'inf' / '-inf' otherwise."""
        if self.kind == "finite":
            return self.value
        return "inf" if self.kind == "+inf" else "-inf"

    # ─── Ordering and arithmetic ───────────────────────────────

    def _rank(self) -> tuple[int, float]:
        if self.kind == "-inf":
            return (-1, 0.0)
        if self.kind == "+inf":
            return (1, 0.0)
        return (0, self.value)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, float)):
            other = ExtendedReal.from_float(float(other))
        if not isinstance(other, ExtendedReal):
            return NotImplemented
        return self._rank() == other._rank()

    def __lt__(self, other: object) -> bool:
        if isinstance(other, (int, float)):
            other = ExtendedReal.from_float(float(other))
        if not isinstance(other, ExtendedReal):
            return NotImplemented
        return self._rank() < other._rank()

    def __hash__(self) -> int:
        return hash(self._rank())

    def __neg__(self) -> ExtendedReal:
        if self.kind == "+inf":
            return NEG_INF
        if self.kind == "-inf":
            return POS_INF
        return ExtendedReal.finite(-self.value)

    def __str__(self) -> str:
        if self.kind == "finite":
            return f"{self.value:.10g}"
        return "inf" if self.kind == "+inf" else "-inf"


POS_INF = ExtendedReal("+inf")
NEG_INF = ExtendedReal("-inf")


def xmax(*values: ExtendedReal) -> ExtendedReal:
    return max(values)


def ratio(numerator: ExtendedReal, denominator: ExtendedReal, zero_tol: float = 0.0) -> ExtendedReal:
    """
    Quotient with the folding conventions.

    inf/inf = 1, 0/0 = 1, positive/0 = inf. A denominator within zero_tol
    of zero (scaled by the numerator) counts as zero.
    """
    if not numerator.is_finite and not denominator.is_finite:
        return ExtendedReal.finite(1.0)
    if not numerator.is_finite:
        return numerator if denominator.to_float() >= 0 else -numerator
    if not denominator.is_finite:
        return ExtendedReal.finite(0.0)
    num, den = numerator.value, denominator.value
    scale = max(1.0, abs(num))
    if abs(den) <= zero_tol * scale:
        if abs(num) <= zero_tol * scale:
            return ExtendedReal.finite(1.0)
        return POS_INF if num > 0 else NEG_INF
    return ExtendedReal.finite(num / den)
