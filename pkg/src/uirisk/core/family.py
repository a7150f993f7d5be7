"""
Indexed families of distributions.

A family is either an explicit list of laws or a deterministic generator
n -> law for n = 1..N. Members are produced lazily, so generator-backed
families of size 10^4 and more never materialize at once.
"""

from __future__ import annotations

from typing import Callable, Iterator, Sequence

from uirisk.core.distribution import DiscreteDistribution
from uirisk.exceptions import EmptyFamilyError, ParameterRangeError


class DistributionFamily:
    """A finite-horizon indexed collection of DiscreteDistributions."""

    def __init__(
        self,
        label: str,
        members: Sequence[DiscreteDistribution] | None = None,
        generator: Callable[[int], DiscreteDistribution] | None = None,
        horizon: int | None = None,
    ):
        if (members is None) == (generator is None):
            raise ParameterRangeError("members/generator", None, "exactly one of the two")
        self.label = label
        self._members = list(members) if members is not None else None
        self._generator = generator
        if self._members is not None:
            self.horizon = len(self._members) if horizon is None else min(horizon, len(self._members))
        else:
            if horizon is None or horizon < 1:
                raise ParameterRangeError("horizon", horizon, "positive integer for generator families")
            self.horizon = horizon
        if self.horizon < 1:
            raise EmptyFamilyError(label)

    @classmethod
    def of(cls, label: str, *members: DiscreteDistribution) -> DistributionFamily:
        return cls(label, members=list(members))

    @property
    def is_generated(self) -> bool:
        return self._generator is not None

    def member(self, n: int) -> DiscreteDistribution:
        """The n-th member, 1-based."""
        if not 1 <= n <= self.horizon:
            raise ParameterRangeError("n", n, f"[1, {self.horizon}]")
        if self._members is not None:
            return self._members[n - 1]
        return self._generator(n)  # type: ignore[misc]

    def indices(self) -> range:
        return range(1, self.horizon + 1)

    def with_horizon(self, horizon: int) -> DistributionFamily:
        if self._members is not None:
            return DistributionFamily(self.label, members=self._members, horizon=horizon)
        return DistributionFamily(self.label, generator=self._generator, horizon=horizon)

    def __iter__(self) -> Iterator[DiscreteDistribution]:
        for n in self.indices():
            yield self.member(n)

    def __len__(self) -> int:
        return self.horizon

    def __repr__(self) -> str:
        kind = "generated" if self.is_generated else "explicit"
        return f"DistributionFamily({self.label!r}, {kind}, horizon={self.horizon})"
