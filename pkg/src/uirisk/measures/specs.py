"""
JSON specs for distortions and risk measures.

Specs are pydantic models discriminated on "kind". pointwise_min,
normalized_sum and kusuoka_sup nest distortion specs.
"""

from __future__ import annotations

import json
from typing import Annotated, Any, Literal, Optional, Union

from pydantic import BaseModel, Field, TypeAdapter, model_validator
from pydantic import ValidationError as PydanticValidationError

from uirisk.exceptions import SpecParseError


class IdentitySpec(BaseModel):
    kind: Literal["identity"] = "identity"


class ESClipSpec(BaseModel):
    kind: Literal["es_clip"] = "es_clip"
    p: float = Field(..., ge=0.0, lt=1.0)


class PowerSpec(BaseModel):
    kind: Literal["power"] = "power"
    alpha: float = Field(..., gt=0.0, le=1.0)


class IESSpec(BaseModel):
    kind: Literal["ies"] = "ies"


class PiecewiseLinearSpec(BaseModel):
    kind: Literal["piecewise_linear"] = "piecewise_linear"
    knots: list[tuple[float, float]] = Field(..., min_length=2)


class ESLadderSpec(BaseModel):
    kind: Literal["es_ladder"] = "es_ladder"
    base: float = Field(..., gt=0.0, le=1.0)


class NormalizedSumSpec(BaseModel):
    """Either ES levels (shorthand for es_clip components) or nested components."""

    kind: Literal["normalized_sum"] = "normalized_sum"
    coefficients: list[float] = Field(..., min_length=1)
    levels: Optional[list[float]] = None
    components: Optional[list[DistortionSpec]] = None

    @model_validator(mode="after")
    def one_source(self) -> NormalizedSumSpec:
        if (self.levels is None) == (self.components is None):
            raise ValueError("give exactly one of 'levels' or 'components'")
        parts = self.levels if self.levels is not None else self.components
        if len(parts) != len(self.coefficients):  # type: ignore[arg-type]
            raise ValueError("coefficients and components differ in length")
        return self


class PointwiseMinSpec(BaseModel):
    kind: Literal["pointwise_min"] = "pointwise_min"
    members: list[DistortionSpec] = Field(..., min_length=2)


DistortionSpec = Annotated[
    Union[
        IdentitySpec,
        ESClipSpec,
        PowerSpec,
        IESSpec,
        PiecewiseLinearSpec,
        ESLadderSpec,
        NormalizedSumSpec,
        PointwiseMinSpec,
    ],
    Field(discriminator="kind"),
]

NormalizedSumSpec.model_rebuild()
PointwiseMinSpec.model_rebuild()


class EntropicSpec(BaseModel):
    kind: Literal["entropic"] = "entropic"
    beta: float = Field(..., gt=0.0)


class ScenarioSupSpec(BaseModel):
    kind: Literal["scenario_sup"] = "scenario_sup"
    scenarios: list[list[float]] = Field(..., min_length=1)


class CapacitySpec(BaseModel):
    """Set function indexed by bitmask over the cells: values[mask] = nu(A)."""

    kind: Literal["capacity"] = "capacity"
    values: list[float] = Field(..., min_length=2)


class KusuokaSupSpec(BaseModel):
    kind: Literal["kusuoka_sup"] = "kusuoka_sup"
    members: list[DistortionSpec] = Field(..., min_length=1)


MeasureSpec = Annotated[
    Union[
        IdentitySpec,
        ESClipSpec,
        PowerSpec,
        IESSpec,
        PiecewiseLinearSpec,
        ESLadderSpec,
        NormalizedSumSpec,
        PointwiseMinSpec,
        EntropicSpec,
        ScenarioSupSpec,
        CapacitySpec,
        KusuokaSupSpec,
    ],
    Field(discriminator="kind"),
]

KusuokaSupSpec.model_rebuild()

_distortion_adapter: TypeAdapter = TypeAdapter(DistortionSpec)
_measure_adapter: TypeAdapter = TypeAdapter(MeasureSpec)


def _validate(adapter: TypeAdapter, raw: str | dict[str, Any], what: str) -> Any:
    try:
        if isinstance(raw, str):
            return adapter.validate_python(json.loads(raw))
        return adapter.validate_python(raw)
    except json.JSONDecodeError as e:
        raise SpecParseError(message=f"malformed {what} JSON: {e.msg}", details={"pos": e.pos}) from e
    except PydanticValidationError as e:
        first = e.errors()[0]
        location = ".".join(str(part) for part in first["loc"])
        raise SpecParseError(
            message=f"invalid {what} spec at '{location}': {first['msg']}",
            details={"errors": len(e.errors())},
        ) from e


def parse_distortion_spec(raw: str | dict[str, Any]) -> Any:
    return _validate(_distortion_adapter, raw, "distortion")


def parse_measure_spec(raw: str | dict[str, Any]) -> Any:
    return _validate(_measure_adapter, raw, "measure")
