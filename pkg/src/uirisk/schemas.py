"""
Report and input schemas.

Every report the toolkit emits is a pydantic model, so the CLI serializes
them uniformly. Extended reals serialize as numbers when finite and as the
strings "inf" / "-inf" otherwise.
"""

from typing import Annotated, Any, Literal, Optional, Union

import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, PlainSerializer, PlainValidator, WithJsonSchema

from uirisk.core.extended import ExtendedReal

XReal = Annotated[
    ExtendedReal,
    PlainValidator(ExtendedReal.parse),
    PlainSerializer(lambda v: v.serialize(), return_type=Union[float, str]),
    WithJsonSchema({"anyOf": [{"type": "number"}, {"enum": ["inf", "-inf"]}]}),
]

Verdict = Literal["UI", "not-UI", "inconclusive"]


class DistributionSpec(BaseModel):
    """JSON form of a finite discrete law."""

    atoms: list[float] = Field(..., min_length=1, description="Support points.")
    weights: Optional[list[float]] = Field(None, description="Probabilities; uniform when omitted.")

    model_config = ConfigDict(
        json_schema_extra={"example": {"atoms": [-1.0, 6.0], "weights": [0.9166666666666666, 0.0833333333333333]}}
    )


# ─── Risk measures and folding ─────────────────────────────────


class RiskEvalReport(BaseModel):
    """Value of one risk measure on one position."""

    measure: dict[str, Any]
    value: float
    distribution: Optional[DistributionSpec] = None
    vector: Optional[list[float]] = None

    def table(self) -> pd.DataFrame:
        return pd.DataFrame({"measure": [self.measure.get("kind", "")], "value": [self.value]})


class FoldingComponents(BaseModel):
    folded: XReal = Field(..., description="rho(|X|)")
    positive: XReal = Field(..., description="rho(X)")
    negative: XReal = Field(..., description="rho(-X)")


class FoldingReport(BaseModel):
    """Folding ratio rho(|X|) / max(rho(X), rho(-X)) with its evidence."""

    ratio: XReal
    bound: Optional[XReal] = Field(None, description="Closed-form upper bound when the measure is a distortion.")
    components: FoldingComponents
    witness: Optional[DistributionSpec] = None
    witness_vector: Optional[list[float]] = None
    strategy: Optional[str] = Field(None, description="Search strategy that produced the witness.")
    evaluated: int = Field(1, description="Number of candidate positions evaluated.")


class FamilyFoldBounds(BaseModel):
    """Suprema of rho_h over a family, folded and on both sides."""

    family: str
    sup_folded: float
    sup_positive: float
    sup_negative: float
    bound: XReal
    sandwich_holds: bool


class RatioPoint(BaseModel):
    scale: float
    ratio: XReal


class GalleryEntry(BaseModel):
    """One counterexample: a measure, its witness and the folding ratio."""

    label: str
    measure: dict[str, Any]
    report: FoldingReport
    sequence: list[RatioPoint] = Field(default_factory=list)
    note: str = ""


class GalleryReport(BaseModel):
    entries: list[GalleryEntry]

    def table(self) -> pd.DataFrame:
        return pd.DataFrame(
            {
                "label": [e.label for e in self.entries],
                "ratio": [e.report.ratio.serialize() for e in self.entries],
                "strategy": [e.report.strategy or "" for e in self.entries],
            }
        )


# ─── Uniform integrability ─────────────────────────────────────


class DVPReport(BaseModel):
    """Distortion constructed from a UI family and its certified bound."""

    family: str
    tail_masses: list[float] = Field(..., description="1 - p_n for the finite part of the series.")
    tail_base: float = Field(..., description="Base of the closed-form dyadic remainder.")
    g_one: float
    bound: float = Field(..., description="1 / g(1), bounds sup rho_h(|X|) on the family.")
    attained: float = Field(..., description="max over the horizon of rho_h(|X|).")
    residual: float = Field(..., description="Share of the bound carried by the remainder series.")
    distortion: dict[str, Any]


class UIReport(BaseModel):
    """Tail-envelope evidence and verdict for a family."""

    family: str
    horizon: int
    levels: list[float]
    env_abs: list[float]
    env_pos: list[float]
    env_neg: list[float]
    verdict: Verdict
    consistent: bool = Field(..., description="Folding-bound sandwich holds between the three envelopes.")
    reason: str = ""
    resolved: int = Field(0, description="Leading levels whose tail mass is at least 1/horizon; the verdict uses these.")
    construction: Optional[DVPReport] = None

    def table(self) -> pd.DataFrame:
        return pd.DataFrame(
            {"p": self.levels, "env_abs": self.env_abs, "env_pos": self.env_pos, "env_neg": self.env_neg}
        )


class GrowthReport(BaseModel):
    """Running-supremum envelope sampled at horizon checkpoints."""

    label: str
    checkpoints: list[int]
    envelope: list[float]
    verdict: Verdict
    reason: str = ""


class DistortionVerdict(BaseModel):
    """Outcome of ui_from_distortion."""

    family: str
    verdict: Verdict
    envelopes: list[GrowthReport]
    distortions: list[dict[str, Any]]

    def table(self) -> pd.DataFrame:
        frame = pd.DataFrame({"n": self.envelopes[0].checkpoints})
        for report in self.envelopes:
            frame[report.label] = report.envelope
        return frame


class WitnessReport(BaseModel):
    """Truncated comonotone witness for a measure that is not finite on L1."""

    levels: list[float]
    coefficients: list[float]
    term_values: list[float]
    value: float
    threshold: float
    reached: bool
    mean: float
    distribution: DistributionSpec


class FinitenessReport(BaseModel):
    classification: Literal["expectation-dominated", "not-finite-on-L1"]
    constant: XReal
    distortion: dict[str, Any]
    witness: Optional[WitnessReport] = None


# ─── Convergence ───────────────────────────────────────────────


class CouplingReport(BaseModel):
    """Exact w1 and its comonotone grid realization."""

    w1: float = Field(..., ge=0.0)
    grid_size: int
    grid_distance: float
    discretization_bound: float
    paired: Optional[list[tuple[float, float]]] = None


class LLNRow(BaseModel):
    n: int
    exceedance: dict[str, float]
    rho_env: float
    rhoprime_env: float


class LLNReport(BaseModel):
    generator: str
    replications: int
    seed: int
    rows: list[LLNRow]
    hypothesis_violated: bool
    envelope_verdict: Verdict

    def table(self) -> pd.DataFrame:
        records = []
        for row in self.rows:
            record: dict[str, Any] = {"n": row.n}
            record.update({f"exceed_{k}": v for k, v in row.exceedance.items()})
            record.update({"rho_env": row.rho_env, "rhoprime_env": row.rhoprime_env})
            records.append(record)
        return pd.DataFrame.from_records(records)


class ESConvergenceRow(BaseModel):
    n: int
    p: float
    es_n: float
    es_limit: float
    error: float


class TrendSummary(BaseModel):
    p: float
    monotone_fraction: float = Field(..., description="Share of successive steps where the error does not increase.")
    loglog_slope: Optional[float] = None


class ESConvergenceReport(BaseModel):
    sequence: str
    rows: list[ESConvergenceRow]
    trend: list[TrendSummary]
    hypothesis_ok: bool

    def table(self) -> pd.DataFrame:
        return pd.DataFrame.from_records([row.model_dump() for row in self.rows])


class ConsistencyReport(BaseModel):
    """w1 convergence to a limit against mean convergence and the UI verdict."""

    family: str
    indices: list[int]
    w1: list[float]
    mean_gaps: list[float]
    ui_verdict: Verdict
    holds: bool


class SubsequenceReport(BaseModel):
    family: str
    indices: list[int]
    tolerances: list[float]
    gaps: list[float]
    limit: DistributionSpec
    limit_index: int
    hypothesis_ok: bool


# ─── Investment ────────────────────────────────────────────────


class QuantileDecision(BaseModel):
    """Quantile vector of the decision law on grid midpoints."""

    x: list[float]
    objective: float
    risk: float
    price: float
    feasible_risk: bool
    feasible_price: bool
    gap: float = Field(..., description="Multi-start objective spread plus the gap floor.")
    certified: bool
    start_objectives: list[float] = Field(default_factory=list)

    def table(self) -> pd.DataFrame:
        n = len(self.x)
        return pd.DataFrame({"level": [(i + 0.5) / n for i in range(n)], "quantile": self.x})


class Prop61Step(BaseModel):
    step: int
    support_size: int = Field(..., description="Distinct atoms of the step background law.")
    eps: float
    w1_y: float
    w1_x: float
    delta: float
    objective_sample: float
    lower_bound: float
    holds: bool


class Prop61Report(BaseModel):
    lipschitz: float
    steps: list[Prop61Step]
    gaps: list[float]
    candidates: list[int]
    candidate: int
    candidate_objective: float
    best_known: float
    tolerance: float
    optimal_within_tolerance: bool
    max_violation: float
    all_feasible: bool

    def table(self) -> pd.DataFrame:
        return pd.DataFrame.from_records([s.model_dump() for s in self.steps])
