"""Distortion functions, Choquet integrals and the risk-measure union."""

from uirisk.measures.choquet import (
    choquet,
    choquet_batch,
    choquet_quantile_form,
    es,
    es_folded,
    es_sup_bruteforce,
    ies_direct,
)
from uirisk.measures.distortion import (
    IES,
    DistortionFunction,
    ESClip,
    ESLadder,
    Identity,
    NormalizedSum,
    PiecewiseLinear,
    PointwiseMin,
    Power,
    distortion_from_spec,
    dual,
    is_Dc,
    slope_limit,
)
from uirisk.measures.measures import (
    Capacity,
    Distortion,
    Entropic,
    KusuokaSup,
    RiskMeasure,
    ScenarioSup,
    certify_domination,
    evaluate,
    expectation_domination_constant,
    measure_from_spec,
)

__all__ = [
    "IES",
    "Capacity",
    "Distortion",
    "DistortionFunction",
    "ESClip",
    "ESLadder",
    "Entropic",
    "Identity",
    "KusuokaSup",
    "NormalizedSum",
    "PiecewiseLinear",
    "PointwiseMin",
    "Power",
    "RiskMeasure",
    "ScenarioSup",
    "certify_domination",
    "choquet",
    "choquet_batch",
    "choquet_quantile_form",
    "distortion_from_spec",
    "dual",
    "es",
    "es_folded",
    "es_sup_bruteforce",
    "evaluate",
    "expectation_domination_constant",
    "ies_direct",
    "is_Dc",
    "measure_from_spec",
    "slope_limit",
]
