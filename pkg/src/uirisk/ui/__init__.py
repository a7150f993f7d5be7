"""Uniform-integrability diagnostics, distortion construction and finiteness classification."""

from uirisk.ui.dvp import dvp_distortion, family_tail_sups
from uirisk.ui.envelope import (
    dvp_phi_check,
    dyadic_grid,
    parse_grid,
    phi_envelope,
    tail_envelope,
    tail_expectation_envelope,
    ui_from_distortion,
)
from uirisk.ui.families import load_family
from uirisk.ui.finiteness import classify_finiteness, comonotone_witness, example_ies_law, ies_divergence_series
from uirisk.ui.monitor import GrowthMonitor

__all__ = [
    "GrowthMonitor",
    "classify_finiteness",
    "comonotone_witness",
    "dvp_distortion",
    "dvp_phi_check",
    "dyadic_grid",
    "example_ies_law",
    "family_tail_sups",
    "ies_divergence_series",
    "load_family",
    "parse_grid",
    "phi_envelope",
    "tail_envelope",
    "tail_expectation_envelope",
    "ui_from_distortion",
]
