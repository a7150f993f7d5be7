"""uirisk: distortion risk measures, folding scores and uniform-integrability diagnostics."""

__version__ = "0.1.0"
