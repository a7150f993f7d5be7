"""Command-line surface and report serialization."""

from uirisk.cli.reports import ReportWriter

__all__ = ["ReportWriter"]
