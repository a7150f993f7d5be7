"""
Report serialization.

Reports render as JSON (sorted keys, two-space indent) or as CSV through
their tabular view (RFC-4180, CRLF line ends). Files are written under a
file lock so concurrent runs never interleave bytes. Nothing time-dependent
goes into a report, so identical runs produce identical files.
"""

import json
from pathlib import Path
from typing import Literal

from filelock import FileLock, Timeout
from pydantic import BaseModel

from uirisk.config import settings
from uirisk.exceptions import CLIUsageError, ReportIOError
from uirisk.logging_config import get_logger

logger = get_logger(__name__)

ReportFormat = Literal["json", "csv"]


class ReportWriter:
    """
    Renders reports and writes them to disk.

    Relative paths resolve against the configured output directory:
        output_dir/
            ui_check.json
            ui_check.json.lock
    """

    FORMATS = ("json", "csv")

    def __init__(self, output_dir: str | Path | None = None, lock_timeout: float = 5.0):
        self.output_dir = Path(output_dir or settings.paths.output_dir)
        self.lock_timeout = lock_timeout

    def render(self, report: BaseModel, fmt: ReportFormat = "json") -> str:
        if fmt == "json":
            return json.dumps(report.model_dump(mode="json"), sort_keys=True, indent=2, ensure_ascii=False) + "\n"
        if fmt == "csv":
            table = getattr(report, "table", None)
            if table is None:
                raise CLIUsageError(
                    message=f"{type(report).__name__} has no tabular form; use --format json",
                    details={"report": type(report).__name__},
                )
            return table().to_csv(index=False, lineterminator="\r\n")
        raise CLIUsageError(message=f"unknown format '{fmt}'", details={"format": fmt, "allowed": self.FORMATS})

    def _path_for(self, target: str | Path) -> Path:
        path = Path(target)
        return path if path.is_absolute() else self.output_dir / path

    def _lock_for(self, path: Path) -> FileLock:
        return FileLock(str(path) + ".lock", timeout=self.lock_timeout)

    def write(self, report: BaseModel, target: str | Path, fmt: ReportFormat = "json") -> Path:
        """Render and write the report; returns the resolved path."""
        text = self.render(report, fmt)
        path = self._path_for(target)
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            with self._lock_for(path):
                # newline="" keeps the CRLF row ends of CSV output intact
                with path.open("w", encoding="utf-8", newline="") as handle:
                    handle.write(text)
        except Timeout as e:
            raise ReportIOError(str(path), "report file is locked by another run") from e
        except OSError as e:
            raise ReportIOError(str(path), e.strerror or str(e)) from e
        logger.info("Wrote %s report to %s", fmt, path)
        return path

    def read(self, target: str | Path) -> dict:
        """Load a JSON report back as a plain dict."""
        path = self._path_for(target)
        try:
            with self._lock_for(path):
                return json.loads(path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as e:
            raise ReportIOError(str(path), str(e)) from e
