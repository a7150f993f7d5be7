"""
Distribution ingestion.

CSV: one sample per line, or two columns "atom,weight" (header optional).
JSON: {"atoms": [...], "weights": [...]}, either a file or an inline string.
"""

import json
from pathlib import Path

import numpy as np
import pandas as pd
from pydantic import ValidationError as PydanticValidationError

from uirisk.core.distribution import DiscreteDistribution, from_samples
from uirisk.exceptions import ReportIOError, SpecParseError
from uirisk.logging_config import get_logger
from uirisk.schemas import DistributionSpec

logger = get_logger(__name__)


def distribution_from_spec(spec: DistributionSpec) -> DiscreteDistribution:
    return DiscreteDistribution(spec.atoms, spec.weights)


def distribution_to_spec(X: DiscreteDistribution) -> DistributionSpec:
    return DistributionSpec(atoms=X.atoms.tolist(), weights=X.weights.tolist())


def parse_distribution_json(text: str) -> DiscreteDistribution:
    try:
        spec = DistributionSpec.model_validate_json(text)
    except PydanticValidationError as e:
        raise SpecParseError(
            message=f"malformed distribution JSON: {e.errors()[0]['msg']}",
            details={"errors": len(e.errors())},
        ) from e
    return distribution_from_spec(spec)


def read_distribution_csv(path: str | Path) -> DiscreteDistribution:
    try:
        frame = pd.read_csv(path, header=None, comment="#", skip_blank_lines=True)
    except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise ReportIOError(str(path), str(e)) from e

    # Drop a textual header row such as "atom,weight"
    first = pd.to_numeric(frame.iloc[0], errors="coerce")
    if first.isna().any():
        frame = frame.iloc[1:]
    values = frame.apply(pd.to_numeric, errors="coerce")
    if values.isna().any().any():
        raise SpecParseError(message=f"non-numeric entries in {path}", details={"path": str(path)})

    if values.shape[1] == 1:
        return from_samples(values.iloc[:, 0].to_numpy(dtype=float))
    if values.shape[1] == 2:
        return DiscreteDistribution(values.iloc[:, 0].to_numpy(dtype=float), values.iloc[:, 1].to_numpy(dtype=float))
    raise SpecParseError(
        message=f"expected 1 or 2 columns in {path}, found {values.shape[1]}",
        details={"path": str(path), "columns": int(values.shape[1])},
    )


def load_distribution(source: str) -> DiscreteDistribution:
    """Load a law from a CSV/JSON file path or an inline JSON string."""
    stripped = source.strip()
    if stripped.startswith("{"):
        return parse_distribution_json(stripped)
    path = Path(source)
    if not path.exists():
        raise ReportIOError(source, "no such file")
    logger.debug("Loading distribution from %s", path)
    if path.suffix.lower() == ".json":
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as e:
            raise ReportIOError(source, str(e)) from e
        return parse_distribution_json(text)
    return read_distribution_csv(path)


def load_vector(source: str) -> np.ndarray:
    """Position vector on a finite space: '1,0,-1', a JSON list or a one-column CSV."""
    stripped = source.strip()
    if stripped.startswith("["):
        try:
            return np.asarray(json.loads(stripped), dtype=float)
        except (json.JSONDecodeError, TypeError, ValueError) as e:
            raise SpecParseError(message=f"malformed vector: {e}") from e
    path = Path(source)
    if path.exists():
        try:
            frame = pd.read_csv(path, header=None)
        except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError) as e:
            raise ReportIOError(source, str(e)) from e
        return frame.iloc[:, 0].to_numpy(dtype=float)
    try:
        return np.asarray([float(v) for v in stripped.split(",") if v.strip()], dtype=float)
    except ValueError as e:
        raise SpecParseError(message=f"malformed vector '{source}'") from e
