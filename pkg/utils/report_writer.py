"""JSON report and CSV table writers."""

import json
import logging
import math
import os
import tempfile
from enum import Enum
from pathlib import Path
from typing import Any, List, Union

import numpy as np
import pandas as pd

from models.results import CheckReport

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1


def _format_float(value: float):
    if not math.isfinite(value):
        return None
    # 17 significant digits round-trip any double
    return float(f"{value:.17g}")


def to_jsonable(value: Any) -> Any:
    """Recursively convert numpy, complex and enum values into plain JSON types.

    Complex numbers become ``{"re": ..., "im": ...}``; NaN and infinities become null.
    """
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return _format_float(float(value))
    if isinstance(value, (complex, np.complexfloating)):
        return {'re': _format_float(float(value.real)), 'im': _format_float(float(value.imag))}
    if isinstance(value, np.ndarray):
        return [to_jsonable(v) for v in value.tolist()]
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if hasattr(value, 'to_dict'):
        return to_jsonable(value.to_dict())
    return value


def _atomic_write(path: Path, text: str):
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, 'w', encoding='utf-8') as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.remove(tmp)
        raise


def build_report(reports: List[CheckReport], hbar: float) -> dict:
    return {
        'schema': SCHEMA_VERSION,
        'hbar': hbar,
        'passed': all(r.passed for r in reports),
        'checks': [r.to_dict() for r in reports],
    }


def write_report(path: Union[str, Path], reports: List[CheckReport], hbar: float = 1.0) -> Path:
    """Write the JSON report atomically.

    Args:
        path: Output file
        reports: Checks in output order
        hbar: Planck constant used for the run

    Returns:
        Path written
    """
    path = Path(path)
    document = to_jsonable(build_report(reports, hbar))
    _atomic_write(path, json.dumps(document, indent=2, sort_keys=True, allow_nan=False) + "\n")
    logger.info("wrote report with %d checks to %s", len(reports), path)
    return path


def write_table(directory: Union[str, Path], name: str, table: pd.DataFrame) -> Path:
    """Write a DataFrame as ``<directory>/<name>.csv`` with a header row."""
    path = Path(directory) / f"{name}.csv"
    _atomic_write(path, table.to_csv(index=False, float_format='%.17g'))
    logger.info("wrote table %s (%d rows)", path, len(table))
    return path
