"""Helpers shared by the check suites."""

import logging
import time
from typing import Any, Callable, Dict, Optional, Tuple, Union

from engine.errors import QuantizationError
from models.results import CheckReport, CheckStatus

logger = logging.getLogger(__name__)

CheckBody = Callable[[], Tuple[Dict[str, Any], Union[bool, CheckStatus]]]


def option(args, name: str, default):
    """Suite option from the parsed arguments, or the default when absent (``all`` runs)."""
    value = getattr(args, name, None)
    return default if value is None else value


def run_check(
    check_id: str,
    inputs: Dict[str, Any],
    body: CheckBody,
    tolerances: Optional[Dict[str, float]] = None
) -> CheckReport:
    """Run one check body and wrap its outcome.

    ``body`` returns (outputs, verdict); a QuantizationError becomes a
    failed report carrying the message.
    """
    start = time.perf_counter()
    message = None
    try:
        outputs, verdict = body()
        if isinstance(verdict, CheckStatus):
            status = verdict
        else:
            status = CheckStatus.PASS if verdict else CheckStatus.FAIL
    except QuantizationError as e:
        outputs, status, message = {}, CheckStatus.FAIL, f"{type(e).__name__}: {e}"
        logger.warning("%s failed: %s", check_id, message)

    elapsed = (time.perf_counter() - start) * 1000.0
    if status == CheckStatus.WARN:
        logger.warning("%s ended with a warning", check_id)
    logger.info("%s: %s (%.0f ms)", check_id, status.value, elapsed)
    return CheckReport(
        check_id=check_id,
        inputs={k: str(v) for k, v in inputs.items()},
        outputs=outputs,
        status=status,
        tolerances=dict(tolerances or {}),
        elapsed_ms=elapsed,
        message=message
    )
