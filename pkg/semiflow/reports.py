"""
Machine-readable report envelopes.

Reports are JSON objects ``{"header": ..., "payload": ...}``. Only the header
carries a timestamp, so payloads are byte-identical across reruns with the
same configuration and seed.
"""

import json
import logging
import math
from dataclasses import asdict, is_dataclass
from datetime import datetime, timezone
from typing import Any, Dict, Optional, TextIO

import numpy as np

from . import __version__
from .cplane import is_infinity

logger = logging.getLogger(__name__)

TOOL = "semiflow"


def to_jsonable(value: Any) -> Any:
    """
    Convert a report value into plain JSON types.

    Complex numbers become ``[re, im]``, the point at infinity becomes
    ``"infinity"`` and non-finite reals become ``"inf"``, ``"-inf"`` or ``"nan"``.

    Example:
        >>> to_jsonable({"z": 1 + 2j, "x": float("inf")})
        {'z': [1.0, 2.0], 'x': 'inf'}
    """
    if is_infinity(value):
        return "infinity"
    if hasattr(value, "to_dict"):
        return to_jsonable(value.to_dict())
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        x = float(value)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    if isinstance(value, (complex, np.complexfloating)):
        return [to_jsonable(value.real), to_jsonable(value.imag)]
    if isinstance(value, np.ndarray):
        return [to_jsonable(v) for v in value.tolist()]
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if is_dataclass(value) and not isinstance(value, type):
        return to_jsonable(asdict(value))
    if value is None or isinstance(value, str):
        return value
    return str(value)


def envelope(command: str, payload: Any, timestamp: Optional[str] = None) -> Dict[str, Any]:
    """Wrap a payload with the tool header."""
    if timestamp is None:
        timestamp = datetime.now(timezone.utc).isoformat(timespec="seconds")
    return {
        "header": {
            "tool": TOOL,
            "version": __version__,
            "command": command,
            "timestamp": timestamp,
        },
        "payload": to_jsonable(payload),
    }


def dumps_report(command: str, payload: Any, timestamp: Optional[str] = None) -> str:
    """Serialise a report envelope with sorted keys and a two-space indent."""
    document = envelope(command, payload, timestamp)
    return json.dumps(document, sort_keys=True, indent=2, allow_nan=False) + "\n"


def dumps_payload(payload: Any) -> str:
    """Serialise a payload alone, as it appears inside the envelope."""
    return json.dumps(to_jsonable(payload), sort_keys=True, indent=2, allow_nan=False)


def write_report(
    command: str, payload: Any, out: Optional[str] = None, stream: Optional[TextIO] = None
) -> str:
    """
    Write a report to ``out`` or, failing that, to ``stream``.

    Returns:
        The serialised report
    """
    text = dumps_report(command, payload)
    if out:
        with open(out, "w") as handle:
            handle.write(text)
        logger.info(f"Report written to {out}")
    elif stream is not None:
        stream.write(text)
    return text


def error_payload(error: BaseException, **extra: Any) -> Dict[str, Any]:
    """
    Payload of a report for a command that raised.

    Example:
        >>> error_payload(ValueError("bad"))
        {'error': {'type': 'ValueError', 'message': 'bad', 'point': None}, 'passed': False}
    """
    payload: Dict[str, Any] = {
        "error": {
            "type": type(error).__name__,
            "message": str(error),
            "point": getattr(error, "point", None),
        },
        "passed": False,
    }
    payload.update(extra)
    return payload


def number(x: float) -> str:
    """CSV number format: 17 significant digits."""
    return format(float(x), ".17g")


__all__ = [
    "TOOL",
    "to_jsonable",
    "envelope",
    "dumps_report",
    "dumps_payload",
    "write_report",
    "error_payload",
    "number",
]
