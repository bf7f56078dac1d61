"""
Run reports written by every CLI command
"""

import json
import math
from typing import Any, Dict, Optional

import numpy as np
from pydantic import BaseModel, Field

from src import __version__

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_NEGATIVE = 2


def _jsonable(value: Any) -> Any:
    """Plain JSON values; non-finite floats become null"""
    if isinstance(value, np.ndarray):
        return _jsonable(value.tolist())
    if isinstance(value, np.generic):
        return _jsonable(value.item())
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


class RunReport(BaseModel):
    command: Dict[str, Any]
    instance_digest: Optional[str] = None
    payload: Dict[str, Any] = Field(default_factory=dict)
    exit_code: int = EXIT_OK
    wall_time_seconds: Optional[float] = None
    version: str = __version__

    def to_json(self) -> str:
        data = _jsonable(self.model_dump())
        return json.dumps(data, sort_keys=True, indent=2, allow_nan=False) + "\n"


def error_report(command: Dict[str, Any], error: Exception) -> RunReport:
    detail: Dict[str, Any] = {"type": type(error).__name__, "message": str(error)}
    for attribute in ("position", "point", "image", "bound", "iterations"):
        if getattr(error, attribute, None) is not None:
            detail[attribute] = getattr(error, attribute)
    return RunReport(command=command, payload={"error": detail}, exit_code=EXIT_ERROR)
