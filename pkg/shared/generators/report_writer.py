"""
Emisores de artefactos de texto: CSV de barridos y JSON de informes
"""

import csv
import io
import json
import math
from fractions import Fraction
from pathlib import Path
from typing import Any, Iterable

import numpy as np
from pydantic import BaseModel

from ..models.moments import ScanRow

SCAN_COLUMNS = ["x", "beta", "t", "theta1", "theta2", "W", "two_w", "gap"]
MISSING = "NA"


class ReportEncoder(json.JSONEncoder):
    """JSON encoder para modelos pydantic, racionales y escalares numpy"""

    def default(self, obj):
        if isinstance(obj, BaseModel):
            return obj.model_dump()
        if isinstance(obj, Fraction):
            return str(obj)
        if isinstance(obj, np.integer):
            return int(obj)
        if isinstance(obj, np.floating):
            return float(obj)
        if isinstance(obj, np.ndarray):
            return obj.tolist()
        if isinstance(obj, Path):
            return str(obj)
        return super().default(obj)


def _scrub(value: Any) -> Any:
    # JSON estricto: NaN e infinitos pasan a null
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, dict):
        return {k: _scrub(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_scrub(v) for v in value]
    return value


def to_json(payload: Any) -> str:
    """
    Serializa un resultado de forma determinista

    Args:
        payload: Modelo pydantic, dict o lista

    Returns:
        JSON con claves en orden de inserción, sangría 2 y salto final
    """
    if isinstance(payload, BaseModel):
        payload = payload.model_dump()
    payload = json.loads(json.dumps(payload, cls=ReportEncoder))
    return json.dumps(_scrub(payload), ensure_ascii=False, indent=2, allow_nan=False) + "\n"


def _cell(value: Any) -> str:
    if value is None:
        return MISSING
    return repr(float(value))


def scan_to_csv(rows: Iterable[ScanRow]) -> str:
    """
    CSV del barrido con cabecera x,beta,t,theta1,theta2,W,two_w,gap.

    Las filas fallidas llevan NA en las columnas numéricas que no tienen.
    """
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(SCAN_COLUMNS)
    for row in rows:
        writer.writerow([_cell(getattr(row, column)) for column in SCAN_COLUMNS])
    return buffer.getvalue()
