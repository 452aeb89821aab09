"""Machine-readable report serialization.

JSON output is schema-stable: every report carries ``schema_version``. Floats
are written with 17 significant digits so parsing them back is bit-exact;
infinities are written as the strings "inf" / "-inf".
"""

from __future__ import annotations

import json
import math
from enum import Enum
from typing import Any

import numpy as np

SCHEMA_VERSION = 1


def jsonable(obj: Any) -> Any:
    """Convert report values to plain JSON-ready types."""
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [jsonable(v) for v in obj.tolist()]
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    return obj


def _dump(obj: Any, parts: list):
    if isinstance(obj, dict):
        parts.append("{")
        for i, (k, v) in enumerate(obj.items()):
            if i:
                parts.append(",")
            parts.append(json.dumps(str(k)))
            parts.append(":")
            _dump(v, parts)
        parts.append("}")
    elif isinstance(obj, (list, tuple)):
        parts.append("[")
        for i, v in enumerate(obj):
            if i:
                parts.append(",")
            _dump(v, parts)
        parts.append("]")
    elif isinstance(obj, bool):
        parts.append("true" if obj else "false")
    elif isinstance(obj, float):
        if math.isinf(obj):
            parts.append('"inf"' if obj > 0 else '"-inf"')
        elif math.isnan(obj):
            parts.append('"nan"')
        else:
            parts.append(format(obj, ".17g"))
    elif isinstance(obj, int):
        parts.append(str(obj))
    elif obj is None:
        parts.append("null")
    else:
        parts.append(json.dumps(str(obj)))


def dumps(obj: Any, indent: bool = False) -> str:
    """Serialize a report to JSON with round-trip-exact floats."""
    parts: list = []
    _dump(jsonable(obj), parts)
    text = "".join(parts)
    if indent:
        text = json.dumps(json.loads(text), indent=2)
    return text


def loads(text: str) -> Any:
    """Parse a report; the strings "inf"/"-inf"/"nan" become floats again."""
    def fix(v):
        if isinstance(v, dict):
            return {k: fix(x) for k, x in v.items()}
        if isinstance(v, list):
            return [fix(x) for x in v]
        if v == "inf":
            return math.inf
        if v == "-inf":
            return -math.inf
        if v == "nan":
            return math.nan
        return v

    return fix(json.loads(text))
