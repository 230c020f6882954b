"""
Dictionary helpers: content hashing, config merging, deterministic JSON.
"""

import hashlib
import json
from enum import Enum
from typing import Any, Dict

import numpy as np


def _default_handler(o: Any) -> Any:
    """Encode numpy scalars/arrays, enums and tuples for JSON."""
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, np.generic):
        return o.item()
    if isinstance(o, Enum):
        return o.value
    if hasattr(o, "to_dict"):
        return o.to_dict()
    raise TypeError(f"Object of type {type(o)} is not JSON serializable")


def generate_hash(data: Dict[str, Any]) -> str:
    """Generate SHA256 hash of data (key order independent)."""
    json_str = json.dumps(data, sort_keys=True, default=_default_handler)
    return hashlib.sha256(json_str.encode()).hexdigest()


def merge_dicts(base: Dict[str, Any], update: Dict[str, Any]) -> Dict[str, Any]:
    """
    Deep merge two dictionaries.

    Update dict values override base dict values; ``None`` values in the
    update are ignored so unset command-line flags keep config-file values.
    """
    result = base.copy()

    for key, value in update.items():
        if value is None:
            continue
        if key in result and isinstance(result[key], dict) and isinstance(value, dict):
            result[key] = merge_dicts(result[key], value)
        else:
            result[key] = value

    return result


def json_encode(obj: Any, indent: int = 2) -> str:
    """
    Deterministic JSON encoding (sorted keys, full float precision).
    """
    return json.dumps(obj, default=_default_handler, indent=indent, sort_keys=True)


def json_decode(data: str) -> Dict[str, Any]:
    """
    JSON decode.
    """
    return json.loads(data)
