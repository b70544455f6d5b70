"""Helpers for parsing JSON documents with path-qualified error reporting."""

from __future__ import annotations

import json
import math
from typing import Any

from .errors import LayoutFormatError


def loads(data: bytes | str, what: str = "document") -> Any:
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise LayoutFormatError("", f"{what} is not valid UTF-8: {exc}") from exc
    if not data.strip():
        raise LayoutFormatError("", f"{what} is empty")
    try:
        return json.loads(data)
    except json.JSONDecodeError as exc:
        raise LayoutFormatError("", f"malformed JSON: {exc}") from exc


def join(path: str, key: str | int) -> str:
    if isinstance(key, int):
        return f"{path}[{key}]"
    return f"{path}.{key}" if path else key


def require(obj: Any, key: str, path: str) -> tuple[Any, str]:
    if not isinstance(obj, dict):
        raise LayoutFormatError(path or "<root>", "expected a JSON object")
    if key not in obj:
        raise LayoutFormatError(join(path, key), "missing required field")
    return obj[key], join(path, key)


def optional(obj: Any, key: str, path: str) -> tuple[Any, str] | None:
    if not isinstance(obj, dict):
        raise LayoutFormatError(path or "<root>", "expected a JSON object")
    if key not in obj or obj[key] is None:
        return None
    return obj[key], join(path, key)


def number(value: Any, path: str) -> float:
    # bool is an int subclass; reject it explicitly
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise LayoutFormatError(path, f"expected a number, got {type(value).__name__}")
    out = float(value)
    if math.isnan(out):
        raise LayoutFormatError(path, "NaN is not a valid value")
    return out


def string(value: Any, path: str) -> str:
    if not isinstance(value, str):
        raise LayoutFormatError(path, f"expected a string, got {type(value).__name__}")
    return value


def array(value: Any, path: str, length: int | None = None) -> list:
    if not isinstance(value, list):
        raise LayoutFormatError(path, f"expected an array, got {type(value).__name__}")
    if length is not None and len(value) != length:
        raise LayoutFormatError(path, f"expected {length} elements, got {len(value)}")
    return value


def vector(value: Any, path: str, length: int) -> tuple[float, ...]:
    items = array(value, path, length)
    return tuple(number(v, join(path, i)) for i, v in enumerate(items))
