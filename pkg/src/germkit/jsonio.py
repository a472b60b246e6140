"""Deterministic JSON for the CLI and service layer.

Series travel as {"order": N, "coeffs": [[re, im], ...]} with index i
holding the degree-(i+1) coefficient: lowest-terms rational strings like
"3/4" in exact mode, plain JSON numbers in approximate mode. Output JSON is
rendered by a small dumper of our own so that floats always carry 17
significant digits and key order is sorted, making runs byte-identical.
"""

from __future__ import annotations

import json

from .errors import InputFormatError, PreconditionError
from .series import QQi, TruncatedSeries


def series_to_json(s: TruncatedSeries) -> dict:
    if s.exact:
        coeffs = [c.json_pair() for c in s.coeffs]
    else:
        coeffs = [[z.real, z.imag] for z in s.coeffs]
    return {"order": s.order, "coeffs": coeffs}


def series_from_json(data) -> TruncatedSeries:
    if not isinstance(data, dict):
        raise InputFormatError("series JSON must be an object")
    order = data.get("order")
    coeffs = data.get("coeffs")
    if not isinstance(order, int) or order < 1:
        raise InputFormatError("series order must be a positive integer")
    if not isinstance(coeffs, list) or len(coeffs) != order:
        raise InputFormatError("series needs exactly `order` coefficient pairs")
    pairs = []
    exact = None
    for entry in coeffs:
        if not isinstance(entry, list) or len(entry) != 2:
            raise InputFormatError("each coefficient must be a [re, im] pair")
        re, im = entry
        if isinstance(re, str) and isinstance(im, str):
            this_exact = True
        elif isinstance(re, (int, float)) and isinstance(im, (int, float)) and not isinstance(re, bool):
            this_exact = False
        else:
            raise InputFormatError(f"bad coefficient entry {entry!r}")
        if exact is None:
            exact = this_exact
        elif exact is not this_exact:
            raise InputFormatError("cannot mix rational strings and numeric coefficients")
        pairs.append(entry)
    if exact is None:
        exact = True
    try:
        if exact:
            values = [QQi(re, im) for re, im in pairs]
        else:
            values = [complex(re, im) for re, im in pairs]
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise InputFormatError(f"bad coefficient value: {exc}") from exc
    return TruncatedSeries.from_coefficients(values, order, exact=exact)


def load_series(path) -> TruncatedSeries:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise InputFormatError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputFormatError(f"{path} is not valid JSON: {exc}") from exc
    return series_from_json(data)


def save_series(s: TruncatedSeries, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_deterministic(series_to_json(s)))
        fh.write("\n")


def jsonable(value):
    """Recursively convert domain values to JSON-safe structures."""
    if isinstance(value, QQi):
        return value.json_pair()
    if isinstance(value, TruncatedSeries):
        return series_to_json(value)
    if isinstance(value, complex):
        return [value.real, value.imag]
    if isinstance(value, dict):
        return {k: jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    return value


def format_float(x: float) -> str:
    """17 significant digits; rejects values JSON cannot carry."""
    if x != x or x in (float("inf"), float("-inf")):
        raise PreconditionError(f"cannot serialize non-finite float {x!r}")
    if x == 0.0:
        return "0"  # collapse -0.0
    return format(float(x), ".17g")


def dumps_deterministic(obj) -> str:
    """JSON with sorted keys, compact separators, 17-digit floats."""
    pieces: list = []
    _write(obj, pieces)
    return "".join(pieces)


def _write(obj, out: list) -> None:
    if obj is None:
        out.append("null")
    elif obj is True:
        out.append("true")
    elif obj is False:
        out.append("false")
    elif isinstance(obj, int):
        out.append(str(obj))
    elif isinstance(obj, float):
        out.append(format_float(obj))
    elif isinstance(obj, str):
        out.append(json.dumps(obj, ensure_ascii=True))
    elif isinstance(obj, (list, tuple)):
        out.append("[")
        for i, item in enumerate(obj):
            if i:
                out.append(",")
            _write(item, out)
        out.append("]")
    elif isinstance(obj, dict):
        out.append("{")
        for i, key in enumerate(sorted(obj)):
            if not isinstance(key, str):
                raise PreconditionError(f"JSON object keys must be strings, got {key!r}")
            if i:
                out.append(",")
            _write(key, out)
            out.append(":")
            _write(obj[key], out)
        out.append("}")
    else:
        raise PreconditionError(f"cannot serialize {type(obj).__name__} deterministically")
