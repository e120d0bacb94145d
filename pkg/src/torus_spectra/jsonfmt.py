"""Deterministic JSON rendering.

Floats are printed with 17 significant digits so emitted numbers
round-trip to the exact same doubles and repeated runs produce
byte-identical files. Dict keys keep insertion order; callers construct
objects in a fixed order. NaN and infinities are rejected outright.
"""

from __future__ import annotations

import json
import math
import numbers


def format_float(x: float) -> str:
    if math.isnan(x) or math.isinf(x):
        raise ValueError(f"non-finite float {x!r} in JSON output")
    return format(x, ".17g")


def dumps(obj, pretty: bool = True) -> str:
    pieces: list[str] = []
    _write(obj, pieces, 0, pretty)
    return "".join(pieces)


def _write(obj, out: list[str], depth: int, pretty: bool) -> None:
    nl = "\n" + "  " * (depth + 1) if pretty else ""
    close_nl = "\n" + "  " * depth if pretty else ""
    if obj is None:
        out.append("null")
    elif isinstance(obj, bool):
        out.append("true" if obj else "false")
    elif isinstance(obj, numbers.Integral):
        out.append(str(int(obj)))
    elif isinstance(obj, numbers.Real):
        out.append(format_float(float(obj)))
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    elif isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{")
        for i, (k, v) in enumerate(obj.items()):
            if not isinstance(k, str):
                raise TypeError(f"JSON object keys must be strings, got {k!r}")
            out.append("," + nl if i else nl)
            out.append(json.dumps(k))
            out.append(": " if pretty else ":")
            _write(v, out, depth + 1, pretty)
        out.append(close_nl + "}")
    elif isinstance(obj, (list, tuple)):
        if not obj:
            out.append("[]")
            return
        out.append("[")
        for i, v in enumerate(obj):
            out.append("," + nl if i else nl)
            _write(v, out, depth + 1, pretty)
        out.append(close_nl + "]")
    else:
        raise TypeError(f"cannot render {type(obj).__name__} as JSON")
