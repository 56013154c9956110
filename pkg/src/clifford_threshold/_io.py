"""JSON and CSV emitters that print every float with 17 significant digits."""

from __future__ import annotations

import csv
import json
import math
from collections.abc import Iterable, Mapping

import numpy as np


def fmt_float(x: float) -> str:
    x = float(x)
    if not math.isfinite(x):
        return "null"
    s = format(x, ".17g")
    if "e" not in s and "." not in s and "n" not in s:
        s += ".0"
    return s


def dumps(obj, indent: int | None = None, _level: int = 0) -> str:
    """Serialize plain data (dict/list/str/int/float/bool/None and numpy scalars)."""
    nl = "" if indent is None else "\n"
    pad = "" if indent is None else " " * (indent * (_level + 1))
    end = "" if indent is None else " " * (indent * _level)
    sep = ", " if indent is None else ","
    if obj is None or isinstance(obj, (bool, np.bool_)):
        return json.dumps(None if obj is None else bool(obj))
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return fmt_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, np.ndarray):
        obj = obj.tolist()
    if isinstance(obj, Mapping):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{" + nl + (sep + nl).join(items) + nl + end + "}"
    if isinstance(obj, Iterable):
        items = [f"{pad}{dumps(v, indent, _level + 1)}" for v in obj]
        if not items:
            return "[]"
        return "[" + nl + (sep + nl).join(items) + nl + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def write_csv(stream, fields: list[str], rows: Iterable[Mapping]) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(fields)
    for row in rows:
        writer.writerow(
            [fmt_float(row[f]) if isinstance(row[f], (float, np.floating)) else row[f] for f in fields]
        )
