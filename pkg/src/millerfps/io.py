"""JSON and CSV formats for series, multi-series and Hessenberg matrices.

Series:       {"order": N, "coeffs": [[re, im], ...]}               (N + 1 pairs)
MultiSeries:  {"q": q, "order": N,
               "coeffs": [{"index": [c1, ..., cq], "re": x, "im": y}, ...]}
Matrix:       [[a11, a12, ...], [a21, ...], ...]  row-major; an entry is a
              number or an [re, im] pair. {"entries": [...]} is also accepted.
"""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path

from .multivar import MultiSeries, _layout
from .series import Series

__all__ = [
    "SchemaError",
    "series_to_json",
    "series_from_json",
    "multiseries_to_json",
    "multiseries_from_json",
    "matrix_from_json",
    "load_json",
    "dump_json",
    "format_sig",
    "format_fixed",
    "series_csv",
    "multiseries_csv",
]


class SchemaError(ValueError):
    pass


def _pair(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def _parse_complex(v, where: str) -> complex:
    if isinstance(v, bool):
        raise SchemaError(f"{where}: expected a number or [re, im], got {v!r}")
    if isinstance(v, (int, float)):
        return complex(v)
    if isinstance(v, (list, tuple)) and len(v) == 2 and all(
        isinstance(x, (int, float)) and not isinstance(x, bool) for x in v
    ):
        return complex(v[0], v[1])
    raise SchemaError(f"{where}: expected a number or [re, im], got {v!r}")


def series_to_json(f: Series) -> dict:
    return {"order": f.order, "coeffs": [_pair(z) for z in f.coeffs]}


def series_from_json(obj) -> Series:
    if not isinstance(obj, dict) or "coeffs" not in obj:
        raise SchemaError("series JSON needs a 'coeffs' list")
    coeffs = obj["coeffs"]
    if not isinstance(coeffs, list) or not coeffs:
        raise SchemaError("'coeffs' must be a non-empty list")
    values = [_parse_complex(v, f"coeffs[{k}]") for k, v in enumerate(coeffs)]
    order = obj.get("order", len(values) - 1)
    if not isinstance(order, int) or isinstance(order, bool) or order != len(values) - 1:
        raise SchemaError(f"'order' {order!r} does not match {len(values)} coefficients")
    try:
        return Series(values)
    except ValueError as exc:
        raise SchemaError(str(exc)) from exc


def multiseries_to_json(f: MultiSeries) -> dict:
    return {
        "q": f.q,
        "order": f.order,
        "coeffs": [
            {"index": list(idx), "re": float(v.real), "im": float(v.imag)}
            for idx, v in f.items()
        ],
    }


def multiseries_from_json(obj) -> MultiSeries:
    try:
        q, order, entries = obj["q"], obj["order"], obj["coeffs"]
    except (TypeError, KeyError) as exc:
        raise SchemaError("multi-series JSON needs 'q', 'order' and 'coeffs'") from exc
    if not (isinstance(q, int) and q >= 1 and isinstance(order, int) and order >= 0):
        raise SchemaError("'q' must be >= 1 and 'order' >= 0")
    layout = _layout(q, order)
    terms = {}
    for k, e in enumerate(entries):
        try:
            idx = tuple(e["index"])
            val = complex(e["re"], e.get("im", 0.0))
        except (TypeError, KeyError, ValueError) as exc:
            raise SchemaError(f"coeffs[{k}] is malformed") from exc
        if idx not in layout.rank:
            raise SchemaError(f"coeffs[{k}]: index {list(idx)} invalid for q={q}, N={order}")
        if idx in terms:
            raise SchemaError(f"coeffs[{k}]: duplicate index {list(idx)}")
        terms[idx] = val
    if len(terms) != len(layout):
        raise SchemaError(
            f"dense layout needs all {len(layout)} indices of degree <= {order}, got {len(terms)}"
        )
    try:
        return MultiSeries.from_dict(q, order, terms)
    except ValueError as exc:
        raise SchemaError(str(exc)) from exc


def matrix_from_json(obj) -> list[list[complex]]:
    if isinstance(obj, dict):
        obj = obj.get("entries")
    if not isinstance(obj, list) or not obj or not all(isinstance(r, list) for r in obj):
        raise SchemaError("matrix JSON must be a non-empty list of rows")
    return [
        [_parse_complex(v, f"row {i}, column {j}") for j, v in enumerate(row)]
        for i, row in enumerate(obj)
    ]


def load_json(path):
    with open(path, encoding="utf-8") as fh:
        try:
            return json.load(fh)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"{path}: invalid JSON ({exc})") from exc


def dump_json(obj, path=None) -> str:
    text = json.dumps(obj, indent=2) + "\n"
    if path is not None:
        Path(path).write_text(text, encoding="utf-8")
    return text


def _clean(x: float) -> float:
    return 0.0 if x == 0 else x  # no "-0"


def format_sig(x: float, digits: int = 16) -> str:
    """``digits`` significant digits, general format."""
    if not math.isfinite(x):
        raise ValueError("non-finite value in output")
    return format(_clean(x), f".{digits}g")


def format_fixed(x: float, decimals: int = 16) -> str:
    """Fixed-point with ``decimals`` places (the coefficient-table layout)."""
    s = format(_clean(x), f".{decimals}f")
    return s[1:] if s.startswith("-") and float(s) == 0 else s


def series_csv(f: Series, digits: int = 16) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "re", "im"])
    for n, z in enumerate(f.coeffs):
        w.writerow([n, format_sig(z.real, digits), format_sig(z.imag, digits)])
    return buf.getvalue()


def multiseries_csv(f: MultiSeries, digits: int = 16) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([f"c{i + 1}" for i in range(f.q)] + ["re", "im"])
    for idx, z in f.items():
        w.writerow(list(idx) + [format_sig(z.real, digits), format_sig(z.imag, digits)])
    return buf.getvalue()
