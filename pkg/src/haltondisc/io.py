"""CSV and JSON serialisation.

CSV: UTF-8, header row, ``.`` decimal separator, 17 significant digits, so
every float64 round-trips bit-exactly.  JSON: one object per run with
``provenance``, ``result`` and ``timing`` keys.
"""

from __future__ import annotations

import csv
import dataclasses
import io
import json
import math
from pathlib import Path
from typing import Any, Iterable, TextIO

import numpy as np

from .pointsets import PointSet, make_pointset

__all__ = [
    "fmt",
    "write_points_csv",
    "read_points_csv",
    "points_manifest",
    "pointset_from_manifest",
    "rows_to_csv",
    "to_jsonable",
    "dump_json",
]


def fmt(v) -> str:
    """Decimal text for a CSV cell; floats use 17 significant digits."""
    if isinstance(v, (float, np.floating)):
        v = float(v)
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return format(v, ".17g")
    if v is None:
        return ""
    return str(v)


def write_points_csv(P: PointSet, out: TextIO) -> None:
    w = csv.writer(out, lineterminator="\n")
    w.writerow([f"x{i + 1}" for i in range(P.dim)])
    for row in P.points:
        w.writerow([format(float(v), ".17g") for v in row])


def read_points_csv(source) -> np.ndarray:
    """Read a points CSV written by :func:`write_points_csv`."""
    if isinstance(source, (str, Path)):
        with open(source, newline="", encoding="utf-8") as fh:
            return read_points_csv(fh)
    rows = list(csv.reader(source))
    if not rows:
        raise ValueError("empty CSV")
    d = len(rows[0])
    data = np.array([[float(v) for v in r] for r in rows[1:]], dtype=np.float64)
    return data.reshape(len(rows) - 1, d)


def points_manifest(P: PointSet, csv_name: str | None = None) -> dict:
    result = {"n_points": len(P), "dim": P.dim}
    if csv_name is not None:
        result["csv"] = csv_name
    return {"provenance": dict(P.provenance), "result": result}


def pointset_from_manifest(manifest: dict) -> PointSet:
    """Regenerate the point set described by a manifest's provenance."""
    prov = manifest["provenance"]
    perms = None
    if prov.get("variant") == "generalized_halton" and str(prov.get("permutation", "")).startswith("random:"):
        from .pointsets import DigitPermutationFamily

        perms = DigitPermutationFamily.random(prov["bases"], int(prov["permutation"].split(":", 1)[1]))
    return make_pointset(prov["variant"], prov["bases"], prov["N"], prov.get("Q", 0), perms)


def to_jsonable(obj: Any) -> Any:
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        if hasattr(obj, "to_dict"):
            return to_jsonable(obj.to_dict())
        return to_jsonable(dataclasses.asdict(obj))
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        if math.isinf(v) or math.isnan(v):
            return str(v)
        return v
    return obj


def dump_json(obj: Any, out: TextIO) -> None:
    json.dump(to_jsonable(obj), out, indent=2, allow_nan=False)
    out.write("\n")


def rows_to_csv(rows: Iterable, out: TextIO, columns: list[str] | None = None) -> None:
    """Write dataclass rows (or dicts) with a header row."""
    rows = [dataclasses.asdict(r) if dataclasses.is_dataclass(r) else dict(r) for r in rows]
    if columns is None:
        columns = list(rows[0].keys()) if rows else []
    w = csv.writer(out, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([fmt(r.get(c)) for c in columns])


def csv_text(rows: Iterable, columns: list[str] | None = None) -> str:
    buf = io.StringIO()
    rows_to_csv(rows, buf, columns)
    return buf.getvalue()
