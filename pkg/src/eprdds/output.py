"""CSV and JSON emitters with provenance headers."""

from __future__ import annotations

import io
import json
import math
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import __version__

SCHEMA = "epr-dds/1"
TOOL = "eprdds"


def fmt(x) -> str:
    """17 significant digits: round-trips every double."""
    return format(float(x), ".17g")


def provenance(params: Mapping | None = None, **extra) -> dict:
    meta = {"tool": TOOL, "version": __version__, "schema": SCHEMA}
    if params:
        meta.update(params)
    meta.update({k: v for k, v in extra.items() if v is not None})
    return meta


def write_csv(stream, columns: Sequence[str], rows, meta: Mapping | None = None) -> None:
    """Write ``#key=value`` header lines, a column line, then the rows.

    ``rows`` may be an iterable of sequences or a 2-d array.
    """
    if meta:
        for key, value in meta.items():
            if isinstance(value, float):
                value = fmt(value)
            stream.write(f"# {key}={value}\n")
    stream.write(",".join(columns) + "\n")
    if isinstance(rows, np.ndarray):
        # fast path for large sample tables
        np.savetxt(stream, rows, fmt="%.17g", delimiter=",")
        return
    for row in rows:
        stream.write(",".join(fmt(v) for v in row) + "\n")


def csv_string(columns, rows, meta=None) -> str:
    buf = io.StringIO()
    write_csv(buf, columns, rows, meta)
    return buf.getvalue()


def read_csv(text: str) -> tuple[dict, list[str], np.ndarray]:
    """Parse output of :func:`write_csv` back into ``(meta, columns, data)``."""
    meta, columns, data = {}, None, []
    for line in text.splitlines():
        if not line.strip():
            continue
        if line.startswith("#"):
            key, _, value = line[1:].strip().partition("=")
            meta[key] = value
        elif columns is None:
            columns = line.split(",")
        else:
            data.append([float(v) for v in line.split(",")])
    return meta, columns or [], np.array(data, dtype=float).reshape(-1, len(columns or []))


def _jsonable(obj):
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        if math.isnan(v):
            return None
        return v
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, Mapping):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


def dumps(payload: Mapping) -> str:
    body = {"schema": SCHEMA}
    body.update(payload)
    return json.dumps(_jsonable(body), indent=2, allow_nan=False)


def rows_from(columns: Iterable[np.ndarray]) -> np.ndarray:
    return np.column_stack([np.asarray(c, dtype=float) for c in columns])
