"""Point-set files and report emission (JSON / CSV, atomic writes)."""

from __future__ import annotations

import csv
import io
import json
import math
import os
import tempfile
from pathlib import Path

import numpy as np

from maglab.errors import InputError
from maglab.metric import PointSet


def parse_points(text: str, fmt: str | None = None) -> PointSet:
    """Parse ``{"dim": N, "points": [...]}`` JSON or headerless/headed CSV."""
    if fmt is None:
        fmt = "json" if text.lstrip().startswith("{") else "csv"
    if fmt == "json":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputError(f"invalid JSON: {exc}") from None
        if not isinstance(doc, dict) or "points" not in doc:
            raise InputError('point JSON must be an object with a "points" list')
        pts = doc["points"]
        if not isinstance(pts, list) or not all(isinstance(p, list) for p in pts):
            raise InputError('"points" must be a list of coordinate lists')
        F = PointSet(pts)
        if "dim" in doc and doc["dim"] != F.dim:
            raise InputError(f'"dim" is {doc["dim"]} but points have {F.dim} coordinates')
        return F
    if fmt == "csv":
        rows = [r for r in csv.reader(io.StringIO(text)) if r and any(c.strip() for c in r)]
        if not rows:
            raise InputError("no points in CSV input")
        try:
            [float(c) for c in rows[0]]
        except ValueError:
            rows = rows[1:]
        try:
            pts = [[float(c) for c in r] for r in rows]
        except ValueError as exc:
            raise InputError(f"non-numeric CSV field: {exc}") from None
        if len({len(p) for p in pts}) > 1:
            raise InputError("CSV rows have differing numbers of columns")
        return PointSet(pts)
    raise InputError(f"unknown point format {fmt!r}")


def load_points(path) -> PointSet:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    fmt = {".json": "json", ".csv": "csv"}.get(path.suffix.lower())
    return parse_points(text, fmt)


def _clean(obj):
    """Make a report JSON-safe: numpy scalars to Python, infinities to None."""
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    if isinstance(obj, (np.floating, float)):
        x = float(obj)
        return x if math.isfinite(x) else None
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def to_json(obj) -> str:
    # repr-based float output is the shortest string that round-trips exactly.
    return json.dumps(_clean(obj), indent=2, allow_nan=False) + "\n"


def fmt_num(x) -> str:
    """17 significant digits for machine-readable CSV."""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".17g")


def to_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt_num(v) if isinstance(v, (int, float, np.number)) else v for v in row])
    return buf.getvalue()


def write_output(text: str, path=None, stream=None):
    """Write to ``path`` atomically (temp file + rename) or to ``stream``."""
    if path is None:
        stream.write(text)
        return
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
