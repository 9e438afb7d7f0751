"""Mesh, table and report serialization.  All writes are atomic."""
from __future__ import annotations

import csv
import io
import json
import math
import os
import tempfile
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

CSV_DIGITS = 15
JSON_DIGITS = 17


def atomic_write(path, text: str) -> Path:
    """Write ``text`` to a temp file next to ``path`` and rename it into place."""
    path = Path(path)
    directory = path.parent if str(path.parent) else Path(".")
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def _fmt(x: float, digits: int) -> str:
    return format(float(x), f".{digits}g")


def mesh_faces(n_rows: int, n_cols: int, periodic: bool = False) -> list[tuple[int, int, int]]:
    """Row-major triangulation of a grid, 0-based; ``periodic`` closes the column seam."""
    if n_rows < 2 or n_cols < 2:
        raise ValueError("grid needs at least 2 x 2 vertices")
    faces = []
    last = n_cols if periodic else n_cols - 1
    for i in range(n_rows - 1):
        for j in range(last):
            jn = (j + 1) % n_cols
            a, b = i * n_cols + j, i * n_cols + jn
            c, d = a + n_cols, b + n_cols
            faces.append((a, b, d))
            faces.append((a, d, c))
    return faces


def obj_text(points, periodic: bool = False) -> str:
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 3 or pts.shape[-1] != 3:
        raise ValueError(f"expected an (rows, cols, 3) grid, got shape {pts.shape}")
    if not np.all(np.isfinite(pts)):
        raise ValueError("grid contains non-finite vertices")
    rows, cols = pts.shape[:2]
    lines = ["v " + " ".join(_fmt(c, JSON_DIGITS) for c in p) for p in pts.reshape(-1, 3)]
    lines += [f"f {a + 1} {b + 1} {c + 1}" for a, b, c in mesh_faces(rows, cols, periodic)]
    return "\n".join(lines) + "\n"


def write_mesh(points, fmt: str, path, periodic: bool = False) -> Path:
    """Write a rectangular grid of points as an OBJ mesh or an ``x,y,z`` CSV."""
    if fmt == "obj":
        return atomic_write(path, obj_text(points, periodic))
    if fmt == "csv":
        pts = np.asarray(points, dtype=float).reshape(-1, 3)
        return write_table(["x", "y", "z"], pts, path)
    raise ValueError(f"unsupported mesh format {fmt!r}")


def read_obj(path) -> tuple[np.ndarray, list[tuple[int, int, int]]]:
    verts, faces = [], []
    with open(path) as fh:
        for line in fh:
            parts = line.split()
            if not parts:
                continue
            if parts[0] == "v":
                verts.append([float(x) for x in parts[1:4]])
            elif parts[0] == "f":
                faces.append(tuple(int(x.split("/")[0]) - 1 for x in parts[1:4]))
    return np.array(verts), faces


def euler_characteristic(n_vertices: int, faces: Sequence[tuple[int, int, int]]) -> int:
    edges = set()
    for f in faces:
        for k in range(3):
            a, b = f[k], f[(k + 1) % 3]
            edges.add((min(a, b), max(a, b)))
    return n_vertices - len(edges) + len(faces)


def table_text(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_cell(x) for x in row])
    return buf.getvalue()


def _cell(x):
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return _fmt(x, CSV_DIGITS)
    return str(x)


def write_table(header: Sequence[str], rows: Iterable[Sequence], path) -> Path:
    return atomic_write(path, table_text(header, rows))


def read_table(path) -> tuple[list[str], list[list[str]]]:
    with open(path, newline="") as fh:
        r = csv.reader(fh)
        header = next(r)
        return header, [row for row in r]


def json_text(obj, indent: int = 2) -> str:
    """Deterministic JSON with floats at a fixed 17 significant digits."""
    return _json(obj, 0, indent) + "\n"


def _json(obj, level: int, indent: int) -> str:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{_json_str(str(k))}: {_json(v, level + 1, indent)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [pad + _json(v, level + 1, indent) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    if obj is None:
        return "null"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        if not math.isfinite(obj):
            return "null"
        return _fmt(obj, JSON_DIGITS)
    return _json_str(str(obj))


def _json_str(s: str) -> str:
    return json.dumps(s)
