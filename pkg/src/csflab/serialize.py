"""Deterministic text serialization helpers.

Floats are written with repr (shortest round-trip form), so parsing the
output reproduces the original values bit for bit and repeated runs of
the same computation produce byte-identical files.
"""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np


def dump_json(obj, path) -> None:
    """Write canonical JSON: sorted keys, two-space indent, one trailing newline."""
    text = json.dumps(obj, sort_keys=True, indent=2)
    Path(path).write_text(text + "\n")


def load_json(path):
    return json.loads(Path(path).read_text())


def format_float(v) -> str:
    return repr(float(v))


def write_csv(path, header, columns) -> None:
    """Write equal-length numeric columns under a comma-joined header."""
    n = len(columns[0])
    for c in columns:
        if len(c) != n:
            raise ValueError("column lengths differ")
    lines = [",".join(header)]
    for i in range(n):
        lines.append(",".join(format_float(c[i]) for c in columns))
    Path(path).write_text("\n".join(lines) + "\n")


def read_csv(path):
    """Read a numeric CSV written by write_csv: returns (header, columns)."""
    lines = Path(path).read_text().strip().split("\n")
    header = lines[0].split(",")
    rows = [ln.split(",") for ln in lines[1:]]
    cols = [np.array([float(r[j]) for r in rows]) for j in range(len(header))]
    return header, cols
