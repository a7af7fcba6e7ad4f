"""File exports for flow runs: snapshots, trajectories, run manifests.

Every writer is deterministic byte for byte: floats are serialized with
repr (shortest round-trip form), JSON keys are sorted, and row order
follows the data.  Writing the same state twice yields identical files,
which is what the reproducibility checks diff.
"""
from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .flow import FlowState

SNAPSHOT_FIELDS = ("t", "idx", "x", "y", "H")


def _fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return repr(float(value))


def write_snapshot_csv(path: str | Path, state: FlowState) -> Path:
    """One row per vertex of the current curve: t, idx, x, y, H."""
    path = Path(path)
    kap = state.curve.curvatures()
    v = state.curve.vertices
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(SNAPSHOT_FIELDS)
        t = _fmt(state.t)
        for i in range(len(v)):
            writer.writerow((t, str(i), _fmt(v[i, 0]), _fmt(v[i, 1]), _fmt(kap[i])))
    return path


def read_snapshot_csv(path: str | Path) -> dict:
    """Columns of a snapshot file as arrays (t collapsed to a scalar)."""
    with Path(path).open(newline="") as fh:
        reader = csv.DictReader(fh)
        rows = list(reader)
    if not rows:
        raise ValueError("empty snapshot")
    return {
        "t": float(rows[0]["t"]),
        "vertices": np.array(
            [[float(r["x"]), float(r["y"])] for r in rows]
        ),
        "curvatures": np.array([float(r["H"]) for r in rows]),
    }


def _jsonable(row: dict) -> dict:
    out = {}
    for key, value in row.items():
        if isinstance(value, (bool, np.bool_)):
            out[key] = bool(value)
        elif isinstance(value, (int, np.integer)):
            out[key] = int(value)
        elif isinstance(value, (float, np.floating)):
            out[key] = float(value)
        elif value is None or isinstance(value, str):
            out[key] = value
        else:
            raise TypeError(f"non-scalar monitor value under {key!r}")
    return out


def write_trajectory_jsonl(path: str | Path, rows: list[dict]) -> Path:
    """Monitor rows as one sorted-key JSON object per line."""
    path = Path(path)
    with path.open("w") as fh:
        for row in rows:
            fh.write(json.dumps(_jsonable(row), sort_keys=True))
            fh.write("\n")
    return path


def read_trajectory_jsonl(path: str | Path) -> list[dict]:
    with Path(path).open() as fh:
        return [json.loads(line) for line in fh if line.strip()]


def write_manifest(path: str | Path, manifest: dict) -> Path:
    """Run description (scheme, step policy, thresholds) as sorted JSON."""
    path = Path(path)
    payload = json.dumps(manifest, sort_keys=True, indent=2, allow_nan=False)
    path.write_text(payload + "\n")
    return path


def read_manifest(path: str | Path) -> dict:
    return json.loads(Path(path).read_text())
