"""Field serialization: CSV body plus JSON sidecar with grid metadata.

The CSV carries one row per grid point with the per-axis indices followed by
the real and imaginary parts.  Floats are written with ``repr``, whose
shortest round-trip representation reproduces the double exactly on read.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .fields import ComplexField, Grid

_INDEX_NAMES = ("i", "j", "l")


def sidecar_path(csv_path: str | Path) -> Path:
    return Path(csv_path).with_suffix(".json")


def write_field(field: ComplexField, csv_path: str | Path, t_s: float | None = None) -> tuple[Path, Path]:
    """Write field values to ``csv_path`` and grid metadata to a sidecar.

    Returns the (csv, sidecar) paths.  ``t_s`` optionally stamps the snapshot
    time so that series consumers can recover uniform spacing.
    """
    csv_path = Path(csv_path)
    grid = field.grid
    with csv_path.open("w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(list(_INDEX_NAMES[: grid.dim]) + ["re", "im"])
        for idx in np.ndindex(*grid.shape):
            v = field.values[idx]
            writer.writerow(list(idx) + [repr(float(v.real)), repr(float(v.imag))])
    meta = {
        "dim": grid.dim,
        "n_points": list(grid.n_points),
        "lengths": list(grid.lengths),
        "periodic": grid.periodic,
        "normalized": field.normalized,
        "units": {"lengths": "cm", "values": "cm^(-dim/2) when normalized, arbitrary otherwise"},
    }
    if t_s is not None:
        meta["t_s"] = float(t_s)
    side = sidecar_path(csv_path)
    side.write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")
    return csv_path, side


def read_field(csv_path: str | Path) -> tuple[ComplexField, dict]:
    """Inverse of :func:`write_field`: returns the field and the sidecar dict."""
    csv_path = Path(csv_path)
    side = sidecar_path(csv_path)
    if not side.exists():
        raise FileNotFoundError(f"missing sidecar {side}")
    meta = json.loads(side.read_text())
    grid = Grid(dim=meta["dim"], n_points=tuple(meta["n_points"]), lengths=tuple(meta["lengths"]))
    values = np.zeros(grid.shape, dtype=np.complex128)
    with csv_path.open(newline="") as handle:
        reader = csv.reader(handle)
        header = next(reader)
        expected = list(_INDEX_NAMES[: grid.dim]) + ["re", "im"]
        if header != expected:
            raise ValueError(f"unexpected field CSV header {header}, expected {expected}")
        for row in reader:
            idx = tuple(int(x) for x in row[: grid.dim])
            values[idx] = float(row[grid.dim]) + 1j * float(row[grid.dim + 1])
    field = ComplexField(grid=grid, values=values, normalized=bool(meta.get("normalized", False)))
    return field, meta
