"""Readers for the rotlat CSV contract.

One reader per schema; every parse failure is reported as a SchemaError
carrying the file, the 1-based CSV line number (the header is line 1) and,
where it applies, the offending column name.
"""

from __future__ import annotations

import csv
import os

import numpy as np

SWEEP_HEADER = ["bigomega", "energy", "energy_shifted", "boundary_mass", "verdict"]
PROFILE_HEADER = ["coordinate", "value"]
SCALAR_HEADER = ["ix", "iy", "x", "y", "value"]
BOND_HEADER = ["ix", "iy", "direction", "x_mid", "y_mid", "value"]
SCAN_HEADER = ["level", "nx", "ny", "spacing", "energy", "energy_shifted",
               "boundary_mass", "ground_multiplet_size"]

VERDICTS = ("contained", "escaping")
DIRECTIONS = ("+x", "+y")


class SchemaError(Exception):
    """A CSV file does not match the expected rotlat output schema."""

    def __init__(self, path, message, row=None, column=None):
        where = str(path)
        if row is not None:
            where += f", row {row}"
        if column is not None:
            where += f", column {column!r}"
        super().__init__(f"{where}: {message}")
        self.path = str(path)
        self.row = row
        self.column = column


def _read_rows(path, header):
    if not os.path.exists(path):
        raise SchemaError(path, "no such file")
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or rows[0] != header:
        got = ",".join(rows[0]) if rows else "<empty file>"
        raise SchemaError(path, f"expected header {','.join(header)}, got {got}",
                          row=1)
    if len(rows) == 1:
        raise SchemaError(path, "no data rows")
    for i, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise SchemaError(path, f"expected {len(header)} fields, got {len(row)}",
                              row=i)
    return rows[1:]


def _floats(path, rows, header, column):
    j = header.index(column)
    out = np.empty(len(rows))
    for i, row in enumerate(rows):
        try:
            out[i] = float(row[j])
        except ValueError:
            raise SchemaError(path, f"could not parse {row[j]!r} as a number",
                              row=i + 2, column=column) from None
    return out


def _ints(path, rows, header, column):
    j = header.index(column)
    out = np.empty(len(rows), dtype=int)
    for i, row in enumerate(rows):
        try:
            out[i] = int(row[j])
        except ValueError:
            raise SchemaError(path, f"could not parse {row[j]!r} as an integer",
                              row=i + 2, column=column) from None
    return out


def read_profile(path):
    """-> (coordinate, value) arrays."""
    rows = _read_rows(path, PROFILE_HEADER)
    return (_floats(path, rows, PROFILE_HEADER, "coordinate"),
            _floats(path, rows, PROFILE_HEADER, "value"))


def read_sweep(path):
    """-> dict of column arrays; verdict is a list of strings."""
    rows = _read_rows(path, SWEEP_HEADER)
    j = SWEEP_HEADER.index("verdict")
    for i, row in enumerate(rows):
        if row[j] not in VERDICTS:
            raise SchemaError(path, f"verdict must be one of {VERDICTS}, "
                              f"got {row[j]!r}", row=i + 2, column="verdict")
    return {
        "bigomega": _floats(path, rows, SWEEP_HEADER, "bigomega"),
        "energy": _floats(path, rows, SWEEP_HEADER, "energy"),
        "energy_shifted": _floats(path, rows, SWEEP_HEADER, "energy_shifted"),
        "boundary_mass": _floats(path, rows, SWEEP_HEADER, "boundary_mass"),
        "verdict": [row[j] for row in rows],
    }


def read_scalar_field(path):
    """-> (grid, extent): a (ny, nx) value grid plus (x0, x1, y0, y1).

    The grid is assembled from the explicit ix/iy indices, so row order in
    the file does not matter, but every cell must appear exactly once.
    """
    rows = _read_rows(path, SCALAR_HEADER)
    ix = _ints(path, rows, SCALAR_HEADER, "ix")
    iy = _ints(path, rows, SCALAR_HEADER, "iy")
    x = _floats(path, rows, SCALAR_HEADER, "x")
    y = _floats(path, rows, SCALAR_HEADER, "y")
    value = _floats(path, rows, SCALAR_HEADER, "value")
    if ix.min() < 0 or iy.min() < 0:
        raise SchemaError(path, "negative grid index")
    nx, ny = ix.max() + 1, iy.max() + 1
    if len(rows) != nx * ny:
        raise SchemaError(path, f"expected {nx}x{ny} = {nx * ny} grid rows, "
                          f"got {len(rows)}")
    grid = np.full((ny, nx), np.nan)
    grid[iy, ix] = value
    if np.isnan(grid).any():
        raise SchemaError(path, "duplicate grid cells leave holes in the grid")
    extent = (x.min(), x.max(), y.min(), y.max())
    return grid, extent


def read_bond_field(path):
    """-> (x_mid, y_mid, u, v) arrow arrays; u,v carry the signed current
    along the bond direction."""
    rows = _read_rows(path, BOND_HEADER)
    j = BOND_HEADER.index("direction")
    for i, row in enumerate(rows):
        if row[j] not in DIRECTIONS:
            raise SchemaError(path, f"direction must be one of {DIRECTIONS}, "
                              f"got {row[j]!r}", row=i + 2, column="direction")
    xm = _floats(path, rows, BOND_HEADER, "x_mid")
    ym = _floats(path, rows, BOND_HEADER, "y_mid")
    value = _floats(path, rows, BOND_HEADER, "value")
    along_x = np.array([row[j] == "+x" for row in rows])
    u = np.where(along_x, value, 0.0)
    v = np.where(along_x, 0.0, value)
    return xm, ym, u, v


def read_refinement_scan(path):
    """-> dict of column arrays from a containment-scan CSV."""
    rows = _read_rows(path, SCAN_HEADER)
    return {
        "level": _ints(path, rows, SCAN_HEADER, "level"),
        "nx": _ints(path, rows, SCAN_HEADER, "nx"),
        "ny": _ints(path, rows, SCAN_HEADER, "ny"),
        "spacing": _floats(path, rows, SCAN_HEADER, "spacing"),
        "energy": _floats(path, rows, SCAN_HEADER, "energy"),
        "energy_shifted": _floats(path, rows, SCAN_HEADER, "energy_shifted"),
        "boundary_mass": _floats(path, rows, SCAN_HEADER, "boundary_mass"),
    }
