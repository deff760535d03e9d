"""NSFLD1 field files.

Layout: an ASCII header line ``NSFLD1 <nx> <ny> <nz> <ncomp>\\n`` followed by
``ncomp*nx*ny*nz`` little-endian float64 values, row-major with x fastest,
components stored one after another.
"""
from __future__ import annotations

from pathlib import Path

import numpy as np

from .function_spaces import Grid, ScalarField, VectorField

MAGIC = "NSFLD1"


class FieldFormatError(ValueError):
    pass


def write_array(path, arr: np.ndarray) -> None:
    """Write an array of shape (nx, ny, nz) or (ncomp, nx, ny, nz)."""
    arr = np.asarray(arr, dtype=np.float64)
    if arr.ndim == 3:
        arr = arr[None]
    if arr.ndim != 4:
        raise FieldFormatError(f"cannot store array of shape {arr.shape}")
    ncomp, nx, ny, nz = arr.shape
    with open(path, "wb") as fh:
        fh.write(f"{MAGIC} {nx} {ny} {nz} {ncomp}\n".encode("ascii"))
        for comp in arr:
            fh.write(comp.ravel(order="F").astype("<f8").tobytes())


def read_array(path) -> np.ndarray:
    """Return an array of shape (ncomp, nx, ny, nz)."""
    data = Path(path).read_bytes()
    nl = data.find(b"\n")
    if nl < 0:
        raise FieldFormatError("missing header line")
    try:
        parts = data[:nl].decode("ascii").split()
    except UnicodeDecodeError as exc:
        raise FieldFormatError("header is not ASCII") from exc
    if len(parts) != 5 or parts[0] != MAGIC:
        raise FieldFormatError(f"bad header {data[:nl][:60]!r}")
    try:
        nx, ny, nz, ncomp = (int(p) for p in parts[1:])
    except ValueError as exc:
        raise FieldFormatError("header sizes are not integers") from exc
    if min(nx, ny, nz, ncomp) < 1:
        raise FieldFormatError("header sizes must be positive")
    count = ncomp * nx * ny * nz
    body = data[nl + 1 :]
    if len(body) != 8 * count:
        raise FieldFormatError(f"expected {8 * count} payload bytes, found {len(body)}")
    flat = np.frombuffer(body, dtype="<f8").astype(np.float64)
    comps = flat.reshape(ncomp, -1)
    return np.stack([c.reshape((nx, ny, nz), order="F") for c in comps])


def write_field(path, u) -> None:
    write_array(path, u.values)


def read_field(path):
    """Read a file as a ScalarField (one component) or VectorField (three)."""
    arr = read_array(path)
    ncomp, nx, ny, nz = arr.shape
    if not (nx == ny == nz):
        raise FieldFormatError(f"fields live on a cubic grid, got {nx}x{ny}x{nz}")
    grid = Grid(nx)
    if ncomp == 1:
        return ScalarField(grid, arr[0])
    if ncomp == 3:
        return VectorField(grid, arr)
    raise FieldFormatError(f"unsupported component count {ncomp}")
