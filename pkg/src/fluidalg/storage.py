"""Diagnostics CSV, binary state snapshots and the Green-set cache.

Binary layouts (all little-endian, fields written x-fastest, then y, then z):

snapshot:   b"FCEU" | uint32 version | uint32 N | u_yz | u_zx | u_xy   (float64 each)
green set:  b"FCGS" | uint32 version | uint32 N | b"xyz\\0" | G_x | G_y | G_z
            where each G is three float64 fields in yz, zx, xy order
"""
from __future__ import annotations

import csv
import struct
from pathlib import Path

import numpy as np

from .chain_complex import Chain2, check_period
from .hodge import GreenSet

SNAPSHOT_MAGIC = b"FCEU"
GREEN_MAGIC = b"FCGS"
FORMAT_VERSION = 1
_HEADER = struct.Struct("<4sII")

DIAG_COLUMNS = (
    "step", "time", "energy", "helicity", "rhs_energy_residual", "rhs_helicity_residual",
)


class FormatError(ValueError):
    pass


def format_number(x) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return f"{float(x):.17g}"


def diag_row(d) -> list[str]:
    return [format_number(getattr(d, c)) for c in DIAG_COLUMNS]


class DiagnosticsWriter:
    """Writes the header once, then one row per diagnostics record."""

    def __init__(self, path):
        self.path = Path(path)
        self._fh = open(self.path, "w", newline="")
        self._csv = csv.writer(self._fh, lineterminator="\n")
        self._csv.writerow(DIAG_COLUMNS)

    def write(self, d):
        self._csv.writerow(diag_row(d))

    def close(self):
        self._fh.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


def read_diagnostics(path) -> list[dict]:
    with open(path, newline="") as fh:
        return [{k: float(v) for k, v in row.items()} for row in csv.DictReader(fh)]


def _fields_bytes(u: np.ndarray) -> bytes:
    return b"".join(
        np.asarray(f, dtype="<f8").ravel(order="F").tobytes() for f in u
    )


def _fields_from(buf: bytes, N: int, count: int) -> np.ndarray:
    n = N**3
    data = np.frombuffer(buf, dtype="<f8", count=count * n)
    return np.stack([data[i * n:(i + 1) * n].reshape((N, N, N), order="F")
                     for i in range(count)]).astype(float)


def write_snapshot(X: Chain2, path) -> None:
    N = X.N
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(SNAPSHOT_MAGIC, FORMAT_VERSION, N))
        fh.write(_fields_bytes(X.u))


def read_snapshot(path) -> Chain2:
    raw = Path(path).read_bytes()
    if len(raw) < _HEADER.size:
        raise FormatError(f"{path}: truncated header")
    magic, version, N = _HEADER.unpack_from(raw)
    if magic != SNAPSHOT_MAGIC:
        raise FormatError(f"{path}: bad magic {magic!r}")
    if version != FORMAT_VERSION:
        raise FormatError(f"{path}: unsupported version {version}")
    body = raw[_HEADER.size:]
    if len(body) != 3 * N**3 * 8:
        raise FormatError(f"{path}: expected {3 * N**3 * 8} data bytes, got {len(body)}")
    return Chain2(_fields_from(body, N, 3))


def write_green_set(green: GreenSet, path) -> None:
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(GREEN_MAGIC, FORMAT_VERSION, green.N))
        fh.write(b"xyz\0")
        for G in green.G:
            fh.write(_fields_bytes(G.u))


def read_green_set(path, N: int | None = None) -> GreenSet:
    raw = Path(path).read_bytes()
    magic, version, n = _HEADER.unpack_from(raw)
    if magic != GREEN_MAGIC or version != FORMAT_VERSION:
        raise FormatError(f"{path}: not a version-{FORMAT_VERSION} Green set file")
    check_period(n)
    if N is not None and n != N:
        raise FormatError(f"{path}: cached for N={n}, requested N={N}")
    off = _HEADER.size
    if raw[off:off + 4] != b"xyz\0":
        raise FormatError(f"{path}: unexpected axis order {raw[off:off + 4]!r}")
    body = raw[off + 4:]
    if len(body) != 9 * n**3 * 8:
        raise FormatError(f"{path}: wrong payload size")
    fields = _fields_from(body, n, 9).reshape(3, 3, n, n, n)
    Gx = Chain2(fields[0])
    green = GreenSet.from_x(Gx)
    stored = np.stack([fields[1], fields[2]])
    if not np.array_equal(stored, np.stack([green.G[1].u, green.G[2].u])):
        raise FormatError(f"{path}: G_y/G_z are not rotations of G_x")
    return green
