"""Field serialization.

CSV layout: one row per grid point, columns ``i0[, i1, ...], real, imag``.

Binary layout (little-endian)::

    offset  size  content
    0       8     magic b"BQFIELD1"
    8       4     uint32 dim
    12      4     uint32 n (points per axis)
    16      8     float64 box length L
    24      8     uint64 reserved, always 0
    32      ...   complex128 values, C order, n**dim entries
"""

import csv
import io
import itertools
import struct
from pathlib import Path

import numpy as np

from .spectral import ComplexField, Grid

MAGIC = b"BQFIELD1"
_HEADER = struct.Struct("<8sIIdQ")
assert _HEADER.size == 32


def _fmt(x: float) -> str:
    return repr(float(x))


def field_to_csv(field: ComplexField) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    dim = field.grid.dim
    writer.writerow([f"i{ax}" for ax in range(dim)] + ["real", "imag"])
    for idx in itertools.product(range(field.grid.n), repeat=dim):
        z = field.values[idx]
        writer.writerow(list(idx) + [_fmt(z.real), _fmt(z.imag)])
    return buf.getvalue()


def field_from_csv(text: str, length: float) -> ComplexField:
    rows = list(csv.reader(io.StringIO(text)))
    header, body = rows[0], rows[1:]
    dim = len(header) - 2
    n = round(len(body) ** (1.0 / dim))
    if n**dim != len(body):
        raise ValueError(f"row count {len(body)} is not a perfect power n^{dim}")
    values = np.zeros((n,) * dim, dtype=complex)
    for row in body:
        idx = tuple(int(s) for s in row[:dim])
        values[idx] = complex(float(row[dim]), float(row[dim + 1]))
    return ComplexField(Grid(dim, n, length), values)


def field_to_bytes(field: ComplexField) -> bytes:
    g = field.grid
    header = _HEADER.pack(MAGIC, g.dim, g.n, float(g.length), 0)
    return header + np.ascontiguousarray(field.values, dtype="<c16").tobytes()


def field_from_bytes(data: bytes) -> ComplexField:
    if len(data) < _HEADER.size:
        raise ValueError("truncated field header")
    magic, dim, n, length, _ = _HEADER.unpack_from(data)
    if magic != MAGIC:
        raise ValueError(f"bad magic {magic!r}")
    count = n**dim
    payload = data[_HEADER.size:]
    if len(payload) != 16 * count:
        raise ValueError(f"expected {count} complex128 values, found {len(payload) / 16:g}")
    values = np.frombuffer(payload, dtype="<c16").reshape((n,) * dim)
    return ComplexField(Grid(dim, n, length), values)


def save_field(field: ComplexField, path) -> None:
    path = Path(path)
    if path.suffix == ".csv":
        path.write_text(field_to_csv(field))
    else:
        path.write_bytes(field_to_bytes(field))


def load_field(path, length: float | None = None) -> ComplexField:
    path = Path(path)
    if path.suffix == ".csv":
        if length is None:
            raise ValueError("CSV fields do not carry the box length; pass length=")
        return field_from_csv(path.read_text(), length)
    return field_from_bytes(path.read_bytes())
