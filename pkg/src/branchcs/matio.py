"""Binary and CSV matrix formats.

Binary layout: 16-byte header (magic "BPM1", u32 rows, u32 cols, u32 flags
with bit 0 set for complex data), then row-major little-endian f64 values,
interleaved re/im when complex.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

MAGIC = b"BPM1"
FLAG_COMPLEX = 0x1
CSV_MAX_SIDE = 256

__all__ = ["write_matrix", "read_matrix", "write_csv"]


def write_matrix(path, arr: np.ndarray) -> None:
    arr = np.asarray(arr)
    if arr.ndim != 2:
        raise ValueError("expected a 2-D matrix")
    flags = FLAG_COMPLEX if np.iscomplexobj(arr) else 0
    header = MAGIC + struct.pack("<III", arr.shape[0], arr.shape[1], flags)
    if flags & FLAG_COMPLEX:
        body = np.ascontiguousarray(arr, dtype="<c16").tobytes()
    else:
        body = np.ascontiguousarray(arr, dtype="<f8").tobytes()
    Path(path).write_bytes(header + body)


def read_matrix(path) -> np.ndarray:
    raw = Path(path).read_bytes()
    if len(raw) < 16 or raw[:4] != MAGIC:
        raise ValueError(f"{path}: not a BPM1 matrix file")
    rows, cols, flags = struct.unpack("<III", raw[4:16])
    if flags & FLAG_COMPLEX:
        data = np.frombuffer(raw[16:], dtype="<c16", count=rows * cols)
    else:
        data = np.frombuffer(raw[16:], dtype="<f8", count=rows * cols)
    return data.reshape(rows, cols).copy()


def write_csv(path, arr: np.ndarray) -> None:
    arr = np.asarray(arr)
    if max(arr.shape) > CSV_MAX_SIDE:
        raise ValueError(f"CSV export limited to {CSV_MAX_SIDE}x{CSV_MAX_SIDE}")
    if np.iscomplexobj(arr):
        with open(path, "w") as fh:
            for row in arr:
                fh.write(",".join(f"{v.real:.17g}{v.imag:+.17g}j" for v in row))
                fh.write("\n")
    else:
        np.savetxt(path, arr, delimiter=",", fmt="%.17g")
