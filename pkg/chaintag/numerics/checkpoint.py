"""
CHAINTAG1 parameter container.

Layout (all integers little-endian uint32):
    b"CHAINTAG1", entry count,
    per entry: name length, UTF-8 name, rows, cols, rows*cols float64 (LE, row-major)
"""

import struct
from typing import BinaryIO

import numpy as np

from ..errors import CheckpointError
from .params import ParameterStore

MAGIC = b"CHAINTAG1"
_U32 = struct.Struct("<I")


def _read_exact(stream: BinaryIO, n: int) -> bytes:
    data = stream.read(n)
    if len(data) != n:
        raise CheckpointError(f"truncated checkpoint: wanted {n} bytes, got {len(data)}")
    return data


def _read_u32(stream: BinaryIO) -> int:
    return int(_U32.unpack(_read_exact(stream, 4))[0])


def write_store(store: ParameterStore, stream: BinaryIO) -> None:
    stream.write(MAGIC)
    stream.write(_U32.pack(len(store)))
    for param in store:
        name = param.name.encode("utf-8")
        rows, cols = param.shape
        stream.write(_U32.pack(len(name)))
        stream.write(name)
        stream.write(_U32.pack(rows))
        stream.write(_U32.pack(cols))
        stream.write(np.ascontiguousarray(param.value, dtype="<f8").tobytes())


def read_store(stream: BinaryIO) -> ParameterStore:
    """Read one container; entries come back with init rule "keep"."""
    if _read_exact(stream, len(MAGIC)) != MAGIC:
        raise CheckpointError("not a CHAINTAG1 checkpoint")
    store = ParameterStore()
    for _ in range(_read_u32(stream)):
        name = _read_exact(stream, _read_u32(stream)).decode("utf-8")
        rows = _read_u32(stream)
        cols = _read_u32(stream)
        raw = _read_exact(stream, 8 * rows * cols)
        values = np.frombuffer(raw, dtype="<f8").astype(np.float64).reshape(rows, cols)
        if not np.all(np.isfinite(values)):
            raise CheckpointError(f"non-finite values in entry {name!r}")
        store.register(name, (rows, cols), init="keep", value=values)
    return store


__all__ = ["MAGIC", "write_store", "read_store"]
