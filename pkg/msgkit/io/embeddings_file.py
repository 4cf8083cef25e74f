"""
Binary embedding file (little-endian).

Layout:
    header     "MSGE", version u32 = 1, dim u32, frame count u32
    per frame  frame_id u32, detection count u32,
               place embedding (dim x f32), detection embeddings (count x dim x f32)
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from msgkit.association import EmbeddingSet
from msgkit.errors import EmbeddingError, FormatError
from msgkit.io.atomic import write_bytes_atomic

MAGIC = b"MSGE"
VERSION = 1

_HEADER = struct.Struct("<4sIII")
_FRAME = struct.Struct("<II")
_F32 = np.dtype("<f4")


def encode_embeddings(emb: EmbeddingSet) -> bytes:
    out = bytearray(_HEADER.pack(MAGIC, VERSION, emb.dim, emb.num_frames))
    for frame_id, place, objects in zip(emb.frame_ids or (), emb.place, emb.objects):
        out.extend(_FRAME.pack(frame_id, objects.shape[0]))
        out.extend(place.astype(_F32).tobytes())
        out.extend(objects.astype(_F32).tobytes())
    return bytes(out)


def _take(data: bytes, offset: int, size: int) -> bytes:
    if len(data) - offset < size:
        raise FormatError("unexpected end of embeddings")
    return data[offset : offset + size]


def decode_embeddings(data: bytes) -> EmbeddingSet:
    """Parse an embedding file; wrong magic or version, truncation and trailing bytes raise FormatError."""
    magic, version, dim, count = _HEADER.unpack(_take(data, 0, _HEADER.size))
    if magic != MAGIC:
        raise FormatError(f"not an embedding file: magic {magic!r}")
    if version != VERSION:
        raise FormatError(f"unsupported embedding file version {version}")
    if dim == 0:
        raise FormatError("embedding dim must be > 0")

    offset = _HEADER.size
    vector = dim * _F32.itemsize
    frame_ids, places, objects = [], [], []
    for _ in range(count):
        frame_id, n = _FRAME.unpack(_take(data, offset, _FRAME.size))
        offset += _FRAME.size
        block = _take(data, offset, vector * (n + 1))
        offset += len(block)
        values = np.frombuffer(block, dtype=_F32).astype(np.float64).reshape(n + 1, dim)
        frame_ids.append(frame_id)
        places.append(values[0])
        objects.append(values[1:])
    if offset != len(data):
        raise FormatError(f"{len(data) - offset} trailing bytes after {count} frames")

    try:
        return EmbeddingSet(dim, np.array(places).reshape(count, dim), tuple(objects), tuple(frame_ids))
    except EmbeddingError as e:
        raise FormatError(str(e)) from e


def save_embeddings(path: str | Path, emb: EmbeddingSet) -> Path:
    return write_bytes_atomic(path, encode_embeddings(emb))


def load_embeddings(path: str | Path) -> EmbeddingSet:
    return decode_embeddings(Path(path).read_bytes())
