"""Deterministic binary container for named float arrays.

Layout::

    magic      8 bytes   b"CCARRAY1"
    hlen       8 bytes   little-endian uint64, length of the JSON header
    header     hlen      UTF-8 JSON, sorted keys:
                         {"meta": {...}, "arrays": [{"name", "dtype", "shape", "offset", "nbytes"}]}
    payload    rest      row-major little-endian array data at the listed offsets

Unlike ``.npz`` (a zip with timestamps) the bytes depend only on content.
"""

from __future__ import annotations

import json
import os
import struct

import numpy as np

MAGIC = b"CCARRAY1"


def save_arrays(path, meta: dict, arrays: dict) -> None:
    entries, blobs, offset = [], [], 0
    for name in sorted(arrays):
        a = np.asarray(arrays[name])
        dt = a.dtype.newbyteorder("<") if a.dtype.byteorder not in ("|",) else a.dtype
        data = np.ascontiguousarray(a, dtype=dt).tobytes()
        entries.append({"name": name, "dtype": dt.str, "shape": list(a.shape), "offset": offset, "nbytes": len(data)})
        blobs.append(data)
        offset += len(data)
    header = json.dumps({"meta": meta, "arrays": entries}, sort_keys=True, separators=(",", ":")).encode("utf-8")
    tmp = f"{path}.tmp"
    with open(tmp, "wb") as f:
        f.write(MAGIC)
        f.write(struct.pack("<Q", len(header)))
        f.write(header)
        for b in blobs:
            f.write(b)
    os.replace(tmp, path)


def read_meta(path) -> dict:
    """The metadata block alone, without reading the array payload."""
    with open(path, "rb") as f:
        if f.read(8) != MAGIC:
            raise ValueError(f"{path}: not a codecontrast array container")
        (hlen,) = struct.unpack("<Q", f.read(8))
        return json.loads(f.read(hlen).decode("utf-8"))["meta"]


def load_arrays(path) -> tuple[dict, dict]:
    with open(path, "rb") as f:
        raw = f.read()
    if raw[:8] != MAGIC:
        raise ValueError(f"{path}: not a codecontrast array container")
    (hlen,) = struct.unpack("<Q", raw[8:16])
    header = json.loads(raw[16:16 + hlen].decode("utf-8"))
    base = 16 + hlen
    arrays = {}
    for e in header["arrays"]:
        start = base + e["offset"]
        buf = raw[start:start + e["nbytes"]]
        arrays[e["name"]] = np.frombuffer(buf, dtype=np.dtype(e["dtype"])).reshape(e["shape"]).copy()
    return header["meta"], arrays
