"""Minimal PGM writer: plain (P2) for small images, raw (P5) otherwise."""
from __future__ import annotations

from pathlib import Path
from typing import Union

import numpy as np

PLAIN_LIMIT = 10_000
_LINE = 70


def encode(values: np.ndarray, maxval: int) -> bytes:
    """Encode a 2-D array of grey levels in ``0..maxval``; row 0 is the top line."""
    values = np.asarray(values)
    if values.ndim != 2:
        raise ValueError("PGM needs a 2-D array")
    if not 1 <= maxval <= 255:
        raise ValueError("maxval must be in 1..255")
    if values.size and (values.min() < 0 or values.max() > maxval):
        raise ValueError("grey level outside 0..maxval")
    h, w = values.shape
    if values.size <= PLAIN_LIMIT:
        return _plain(values, maxval)
    head = f"P5\n{w} {h}\n{maxval}\n".encode("ascii")
    return head + values.astype(np.uint8).tobytes()


def _plain(values: np.ndarray, maxval: int) -> bytes:
    h, w = values.shape
    lines = ["P2", f"{w} {h}", str(maxval)]
    for row in values.tolist():
        line = ""
        for v in row:
            tok = str(v)
            if line and len(line) + 1 + len(tok) > _LINE:
                lines.append(line)
                line = tok
            else:
                line = f"{line} {tok}" if line else tok
        lines.append(line)
    return ("\n".join(lines) + "\n").encode("ascii")


def decode(data: bytes) -> np.ndarray:
    """Inverse of :func:`encode` (no comment lines)."""
    magic = data[:2]
    if magic == b"P2":
        toks = data.split()
        w, h = int(toks[1]), int(toks[2])
        return np.array([int(t) for t in toks[4:4 + w * h]], np.int64).reshape(h, w)
    if magic == b"P5":
        toks = data.split(maxsplit=4)
        w, h = int(toks[1]), int(toks[2])
        body = data[len(data) - w * h:]
        return np.frombuffer(body, np.uint8).astype(np.int64).reshape(h, w)
    raise ValueError("not a PGM image")


def write(path: Union[str, Path], values: np.ndarray, maxval: int) -> None:
    Path(path).write_bytes(encode(values, maxval))
