"""Minimal binary PGM (P5) reader/writer.

8-bit maps and 16-bit heightmaps; 16-bit samples are big-endian per the
netpbm convention.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from ..errors import MapFormatError


def read_pgm(path: str | Path) -> np.ndarray:
    """Read a binary PGM; returns uint8 or uint16 array of shape (H, W)."""
    data = Path(path).read_bytes()
    if data[:2] != b"P5":
        raise MapFormatError(f"{path}: not a binary PGM (expected P5 magic)")
    # header tokens: magic, width, height, maxval; '#' starts a comment
    tokens: list[bytes] = []
    pos = 2
    while len(tokens) < 3:
        while pos < len(data) and data[pos:pos + 1].isspace():
            pos += 1
        if pos < len(data) and data[pos:pos + 1] == b"#":
            while pos < len(data) and data[pos:pos + 1] != b"\n":
                pos += 1
            continue
        start = pos
        while pos < len(data) and not data[pos:pos + 1].isspace():
            pos += 1
        if start == pos:
            raise MapFormatError(f"{path}: truncated PGM header")
        tokens.append(data[start:pos])
    pos += 1  # single whitespace byte after maxval
    try:
        width, height, maxval = (int(t) for t in tokens)
    except ValueError as err:
        raise MapFormatError(f"{path}: malformed PGM header") from err
    if width < 1 or height < 1:
        raise MapFormatError(f"{path}: PGM dimensions must be >= 1")
    if maxval <= 0 or maxval >= 65536:
        raise MapFormatError(f"{path}: PGM maxval out of range: {maxval}")
    dtype = np.uint8 if maxval < 256 else np.dtype(">u2")
    count = width * height
    try:
        pixels = np.frombuffer(data, dtype=dtype, count=count, offset=pos)
    except ValueError as err:
        raise MapFormatError(f"{path}: PGM pixel data truncated") from err
    return pixels.reshape(height, width).astype(
        np.uint8 if maxval < 256 else np.uint16)


def write_pgm(path: str | Path, pixels: np.ndarray) -> None:
    """Write a uint8 or uint16 array as binary PGM."""
    pixels = np.asarray(pixels)
    if pixels.ndim != 2:
        raise MapFormatError("PGM data must be 2-D")
    if pixels.dtype == np.uint8:
        maxval, raw = 255, pixels.tobytes()
    elif pixels.dtype == np.uint16:
        maxval, raw = 65535, pixels.astype(">u2").tobytes()
    else:
        raise MapFormatError(f"unsupported PGM dtype: {pixels.dtype}")
    header = f"P5\n{pixels.shape[1]} {pixels.shape[0]}\n{maxval}\n".encode()
    Path(path).write_bytes(header + raw)
