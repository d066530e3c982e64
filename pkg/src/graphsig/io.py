"""Plain-text and PGM file formats.

Edge list::

    N M
    i j w        (M lines, 0-based vertex indices)

Point cloud::

    N D
    x_1 ... x_D  (N lines)

Signal: one float per line. All floats are written with ``%.12g`` and LF
line endings; every writer goes through :func:`atomic_write`.
"""

from __future__ import annotations

import os
import re
import tempfile
from pathlib import Path

import numpy as np

from .errors import FileFormatError
from .graph import Graph

FLOAT_FMT = "%.12g"


def fmt(x) -> str:
    return FLOAT_FMT % x


def atomic_write(path, data) -> None:
    """Write ``data`` (str or bytes) to a temp file beside ``path`` and rename it into place."""
    path = Path(path)
    raw = data.encode() if isinstance(data, str) else bytes(data)
    fd, tmp = tempfile.mkstemp(dir=path.parent if str(path.parent) else ".", prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(raw)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _rows(path):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise FileFormatError(f"cannot read {path}: {exc}") from exc
    return [ln.split() for ln in text.splitlines() if ln.strip()]


def _header(rows, path, what):
    if not rows or len(rows[0]) != 2:
        raise FileFormatError(f"{path}: expected '{what}' header line")
    try:
        return int(rows[0][0]), int(rows[0][1])
    except ValueError:
        raise FileFormatError(f"{path}: header must hold two integers") from None


def read_edge_list(path) -> Graph:
    rows = _rows(path)
    n, m = _header(rows, path, "N M")
    body = rows[1:]
    if len(body) != m:
        raise FileFormatError(f"{path}: header announces {m} edges, found {len(body)}")
    if any(len(r) != 3 for r in body):
        raise FileFormatError(f"{path}: edge lines must be 'i j w'")
    try:
        i = np.array([int(r[0]) for r in body], dtype=np.int64)
        j = np.array([int(r[1]) for r in body], dtype=np.int64)
        w = np.array([float(r[2]) for r in body], dtype=float)
    except ValueError as exc:
        raise FileFormatError(f"{path}: {exc}") from None
    return Graph.from_edges(n, i, j, w)


def write_edge_list(path, g: Graph) -> None:
    i, j, w = g.edges()
    lines = [f"{g.n} {len(i)}"]
    lines += [f"{a} {b} {fmt(x)}" for a, b, x in zip(i.tolist(), j.tolist(), w.tolist())]
    atomic_write(path, "\n".join(lines) + "\n")


def read_points(path) -> np.ndarray:
    rows = _rows(path)
    n, d = _header(rows, path, "N D")
    body = rows[1:]
    if len(body) != n or any(len(r) != d for r in body):
        raise FileFormatError(f"{path}: expected {n} rows of {d} values")
    try:
        return np.array(body, dtype=float)
    except ValueError as exc:
        raise FileFormatError(f"{path}: {exc}") from None


def write_points(path, X) -> None:
    X = np.atleast_2d(np.asarray(X, dtype=float))
    lines = [f"{X.shape[0]} {X.shape[1]}"] + [" ".join(fmt(v) for v in row) for row in X]
    atomic_write(path, "\n".join(lines) + "\n")


def read_signal(path, n: int | None = None) -> np.ndarray:
    rows = _rows(path)
    if any(len(r) != 1 for r in rows):
        raise FileFormatError(f"{path}: signal files hold one value per line")
    try:
        f = np.array([float(r[0]) for r in rows])
    except ValueError as exc:
        raise FileFormatError(f"{path}: {exc}") from None
    if n is not None and f.size != n:
        raise FileFormatError(f"{path}: expected {n} values, found {f.size}")
    if not np.all(np.isfinite(f)):
        raise FileFormatError(f"{path}: non-finite signal value")
    return f


def format_signal(f) -> str:
    return "".join(fmt(v) + "\n" for v in np.asarray(f, dtype=float).ravel())


def write_signal(path, f) -> None:
    atomic_write(path, format_signal(f))


def format_csv(header, rows) -> str:
    def cell(v):
        if isinstance(v, (float, np.floating)):
            return fmt(v)
        return str(v)

    lines = [",".join(header)] + [",".join(cell(v) for v in r) for r in rows]
    return "\n".join(lines) + "\n"


def write_csv(path, header, rows) -> None:
    atomic_write(path, format_csv(header, rows))


def write_spectrum(path, s, dump_u=None) -> None:
    """``ell,lambda`` CSV; optionally the dense eigenvector matrix to ``dump_u``."""
    write_csv(path, ["ell", "lambda"], [(l, float(v)) for l, v in enumerate(s.eigenvalues)])
    if dump_u is not None:
        U = s.eigenvectors
        write_csv(dump_u, [f"u{l}" for l in range(U.shape[1])], [list(map(float, r)) for r in U])


# -- PGM ---------------------------------------------------------------------------------

def _pgm_tokens(data: bytes, count: int):
    """First ``count`` header tokens (skipping comments) and the offset after them."""
    tokens, pos = [], 0
    while len(tokens) < count:
        while pos < len(data) and data[pos:pos + 1].isspace():
            pos += 1
        if pos >= len(data):
            raise FileFormatError("truncated PGM header")
        if data[pos:pos + 1] == b"#":
            while pos < len(data) and data[pos:pos + 1] not in (b"\n", b"\r"):
                pos += 1
            continue
        start = pos
        while pos < len(data) and not data[pos:pos + 1].isspace():
            pos += 1
        tokens.append(data[start:pos].decode("ascii"))
    return tokens, pos


def read_pgm(path) -> np.ndarray:
    """Read a P2 or P5 PGM (maxval <= 255) as floats ``v / maxval`` with shape (height, width)."""
    data = Path(path).read_bytes()
    tokens, pos = _pgm_tokens(data, 4)
    magic = tokens[0]
    try:
        width, height, maxval = map(int, tokens[1:])
    except ValueError:
        raise FileFormatError(f"{path}: malformed PGM header") from None
    if width < 1 or height < 1 or not 0 < maxval <= 255:
        raise FileFormatError(f"{path}: unsupported PGM dimensions or maxval")
    count = width * height
    if magic == "P5":
        raw = data[pos + 1: pos + 1 + count]
        if len(raw) != count:
            raise FileFormatError(f"{path}: expected {count} pixel bytes, found {len(raw)}")
        vals = np.frombuffer(raw, dtype=np.uint8).astype(float)
    elif magic == "P2":
        body = re.sub(rb"#[^\r\n]*", b"", data[pos:])
        vals = np.array(body.split(), dtype=float)
        if vals.size != count:
            raise FileFormatError(f"{path}: expected {count} pixel values, found {vals.size}")
    else:
        raise FileFormatError(f"{path}: not a P2/P5 PGM file")
    if np.any(vals > maxval):
        raise FileFormatError(f"{path}: pixel value exceeds maxval")
    return (vals / maxval).reshape(height, width)


def write_pgm(path, pixels, binary: bool = True) -> None:
    """Write pixels in [0, 1] (clamped) as an 8-bit PGM, ``round(255 v)``."""
    P = np.clip(np.asarray(pixels, dtype=float), 0.0, 1.0)
    q = np.rint(P * 255).astype(np.uint8)
    h, w = q.shape
    if binary:
        atomic_write(path, f"P5\n{w} {h}\n255\n".encode() + q.tobytes())
    else:
        lines = [f"P2\n{w} {h}\n255"] + [" ".join(map(str, row)) for row in q.tolist()]
        atomic_write(path, "\n".join(lines) + "\n")
