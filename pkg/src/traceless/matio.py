"""Text serialization for complex matrices and point sets.

Format: first line ``m n``, then m lines of n whitespace-separated entries,
each entry ``re,im`` printed with 17 significant digits so that reading the
file back reproduces the exact float64 values.  Point sets use the same
format with n = 1.
"""

from __future__ import annotations

import os

import numpy as np

from .linalg import as_matrix

__all__ = ["format_matrix", "write_matrix", "read_matrix", "write_points", "read_points"]


class MatrixFormatError(ValueError):
    """Raised when a matrix file cannot be parsed."""


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def format_matrix(a) -> str:
    a = as_matrix(a)
    rows, cols = a.shape
    lines = [f"{rows} {cols}"]
    for i in range(rows):
        lines.append(" ".join(f"{_fmt(z.real)},{_fmt(z.imag)}" for z in a[i]))
    return "\n".join(lines) + "\n"


def write_matrix(path: str | os.PathLike, a) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_matrix(a))


def read_matrix(path: str | os.PathLike) -> np.ndarray:
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    lines = [ln for ln in text.split("\n") if ln.strip()]
    if not lines:
        raise MatrixFormatError("empty matrix file")
    header = lines[0].split()
    if len(header) != 2:
        raise MatrixFormatError(f"bad header line: {lines[0]!r}")
    try:
        rows, cols = int(header[0]), int(header[1])
    except ValueError as exc:
        raise MatrixFormatError(f"bad header line: {lines[0]!r}") from exc
    if rows < 1 or cols < 1:
        raise MatrixFormatError(f"bad dimensions {rows}x{cols}")
    if len(lines) != rows + 1:
        raise MatrixFormatError(f"expected {rows} data lines, found {len(lines) - 1}")
    out = np.empty((rows, cols), dtype=complex)
    for i, ln in enumerate(lines[1:]):
        fields = ln.split()
        if len(fields) != cols:
            raise MatrixFormatError(f"row {i}: expected {cols} entries, found {len(fields)}")
        for j, field in enumerate(fields):
            parts = field.split(",")
            if len(parts) != 2:
                raise MatrixFormatError(f"row {i}, col {j}: bad entry {field!r}")
            try:
                out[i, j] = complex(float(parts[0]), float(parts[1]))
            except ValueError as exc:
                raise MatrixFormatError(f"row {i}, col {j}: bad entry {field!r}") from exc
    if not np.all(np.isfinite(out.view(float))):
        raise MatrixFormatError("matrix has non-finite entries")
    return out


def write_points(path: str | os.PathLike, points) -> None:
    pts = np.asarray(points, dtype=complex).reshape(-1, 1)
    write_matrix(path, pts)


def read_points(path: str | os.PathLike) -> np.ndarray:
    a = read_matrix(path)
    if a.shape[1] != 1:
        raise MatrixFormatError(f"point file must have one column, got {a.shape[1]}")
    return a[:, 0]
