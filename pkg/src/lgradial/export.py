"""Text and image encodings for fields, tables and reports.

Output is deterministic: numbers are written with 17 significant digits and
images are peak-normalized before quantization.
"""
from __future__ import annotations

import math
import sys
from pathlib import Path
from typing import Any, Iterable, Sequence, Union

import numpy as np
import ujson

from .exceptions import GridError
from .fields import CartesianGrid, FieldMap, PolarGrid

__all__ = ("fmt", "field_csv", "field_pgm", "table_csv", "to_json", "write_output")

PGM_MAXVAL = 65535


def fmt(value: float) -> str:
    return f"{value:.17g}"


def field_csv(field: FieldMap) -> str:
    """`r,phi,re,im,intensity` rows, row-major over (r_j, phi_m).

    Cartesian fields are written as `x,y,re,im,intensity`."""
    grid = field.grid
    if isinstance(grid, PolarGrid):
        header = "r,phi,re,im,intensity"
        first, second = grid.r, grid.phi
    else:
        header = "x,y,re,im,intensity"
        first = second = grid.x

    lines = [header]
    amplitudes = field.amplitudes
    for i, u in enumerate(first):
        for j, v in enumerate(second):
            c = amplitudes[i, j]
            lines.append(
                ",".join((fmt(u), fmt(v), fmt(c.real), fmt(c.imag), fmt(abs(c) ** 2)))
            )
    return "\n".join(lines) + "\n"


def _resample(field: FieldMap, side: int) -> np.ndarray:
    """Nearest-neighbor intensity on a side x side Cartesian raster, +y up."""
    grid = field.grid
    intensity = field.intensity
    extent = grid.r_max if isinstance(grid, PolarGrid) else grid.half_width
    centers = -extent + (np.arange(side) + 0.5) * (2 * extent / side)
    x, y = np.meshgrid(centers, centers[::-1])

    if isinstance(grid, CartesianGrid):
        ix = np.clip(np.floor((x + extent) / grid.dx).astype(int), 0, grid.n - 1)
        iy = np.clip(np.floor((y + extent) / grid.dx).astype(int), 0, grid.n - 1)
        return intensity[ix, iy]

    r = np.hypot(x, y)
    phi = np.mod(np.arctan2(y, x), 2 * math.pi)
    j = np.floor(r / grid.dr).astype(int)
    m = np.mod(np.rint(phi / grid.dphi).astype(int), grid.n_phi)
    inside = j < grid.n_r
    image = np.zeros((side, side))
    image[inside] = intensity[j[inside], m[inside]]
    return image


def field_pgm(field: FieldMap, side: int = 256) -> bytes:
    """16-bit binary PGM (P5, maxval 65535) of the peak-normalized intensity."""
    if side < 2:
        raise GridError(f"image side must be at least 2, got {side}")
    image = _resample(field, side)
    peak = float(image.max())
    scaled = image / peak if peak > 0 else image
    pixels = np.rint(scaled * PGM_MAXVAL).astype(">u2")
    header = f"P5\n{side} {side}\n{PGM_MAXVAL}\n".encode("ascii")
    return header + pixels.tobytes()


def table_csv(
    header: Sequence[str],
    rows: Iterable[Sequence[Union[int, float]]],
    *,
    comments: Sequence[str] = (),
) -> str:
    """CSV table; each of `comments` becomes a leading `# ` line."""
    lines = [f"# {comment}" for comment in comments]
    lines.append(",".join(header))
    for row in rows:
        lines.append(",".join(str(v) if isinstance(v, (int, np.integer)) else fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def to_json(obj: Any) -> str:
    return ujson.dumps(obj, indent=2, sort_keys=True)


def write_output(data: Union[str, bytes], out: Union[str, Path, None]) -> None:
    """Write to `out`, or to stdout when it is None or '-'."""
    if out is None or str(out) == "-":
        if isinstance(data, bytes):
            sys.stdout.buffer.write(data)
            sys.stdout.buffer.flush()
        else:
            sys.stdout.write(data)
        return

    path = Path(out)
    if isinstance(data, bytes):
        path.write_bytes(data)
    else:
        path.write_text(data, encoding="utf-8")
