"""Escape-time images of the dynamical and parameter planes.

Images are binary PPM (P6) with 8-bit channels. Colours depend only on the
integer escape index of each pixel, and every pixel is computed
independently on fixed tiles, so output bytes do not depend on the thread
count.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Union

import numba
import numpy as np

from ._tiling import run_tiled
from .critical_finder import RESIDUAL_TOL, blaschke_crits
from .fatou import escape_grid
from .orbit import DEFAULT_MAX_ITER, DEFAULT_RHO, _signature
from .rational_map import ParameterPair, _deriv, _deriv2

__all__ = [
    "DEFAULT_LAMBDA_CENTER",
    "DEFAULT_LAMBDA_WIDTH",
    "Palette",
    "ImageBuffer",
    "ParameterGrid",
    "render_dynamical",
    "render_parameter",
    "parameter_escape_grid",
    "read_ppm",
]

RGB = tuple[int, int, int]

# lambda window showing the bifurcation locus around the origin for a = 0.5
DEFAULT_LAMBDA_CENTER = complex(-0.7e-5, 0.0)
DEFAULT_LAMBDA_WIDTH = 1.6e-4


@dataclass(frozen=True)
class Palette:
    """Yellow-to-red gradient over ``log(1 + e) / log(1 + max_iter)``."""

    start: RGB = (255, 255, 0)
    end: RGB = (200, 0, 0)
    interior: RGB = (0, 0, 0)
    parameter_interior: RGB = (0, 160, 0)

    def gradient_position(self, escape_index, max_iter: int) -> np.ndarray:
        e = np.maximum(np.asarray(escape_index, np.float64), 0.0)
        return np.minimum(np.log1p(e) / math.log1p(max_iter), 1.0)

    def colorize(self, escape_index: np.ndarray, max_iter: int, *, parameter_plane: bool = False) -> np.ndarray:
        """``(ny, nx, 3)`` uint8 colours; negative indices get the interior colour."""
        escape_index = np.asarray(escape_index)
        s = self.gradient_position(escape_index, max_iter)[..., None]
        start = np.array(self.start, np.float64)
        end = np.array(self.end, np.float64)
        rgb = np.rint(start + s * (end - start)).astype(np.uint8)
        inside = self.parameter_interior if parameter_plane else self.interior
        rgb[escape_index < 0] = inside
        return rgb


@dataclass
class ImageBuffer:
    """Row-major RGB image, row 0 at the top."""

    width: int
    height: int
    pixels: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.pixels.shape != (self.height, self.width, 3) or self.pixels.dtype != np.uint8:
            raise ValueError("pixels must be a (height, width, 3) uint8 array")

    def to_ppm(self) -> bytes:
        header = f"P6\n{self.width} {self.height}\n255\n".encode("ascii")
        return header + np.ascontiguousarray(self.pixels).tobytes()

    def write(self, path: Union[str, Path]) -> Path:
        path = Path(path)
        path.write_bytes(self.to_ppm())
        return path


def read_ppm(path: Union[str, Path]) -> ImageBuffer:
    """Read back a file written by :meth:`ImageBuffer.write`."""
    data = Path(path).read_bytes()
    magic, dims, maxval, body = data.split(b"\n", 3)
    if magic != b"P6" or maxval != b"255":
        raise ValueError(f"{path}: not an 8-bit binary PPM")
    w, h = map(int, dims.split())
    pixels = np.frombuffer(body, np.uint8).reshape(h, w, 3).copy()
    return ImageBuffer(w, h, pixels)


def render_dynamical(
    p: ParameterPair,
    center: complex = 0j,
    width: float = 2.4,
    height: Optional[float] = None,
    nx: int = 512,
    ny: Optional[int] = None,
    max_iter: int = DEFAULT_MAX_ITER,
    palette: Palette = Palette(),
    *,
    rho: float = DEFAULT_RHO,
    threads: int = 1,
) -> ImageBuffer:
    """Colour the dynamical plane by escape index; non-escaping pixels black."""
    grid = escape_grid(p, center, width, height, nx, ny, max_iter, rho=rho, threads=threads)
    rgb = palette.colorize(grid.escape_index, max_iter)
    return ImageBuffer(grid.nx, grid.ny, rgb)


# -- parameter plane -----------------------------------------------------------

@numba.njit(cache=True, nogil=True)
def _polish_crit(a, lam, seed, tol):
    """Newton on ``B'`` from ``seed``; ``(root, ok)`` with the library's rules."""
    z = seed
    trust = -1.0
    for _ in range(50):
        if z == 0:
            return z, False
        d2 = _deriv2(a, lam, z)
        if d2 == 0 or not (math.isfinite(d2.real) and math.isfinite(d2.imag)):
            return z, False
        step = _deriv(a, lam, z) / d2
        z = z - step
        if trust < 0:
            trust = 10.0 * abs(step)
        if abs(z - seed) > trust and abs(z - seed) > 1e-300:
            return z, False
        if abs(step) <= 4e-16 * abs(z):
            break
    if z == 0:
        return z, False
    scale = max(1.0, abs(lam) / abs(z) ** 3)
    return z, abs(_deriv(a, lam, z)) / scale < tol


@numba.njit(cache=True, nogil=True)
def _parameter_tile(esc, j0, j1, i0, i1, x0, y0, dx, dy, a, seed, max_iter, rho, tol):
    for j in range(j0, j1):
        for i in range(i0, i1):
            lam = complex(x0 + (i + 0.5) * dx, y0 - (j + 0.5) * dy)
            c, ok = _polish_crit(a, lam, seed, tol)
            if not ok:
                esc[j, i] = -1
                continue
            cert = 0.0
            if lam != 0:
                cert = (abs(lam) / (2.0 * abs(a))) ** 0.2 / rho
            e, _ = _signature(a, lam, c, max_iter, cert, a, 0.0)
            esc[j, i] = e


@dataclass
class ParameterGrid:
    """Escape index of ``c_minus(a, lam)`` over a window of ``lam`` values."""

    a: complex
    center: complex
    width: float
    height: float
    nx: int
    ny: int
    max_iter: int
    escape_index: np.ndarray

    def pixel(self, lam: complex) -> tuple[int, int]:
        i = math.floor((lam.real - (self.center.real - self.width / 2)) / (self.width / self.nx))
        j = math.floor(((self.center.imag + self.height / 2) - lam.imag) / (self.height / self.ny))
        return i, j


def parameter_escape_grid(
    a: complex,
    center: complex = DEFAULT_LAMBDA_CENTER,
    width: float = DEFAULT_LAMBDA_WIDTH,
    height: Optional[float] = None,
    nx: int = 256,
    ny: Optional[int] = None,
    max_iter: int = DEFAULT_MAX_ITER,
    *,
    rho: float = DEFAULT_RHO,
    threads: int = 1,
) -> ParameterGrid:
    """Per-pixel escape index of the free critical point ``c_minus``.

    ``c_minus`` is polished by Newton from the unperturbed closed form;
    pixels where that fails are reported as non-escaping (``-1``).
    """
    ny = nx if ny is None else ny
    if height is None:
        height = width * ny / nx
    if nx < 1 or ny < 1 or not (width > 0 and height > 0):
        raise ValueError("window and resolution must be positive")
    a = complex(a)
    center = complex(center)
    seed, _ = blaschke_crits(a)
    esc = np.empty((ny, nx), np.int32)
    x0 = center.real - width / 2
    y0 = center.imag + height / 2
    dx, dy = width / nx, height / ny

    def work(j0, j1, i0, i1):
        _parameter_tile(esc, j0, j1, i0, i1, x0, y0, dx, dy, a, seed, max_iter, rho, RESIDUAL_TOL)

    run_tiled(work, ny, nx, threads)
    return ParameterGrid(a, center, width, height, nx, ny, max_iter, esc)


def render_parameter(
    a: complex,
    center: complex = DEFAULT_LAMBDA_CENTER,
    width: float = DEFAULT_LAMBDA_WIDTH,
    height: Optional[float] = None,
    nx: int = 256,
    ny: Optional[int] = None,
    max_iter: int = DEFAULT_MAX_ITER,
    palette: Palette = Palette(),
    *,
    rho: float = DEFAULT_RHO,
    threads: int = 1,
) -> ImageBuffer:
    """Colour the ``lam``-plane by escape of ``c_minus``; green where it stays."""
    grid = parameter_escape_grid(a, center, width, height, nx, ny, max_iter, rho=rho, threads=threads)
    rgb = palette.colorize(grid.escape_index, max_iter, parameter_plane=True)
    return ImageBuffer(grid.nx, grid.ny, rgb)
