"""Three-way classification of the critical component, and raster topology.

A raster Fatou component is a maximal 4-connected pixel set sharing one
escape signature ``(escape index, route class)``. Points of a true Fatou
component in the basin of infinity need the same number of steps to reach
``A*`` and reach it through the same preimage (``A0`` or ``D0``), so the
signature is constant on components; distinct components can still share
it, which is why topology read off a raster is an estimate.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace
from typing import Optional

import numba
import numpy as np
from scipy import ndimage

from . import topology
from ._tiling import run_tiled
from .critical_finder import CriticalInventory, full_inventory
from .errors import DomainError, SeedNotEscapedError
from .orbit import (
    CLASSIFY_MAX_ITER,
    DEFAULT_MAX_ITER,
    DEFAULT_RHO,
    OrbitGeometry,
    RegionTag,
    _signature,
    geometry,
    iterate_orbit,
    orbit_signature,
)
from .rational_map import ParameterPair

__all__ = [
    "FatouCase",
    "ClassifierBudget",
    "Classification",
    "EscapeGrid",
    "ComponentStats",
    "PolarGrid",
    "classify",
    "classify_detailed",
    "surrounds_origin",
    "escape_grid",
    "polar_grid",
    "component_stats",
    "component_table",
    "critical_component",
    "signature_key",
]

MIN_GRID = 16
NO_ESCAPE = -1
ROUTE_SLOTS = 8


class FatouCase(str, enum.Enum):
    CASE_A = "CaseA"
    CASE_B = "CaseB"
    CASE_C = "CaseC"
    NOT_ESCAPING = "NotEscaping"
    UNDETERMINED = "Undetermined"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class ClassifierBudget:
    """Knobs for :func:`classify`; ``escape_tol`` is the surround test's slack."""

    max_iter: int = CLASSIFY_MAX_ITER
    n_theta: int = 720
    n_radial: int = 512
    escape_tol: int = 0
    rho: float = DEFAULT_RHO
    check_stability: bool = True


def signature_key(escape_index, route_class):
    """Pack a signature into one integer array; ``-1`` marks no escape."""
    escape_index = np.asarray(escape_index)
    return np.where(
        escape_index < 0,
        NO_ESCAPE,
        escape_index.astype(np.int64) * ROUTE_SLOTS + np.asarray(route_class),
    )


# -- cartesian grids ---------------------------------------------------------

@numba.njit(cache=True, nogil=True)
def _grid_tile(esc, route, j0, j1, i0, i1, x0, y0, dx, dy, a, lam, max_iter, cert_r, z0, d0_r):
    for j in range(j0, j1):
        y = y0 - (j + 0.5) * dy
        for i in range(i0, i1):
            e, r = _signature(a, lam, complex(x0 + (i + 0.5) * dx, y), max_iter, cert_r, z0, d0_r)
            esc[j, i] = e
            route[j, i] = r


@dataclass
class EscapeGrid:
    """Per-pixel escape data over a rectangular window.

    Pixel ``(i, j)`` is column ``i`` and row ``j`` (row 0 at the top), with
    centre ``center + (-w/2 + (i + 1/2) w/nx) + 1j (h/2 - (j + 1/2) h/ny)``.
    Arrays are indexed ``[j, i]``; ``escape_index`` holds ``-1`` for pixels
    that did not escape within ``max_iter``.
    """

    params: ParameterPair
    center: complex
    width: float
    height: float
    nx: int
    ny: int
    max_iter: int
    escape_index: np.ndarray
    route_class: np.ndarray
    geometry: OrbitGeometry = field(repr=False)

    @property
    def dx(self) -> float:
        return self.width / self.nx

    @property
    def dy(self) -> float:
        return self.height / self.ny

    def point(self, i: int, j: int) -> complex:
        return complex(
            self.center.real - self.width / 2 + (i + 0.5) * self.dx,
            self.center.imag + self.height / 2 - (j + 0.5) * self.dy,
        )

    def pixel(self, z: complex) -> tuple[int, int]:
        """``(i, j)`` of the pixel containing ``z``; may fall outside the grid."""
        i = math.floor((z.real - (self.center.real - self.width / 2)) / self.dx)
        j = math.floor(((self.center.imag + self.height / 2) - z.imag) / self.dy)
        return i, j

    def contains_pixel(self, i: int, j: int) -> bool:
        return 0 <= i < self.nx and 0 <= j < self.ny

    @property
    def key(self) -> np.ndarray:
        return signature_key(self.escape_index, self.route_class)

    @property
    def escaped(self) -> np.ndarray:
        return self.escape_index >= 0


def escape_grid(
    p: ParameterPair,
    center: complex = 0j,
    width: float = 2.4,
    height: Optional[float] = None,
    nx: int = 512,
    ny: Optional[int] = None,
    max_iter: int = DEFAULT_MAX_ITER,
    *,
    rho: float = DEFAULT_RHO,
    threads: int = 1,
    inventory: Optional[CriticalInventory] = None,
    geom: Optional[OrbitGeometry] = None,
) -> EscapeGrid:
    """Escape signatures at pixel centres, computed tile by tile."""
    ny = nx if ny is None else ny
    if height is None:
        height = width * ny / nx
    if nx < MIN_GRID or ny < MIN_GRID:
        raise ValueError(f"grid must be at least {MIN_GRID}x{MIN_GRID}")
    if not (width > 0 and height > 0):
        raise ValueError("window width and height must be positive")
    center = complex(center)
    g = geom or geometry(p, rho, inventory)
    esc = np.empty((ny, nx), np.int32)
    route = np.empty((ny, nx), np.int8)
    x0 = center.real - width / 2
    y0 = center.imag + height / 2
    dx, dy = width / nx, height / ny

    def work(j0, j1, i0, i1):
        _grid_tile(esc, route, j0, j1, i0, i1, x0, y0, dx, dy,
                   g.a, g.lam, max_iter, g.cert_radius, g.z0, g.d0_radius)

    run_tiled(work, ny, nx, threads)
    return EscapeGrid(p, center, width, height, nx, ny, max_iter, esc, route, g)


@dataclass(frozen=True)
class ComponentStats:
    pixel_count: int
    connectivity: int
    surrounds_origin: bool


def _component_mask(key: np.ndarray, j: int, i: int) -> np.ndarray:
    labels, _ = topology.label(key == key[j, i])
    return labels == labels[j, i]


def component_stats(grid: EscapeGrid, seed_pixel: tuple[int, int]) -> ComponentStats:
    """Topology of the raster component through ``seed_pixel = (i, j)``."""
    i, j = seed_pixel
    if not grid.contains_pixel(i, j):
        raise IndexError(f"pixel {seed_pixel} outside the {grid.nx}x{grid.ny} grid")
    if grid.escape_index[j, i] < 0:
        raise SeedNotEscapedError(f"pixel {seed_pixel} did not escape")
    comp = _component_mask(grid.key, j, i)
    holes, n_holes = topology.bounded_holes(comp)
    oi, oj = grid.pixel(0j)
    surrounds = False
    if grid.contains_pixel(oi, oj):
        surrounds = bool(comp[oj, oi] or holes[oj, oi] > 0)
    return ComponentStats(int(comp.sum()), n_holes + 1, surrounds)


def component_table(grid: EscapeGrid, min_pixels: int = 16) -> list[tuple[tuple[int, int], ComponentStats]]:
    """Stats of every escaped raster component with at least ``min_pixels``.

    Each entry is ``(seed_pixel, stats)`` with ``seed_pixel = (i, j)``.
    Holes are counted on the component's bounding box padded by one
    non-member cell, which is exact: a bounded hole never leaves the box.
    """
    key = grid.key
    oi, oj = grid.pixel(0j)
    out = []
    for value in np.unique(key[key >= 0]):
        labels, _ = topology.label(key == value)
        sizes = np.bincount(labels.ravel())
        for lab, box in enumerate(ndimage.find_objects(labels), start=1):
            if sizes[lab] < min_pixels:
                continue
            comp = np.pad(labels[box] == lab, 1)
            size = int(sizes[lab])
            holes, n_holes = topology.bounded_holes(comp)
            j0, i0 = box[0].start, box[1].start
            surrounds = False
            if box[0].start <= oj < box[0].stop and box[1].start <= oi < box[1].stop:
                surrounds = bool(comp[oj - j0 + 1, oi - i0 + 1] or holes[oj - j0 + 1, oi - i0 + 1] > 0)
            jj, ii = np.argwhere(comp)[0] - 1
            out.append(((int(ii + i0), int(jj + j0)), ComponentStats(size, n_holes + 1, surrounds)))
    return out


# -- polar grids ----------------------------------------------------------

@numba.njit(cache=True, nogil=True)
def _polar_tile(esc, route, t0, t1, r0, r1, n_theta, log_lo, dlog, a, lam, max_iter, cert_r, z0, d0_r):
    for t in range(t0, t1):
        th = 2.0 * math.pi * (t + 0.5) / n_theta
        c, s = math.cos(th), math.sin(th)
        for k in range(r0, r1):
            rad = math.exp(log_lo + (k + 0.5) * dlog)
            e, r = _signature(a, lam, complex(rad * c, rad * s), max_iter, cert_r, z0, d0_r)
            esc[t, k] = e
            route[t, k] = r


@dataclass
class PolarGrid:
    """Escape signatures on a log-polar raster indexed ``[theta, radius]``.

    Radii are log-spaced over ``[r_lo, r_hi]`` so that thin bands close to
    the origin get as many cells as wide bands further out.
    """

    params: ParameterPair
    r_lo: float
    r_hi: float
    n_theta: int
    n_radial: int
    escape_index: np.ndarray
    route_class: np.ndarray
    geometry: OrbitGeometry = field(repr=False)

    @property
    def dlog(self) -> float:
        return math.log(self.r_hi / self.r_lo) / self.n_radial

    @property
    def key(self) -> np.ndarray:
        return signature_key(self.escape_index, self.route_class)

    def cell(self, z: complex) -> tuple[int, int]:
        """``(theta, radius)`` indices of ``z``; the radius may be out of range."""
        t = int(math.floor((math.atan2(z.imag, z.real) % (2 * math.pi)) / (2 * math.pi) * self.n_theta))
        t = min(t, self.n_theta - 1)
        m = abs(z)
        k = int(math.floor(math.log(m / self.r_lo) / self.dlog)) if m > 0 else -1
        return t, k

    def point(self, t: int, k: int) -> complex:
        th = 2 * math.pi * (t + 0.5) / self.n_theta
        return math.exp(math.log(self.r_lo) + (k + 0.5) * self.dlog) * complex(math.cos(th), math.sin(th))

    def radius_edges(self, k: int) -> tuple[float, float]:
        lo = math.log(self.r_lo)
        return math.exp(lo + k * self.dlog), math.exp(lo + (k + 1) * self.dlog)

    def radii(self) -> np.ndarray:
        return np.exp(math.log(self.r_lo) + (np.arange(self.n_radial) + 0.5) * self.dlog)


def polar_grid(
    g: OrbitGeometry,
    r_lo: float,
    r_hi: float,
    n_theta: int,
    n_radial: int,
    max_iter: int,
    threads: int = 1,
) -> PolarGrid:
    if not 0 < r_lo < r_hi:
        raise ValueError("need 0 < r_lo < r_hi")
    esc = np.empty((n_theta, n_radial), np.int32)
    route = np.empty((n_theta, n_radial), np.int8)
    log_lo = math.log(r_lo)
    dlog = math.log(r_hi / r_lo) / n_radial

    def work(t0, t1, k0, k1):
        _polar_tile(esc, route, t0, t1, k0, k1, n_theta, log_lo, dlog,
                    g.a, g.lam, max_iter, g.cert_radius, g.z0, g.d0_radius)

    run_tiled(work, n_theta, n_radial, threads)
    return PolarGrid(g.params, r_lo, r_hi, n_theta, n_radial, esc, route, g)


def _nearest_matching(match: np.ndarray, t: int, k: int, reach: int = 2):
    """Closest cell to ``(t, k)`` where ``match`` holds, theta wrapping."""
    n_theta, n_r = match.shape
    best = None
    for dt in range(-reach, reach + 1):
        for dk in range(-reach, reach + 1):
            kk = k + dk
            if not 0 <= kk < n_r:
                continue
            tt = (t + dt) % n_theta
            if match[tt, kk]:
                d = dt * dt + dk * dk
                if best is None or d < best[0]:
                    best = (d, tt, kk)
    return None if best is None else best[1:]


def _polar_window(g: OrbitGeometry, witness: complex) -> tuple[float, float]:
    m = abs(witness)
    inner = g.throat_radius if g.throat_radius > 0 else m
    return 0.5 * min(inner, m), max(2.2, 1.5 * m)


def surrounds_origin(
    p: ParameterPair,
    witness: complex,
    budget: ClassifierBudget = ClassifierBudget(),
    *,
    geom: Optional[OrbitGeometry] = None,
    threads: int = 1,
) -> bool:
    """Does the raster component of ``witness`` wind around the origin?

    The component is taken on a log-polar raster with periodic angle,
    matching the witness's route class and its escape index within
    ``budget.escape_tol``; it surrounds 0 iff it contains a loop with
    winding number one.
    """
    g = geom or geometry(p, budget.rho)
    witness = complex(witness)
    e_w, r_w = orbit_signature(g, witness, budget.max_iter)
    if e_w is None:
        return False
    r_lo, r_hi = _polar_window(g, witness)
    pg = polar_grid(g, r_lo, r_hi, budget.n_theta, budget.n_radial, budget.max_iter, threads)
    match = (
        (pg.escape_index >= 0)
        & (pg.route_class == int(r_w))
        & (np.abs(pg.escape_index - e_w) <= budget.escape_tol)
    )
    cell = _nearest_matching(match, *pg.cell(witness))
    if cell is None:
        return False
    comps = topology.label_periodic(match)
    return comps.wraps(int(comps.labels[cell]))


# -- classification ----------------------------------------------------------

@dataclass
class Classification:
    """Outcome of :func:`classify_detailed` with the evidence behind it."""

    params: ParameterPair
    case: FatouCase
    escape_index: Optional[int] = None
    pre_t0_point: Optional[complex] = None
    pre_t0_tag: Optional[RegionTag] = None
    surrounds: Optional[bool] = None
    inventory: Optional[CriticalInventory] = field(default=None, repr=False)
    stable: bool = True

    @property
    def c_minus(self) -> complex:
        return self.inventory.c_minus


def _decide(p, inv, g, budget):
    rec = iterate_orbit(p, inv.c_minus, budget.max_iter, budget.rho)
    if not rec.escaped:
        return Classification(p, FatouCase.NOT_ESCAPING, inventory=inv)
    e = rec.escape_index
    if e < 2:
        return Classification(p, FatouCase.UNDETERMINED, e, inventory=inv)
    # iterate e-1 lies in T0, so iterate e-2 is in A0 or D0
    pre = rec.trajectory[e - 2]
    tag = rec.route[e - 2]
    out = Classification(p, FatouCase.UNDETERMINED, e, pre, tag, inventory=inv)
    if tag is RegionTag.SMALL_ANNULUS:
        out.surrounds = surrounds_origin(p, inv.c_minus, budget, geom=g)
        out.case = FatouCase.CASE_C if out.surrounds else FatouCase.CASE_B
    elif abs(pre - g.z0) < g.d0_radius:
        out.case = FatouCase.CASE_A
    return out


def classify_detailed(p: ParameterPair, budget: ClassifierBudget = ClassifierBudget()) -> Classification:
    """Decide which case of the trichotomy holds for ``p``.

    With ``budget.check_stability`` the decision is repeated with twice the
    iteration budget and twice the surround-test radial resolution; any
    disagreement yields ``Undetermined``.
    """
    if p.lam == 0:
        raise DomainError("classification needs lambda != 0")
    inv = full_inventory(p)
    g = geometry(p, budget.rho, inv)
    result = _decide(p, inv, g, budget)
    if budget.check_stability:
        for variant in (
            replace(budget, max_iter=2 * budget.max_iter),
            replace(budget, n_radial=2 * budget.n_radial),
        ):
            if _decide(p, inv, g, variant).case is not result.case:
                result.case = FatouCase.UNDETERMINED
                result.stable = False
                break
    return result


def classify(p: ParameterPair, budget: ClassifierBudget = ClassifierBudget()) -> FatouCase:
    return classify_detailed(p, budget).case


def critical_component(
    p: ParameterPair,
    point: complex,
    *,
    resolution: int = 768,
    max_iter: int = CLASSIFY_MAX_ITER,
    rho: float = DEFAULT_RHO,
    geom: Optional[OrbitGeometry] = None,
    max_rounds: int = 16,
) -> Optional[ComponentStats]:
    """Measure the raster component of ``point`` on a self-fitting window.

    The window doubles while the component touches its border, then
    re-centres on the component's bounding box with a 20% margin until the
    box fills the window. Returns ``None`` if ``point`` does not escape or
    the component cannot be framed within ``max_rounds`` grids.
    """
    g = geom or geometry(p, rho)
    point = complex(point)
    e, r = orbit_signature(g, point, max_iter)
    if e is None:
        return None
    want = e * ROUTE_SLOTS + int(r)
    center, width = point, 0.25
    for _ in range(max_rounds):
        grid = escape_grid(p, center, width, nx=resolution, max_iter=max_iter, geom=g)
        key = grid.key
        i, j = grid.pixel(point)
        cell = _nearest_matching((key == want).T, i, j)
        if cell is None:
            width /= 4
            center = point
            continue
        i, j = cell
        comp = _component_mask(key, j, i)
        rows = np.flatnonzero(comp.any(axis=1))
        cols = np.flatnonzero(comp.any(axis=0))
        last = resolution - 1
        if rows[0] == 0 or cols[0] == 0 or rows[-1] == last or cols[-1] == last:
            # every bounded escaping component lies inside |z| <= 2
            if width >= 4:
                return None
            width *= 2
            continue
        span = (max(rows[-1] - rows[0], cols[-1] - cols[0]) + 1) * grid.dx
        if span >= width / 1.5:
            return component_stats(grid, (i, j))
        lo = grid.point(cols[0], rows[-1])
        hi = grid.point(cols[-1], rows[0])
        center = (lo + hi) / 2
        width = 1.2 * span
    return None
