"""Escape-time iteration with structural route tagging.

Escape is confirmed by an iterate of modulus above 2, which lies in the
immediate basin of infinity ``A*``. The escape index is then pulled back to
the first iterate that is *certified* to lie in ``A*``: walking backwards
from the confirming iterate, every point that maps into ``A*`` is either in
``A*`` itself or in the small preimage ``T0`` around the origin, and the two
are told apart by the certificate radius (the inner edge of the widened
small-root annulus). A pole-throat hit is the typical ``T0`` entry.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Optional

import numba
import numpy as np

from .critical_finder import annulus_bounds, small_zero_seeds
from .errors import NoConvergenceError
from .rational_map import INFINITY, ExtendedComplex, ParameterPair, _map_safe

__all__ = [
    "FAR_RADIUS",
    "DEFAULT_RHO",
    "DEFAULT_MAX_ITER",
    "CLASSIFY_MAX_ITER",
    "RegionTag",
    "RouteClass",
    "OrbitGeometry",
    "OrbitRecord",
    "geometry",
    "region_tag",
    "iterate_orbit",
    "escape_time_at",
    "orbit_signature",
]

FAR_RADIUS = 2.0
DEFAULT_RHO = 1.2
DEFAULT_MAX_ITER = 500
CLASSIFY_MAX_ITER = 2000
D0_FRACTION = 0.25


class RegionTag(enum.IntEnum):
    FAR_FIELD = 0
    POLE_THROAT = 1
    SMALL_ANNULUS = 2
    MID_ZONE = 3

    @property
    def letter(self) -> str:
        return "FTAM"[self]


class RouteClass(enum.IntEnum):
    """How an escaping orbit first reaches the basin of infinity."""

    DIRECT = 0  # starts in A*
    THROAT = 1  # starts in T0
    VIA_A0 = 2  # passes through the small-root annulus A0, then T0
    VIA_D0 = 3  # passes through the disk D0 around z0, then T0


@dataclass(frozen=True)
class OrbitGeometry:
    """Radii and reference points that drive tagging; cheap to build."""

    a: complex
    lam: complex
    rho: float
    throat_radius: float
    annulus_lo: float
    annulus_hi: float
    cert_radius: float
    z0: complex
    d0_radius: float

    @property
    def params(self) -> ParameterPair:
        return ParameterPair(self.a, self.lam)


def geometry(p: ParameterPair, rho: float = DEFAULT_RHO, inventory=None) -> OrbitGeometry:
    """Tagging radii for ``p``; ``inventory`` supplies refined ``z0`` if given."""
    if rho < 1.0:
        raise ValueError(f"widening factor rho must be >= 1, got {rho!r}")
    if p.lam == 0:
        return OrbitGeometry(p.a, p.lam, rho, 0.0, 0.0, 0.0, 0.0, p.a, 0.0)
    lo, hi = annulus_bounds(p)
    if inventory is not None:
        z0 = inventory.z0
        zeros = inventory.small_zeros
    else:
        z0 = _locate_z0(p)
        zeros = small_zero_seeds(p)
    d0 = D0_FRACTION * min(abs(z0 - w) for w in zeros)
    return OrbitGeometry(
        a=p.a,
        lam=p.lam,
        rho=rho,
        throat_radius=math.sqrt(abs(p.lam) / 3.0),
        annulus_lo=lo / rho,
        annulus_hi=hi * rho,
        cert_radius=lo / rho,
        z0=z0,
        d0_radius=d0,
    )


def _locate_z0(p: ParameterPair) -> complex:
    from .critical_finder import refine_root

    try:
        return refine_root("value", p, p.a)
    except NoConvergenceError:
        return p.a


def region_tag(p: ParameterPair, z: ExtendedComplex, rho: float = DEFAULT_RHO) -> RegionTag:
    """Tag ``z`` by the first matching region: far field, throat, annulus, mid."""
    g = geometry_radii(p, rho)
    return RegionTag(_tag(abs(z) if z is not INFINITY else math.inf, *g))


def geometry_radii(p: ParameterPair, rho: float = DEFAULT_RHO):
    """``(throat, annulus_lo, annulus_hi)``; zeros when unperturbed."""
    if p.lam == 0:
        return 0.0, 0.0, 0.0
    lo, hi = annulus_bounds(p)
    return math.sqrt(abs(p.lam) / 3.0), lo / rho, hi * rho


def _tag(m, throat, lo, hi):
    if m > FAR_RADIUS:
        return 0
    if m < throat:
        return 1
    if hi > 0 and lo <= m <= hi:
        return 2
    return 3


@dataclass
class OrbitRecord:
    """Outcome of iterating one starting point.

    ``escape_index`` is ``None`` when the orbit did not escape within budget.
    ``route`` holds the region tags of iterates ``0..escape_index`` (or of
    every computed iterate for a non-escaping orbit); ``trajectory`` keeps
    the iterates themselves, with :data:`INFINITY` for a pole hit.
    """

    escaped: bool
    escape_index: Optional[int]
    route: list[RegionTag]
    final_point: ExtendedComplex
    confirm_index: Optional[int] = None
    trajectory: list = field(default_factory=list, repr=False)

    @property
    def route_signature(self) -> str:
        return "".join(t.letter for t in self.route)


@numba.njit(cache=True, nogil=True)
def _trajectory(a, lam, z, max_iter):
    """Iterates ``z_0..z_n``; returns ``(points, n, hit_infinity)``.

    ``n`` is the first index with modulus above 2 (or a pole hit), or
    ``max_iter`` when the budget runs out; ``points[n]`` is unused on a
    pole hit.
    """
    pts = np.empty(max_iter + 1, np.complex128)
    for k in range(max_iter + 1):
        pts[k] = z
        if abs(z) > 2.0:
            return pts[: k + 1], k, False
        if k == max_iter:
            break
        z, inf = _map_safe(a, lam, z)
        if inf:
            return pts[: k + 2], k + 1, True
    return pts, -1, False


@numba.njit(cache=True, nogil=True)
def _signature(a, lam, z, max_iter, cert_r, z0, d0_r):
    """Streaming escape index and route class; ``(-1, 0)`` if no escape."""
    last_small = -1
    prev = z
    pre_t0 = z
    for k in range(max_iter + 1):
        if abs(z) > 2.0:
            return _finish(last_small, pre_t0, z0, d0_r)
        if abs(z) < cert_r:
            last_small = k
            pre_t0 = prev
        if k == max_iter:
            break
        prev = z
        z, inf = _map_safe(a, lam, z)
        if inf:
            return _finish(last_small, pre_t0, z0, d0_r)
    return -1, 0


@numba.njit(cache=True, nogil=True)
def _finish(last_small, pre_t0, z0, d0_r):
    e = last_small + 1
    if e == 0:
        return 0, 0
    if e == 1:
        return 1, 1
    if abs(pre_t0 - z0) < d0_r:
        return e, 3
    return e, 2


def iterate_orbit(
    p: ParameterPair,
    z0: ExtendedComplex,
    max_iter: int = DEFAULT_MAX_ITER,
    rho: float = DEFAULT_RHO,
) -> OrbitRecord:
    """Iterate ``B_{a,lam}`` from ``z0`` for at most ``max_iter`` steps."""
    if max_iter < 1:
        raise ValueError("max_iter must be at least 1")
    throat, lo, hi = geometry_radii(p, rho)
    if z0 is INFINITY:
        return OrbitRecord(True, 0, [RegionTag.FAR_FIELD], INFINITY, 0, [INFINITY])

    pts, n, hit_inf = _trajectory(p.a, p.lam, complex(z0), max_iter)
    traj = [complex(w) for w in pts]
    if hit_inf:
        traj[n] = INFINITY
    if n < 0:
        route = [RegionTag(_tag(abs(w), throat, lo, hi)) for w in traj]
        return OrbitRecord(False, None, route, traj[-1], None, traj)

    # orbit confirmed in A* at index n; pull back to the certified entry
    e = n
    while e > 0 and abs(traj[e - 1]) >= lo:
        e -= 1
    route = [
        RegionTag(_tag(math.inf if w is INFINITY else abs(w), throat, lo, hi))
        for w in traj[: e + 1]
    ]
    return OrbitRecord(True, e, route, traj[n], n, traj)


def escape_time_at(
    p: ParameterPair, z0: complex, max_iter: int = DEFAULT_MAX_ITER, rho: float = DEFAULT_RHO
) -> Optional[int]:
    """Escape index of ``z0`` or ``None``; the value the renderer colours by."""
    return iterate_orbit(p, z0, max_iter, rho).escape_index


def orbit_signature(g: OrbitGeometry, z: complex, max_iter: int):
    """``(escape_index or None, RouteClass or None)`` as used by the grids."""
    e, r = _signature(g.a, g.lam, complex(z), max_iter, g.cert_radius, g.z0, g.d0_radius)
    if e < 0:
        return None, None
    return int(e), RouteClass(int(r))
