"""Nested annuli around the origin and the itineraries they induce.

In the triply connected case the component ``U_c`` of ``c_minus`` together
with the disk ``V1`` it bounds forms a filled annulus ``A0'`` (label 0).
Every iterated preimage of ``A0'`` that winds around the origin is another
annulus; label ``i`` maps onto label ``s(i)`` and the orbit of a point reads
off as a sequence of labels.

Everything is read from one log-polar raster ``[theta, radius]``. A cell's
*hit time* is the number of steps its centre needs to land in ``A0'``; the
bands of depth ``k`` are the winding components of ``{hit time == k}``.
"""
from __future__ import annotations

import enum
import math
from collections import Counter
from dataclasses import dataclass, field
from collections.abc import Iterator, Sequence
from typing import Optional

import numba
import numpy as np
from scipy import ndimage

from . import topology
from ._tiling import run_tiled
from .errors import LabelingAmbiguityError, PreconditionError
from .fatou import (
    ROUTE_SLOTS,
    FatouCase,
    PolarGrid,
    _nearest_matching,
    classify_detailed,
    polar_grid,
)
from .orbit import DEFAULT_MAX_ITER, OrbitGeometry, geometry, orbit_signature
from .rational_map import INFINITY, ParameterPair, _map_safe, evaluate

__all__ = [
    "DEFAULT_DEPTH",
    "AnnulusLabel",
    "Labeling",
    "Terminal",
    "Itinerary",
    "label_annuli",
    "compute_itinerary",
    "check_itinerary",
    "zero_recurrence_failures",
]

DEFAULT_DEPTH = 6
DEFAULT_N_THETA = 2048
DEFAULT_N_RADIAL = 4096
OUTER_RADIUS = 2.0
NO_LABEL = -1
# cells closer than this to a band edge are not used as image samples
SAMPLE_CLEARANCE = 2
IMAGE_SAMPLES = 256
IMAGE_AGREEMENT = 0.8


@dataclass(frozen=True)
class AnnulusLabel:
    """One labelled annulus.

    ``radial_band`` is the ``(r_min, r_max)`` range of moduli covered by the
    band's cells and ``depth`` the number of steps to reach ``A0'``.
    ``image_id`` is ``s(id)``; label 0 has no single image band and stores
    ``-1``. ``in_w3`` is true when the band sits inside the image of ``U_c``.
    """

    id: int
    radial_band: tuple[float, float]
    depth: int
    image_id: int
    in_w3: bool
    cell_count: int


@dataclass
class Labeling(Sequence):
    """The labels of :func:`label_annuli`, plus the raster they came from.

    Indexing and iteration go over the :class:`AnnulusLabel` entries, in
    id order.
    """

    params: ParameterPair
    labels: list[AnnulusLabel]
    band_raster: np.ndarray = field(repr=False)
    grid: PolarGrid = field(repr=False)
    image_band: tuple[float, float]
    max_depth: int
    _interior: dict = field(default_factory=dict, repr=False, compare=False)

    def __len__(self) -> int:
        return len(self.labels)

    def __getitem__(self, k):
        return self.labels[k]

    def __iter__(self) -> Iterator[AnnulusLabel]:
        return iter(self.labels)

    def by_depth(self, depth: int) -> list[AnnulusLabel]:
        return [lab for lab in self.labels if lab.depth == depth]

    def successor(self, label_id: int) -> int:
        return self.labels[label_id].image_id

    def label_at(self, z) -> int:
        """Label of the cell containing ``z``, or ``-1``."""
        if z is INFINITY:
            return NO_LABEL
        z = complex(z)
        if z == 0:
            return NO_LABEL
        t, k = self.grid.cell(z)
        if not 0 <= k < self.grid.n_radial:
            return NO_LABEL
        return int(self.band_raster[t, k])

    def sample_point(self, label_id: int, rng: np.random.Generator) -> complex:
        """Centre of a random cell at least two cells inside band ``label_id``."""
        if label_id not in self._interior:
            self._interior[label_id] = _interior_cells(self.band_raster == label_id)
        cells = self._interior[label_id]
        t, k = cells[rng.integers(len(cells))]
        return self.grid.point(int(t), int(k))

    def to_text(self) -> str:
        lines = ["# id r_min r_max depth image_id"]
        for lab in self.labels:
            lo, hi = lab.radial_band
            lines.append(f"{lab.id} {lo:.9g} {hi:.9g} {lab.depth} {lab.image_id}")
        return "\n".join(lines) + "\n"


@numba.njit(cache=True, nogil=True)
def _hit_tile(out, t0, t1, k0, k1, n_theta, n_radial, log_lo, dlog, a, lam, filled, max_depth):
    two_pi = 2.0 * math.pi
    for t in range(t0, t1):
        th = two_pi * (t + 0.5) / n_theta
        for k in range(k0, k1):
            z = math.exp(log_lo + (k + 0.5) * dlog) * complex(math.cos(th), math.sin(th))
            h = -1
            for n in range(max_depth + 1):
                m = abs(z)
                if m > 2.0:
                    break
                if m > 0.0:
                    kk = int(math.floor((math.log(m) - log_lo) / dlog))
                    if 0 <= kk < n_radial:
                        ang = math.atan2(z.imag, z.real) % two_pi
                        tt = min(int(ang / two_pi * n_theta), n_theta - 1)
                        if filled[tt, kk]:
                            h = n
                            break
                if n == max_depth:
                    break
                z, inf = _map_safe(a, lam, z)
                if inf:
                    break
            out[t, k] = h


def _winding_component(grid: PolarGrid, key: np.ndarray, witness: complex, what: str):
    """Periodic component of ``key`` through ``witness``; it must wind."""
    e, r = orbit_signature(grid.geometry, witness, DEFAULT_MAX_ITER)
    if e is None:
        raise LabelingAmbiguityError(f"{what} does not escape")
    want = e * ROUTE_SLOTS + int(r)
    cell = _nearest_matching(key == want, *grid.cell(witness))
    if cell is None:
        raise LabelingAmbiguityError(f"{what} is not resolved on the polar raster")
    comps = topology.label_periodic(key == want)
    lab = int(comps.labels[cell])
    if not comps.wraps(lab):
        raise LabelingAmbiguityError(f"{what} does not wind around the origin on the raster")
    return comps.labels == lab


def _fill_annulus(ring: np.ndarray) -> np.ndarray:
    """Add to ``ring`` the complementary pieces that surround neither 0 nor infinity."""
    outside = topology.label_periodic(~ring, eight=True)
    labels = outside.labels
    edge = set(np.unique(labels[:, 0]).tolist()) | set(np.unique(labels[:, -1]).tolist())
    enclosed = [
        lab for lab in range(1, outside.count + 1)
        if lab not in edge and not outside.wraps(lab)
    ]
    return ring | np.isin(labels, enclosed)


def _band_extent(grid: PolarGrid, mask: np.ndarray) -> tuple[float, float]:
    ks = np.flatnonzero(mask.any(axis=0))
    return grid.radius_edges(int(ks[0]))[0], grid.radius_edges(int(ks[-1]))[1]


def _mean_radius_profile(mask: np.ndarray) -> np.ndarray:
    """Per-angle mean radial index of ``mask``; NaN where the row is empty."""
    counts = mask.sum(axis=1)
    idx = np.arange(mask.shape[1])
    with np.errstate(invalid="ignore", divide="ignore"):
        return (mask * idx).sum(axis=1) / np.where(counts > 0, counts, np.nan)


def _inside(profile: np.ndarray, outer: np.ndarray) -> bool:
    both = ~np.isnan(profile) & ~np.isnan(outer)
    return bool(both.any() and (profile[both] < outer[both]).mean() > 0.5)


def _interior_cells(mask: np.ndarray) -> np.ndarray:
    # pad in theta so the seam does not look like an edge
    pad = SAMPLE_CLEARANCE + 1
    ks = np.flatnonzero(mask.any(axis=0))
    k0 = max(0, int(ks[0]) - pad)
    sub = mask[:, k0 : int(ks[-1]) + pad + 1]
    wrapped = np.concatenate([sub[-pad:], sub, sub[:pad]])
    dist = ndimage.distance_transform_cdt(wrapped, metric="chessboard")[pad:-pad]
    cells = np.argwhere(dist >= SAMPLE_CLEARANCE)
    if len(cells) == 0:
        cells = np.argwhere(sub)
    return cells + np.array([0, k0])


def _sample(cells: np.ndarray, n: int) -> np.ndarray:
    if len(cells) <= n:
        return cells
    pick = np.linspace(0, len(cells) - 1, n).round().astype(int)
    return cells[pick]


def label_annuli(
    p: ParameterPair,
    max_depth: int = DEFAULT_DEPTH,
    n_theta: int = DEFAULT_N_THETA,
    n_radial: int = DEFAULT_N_RADIAL,
    *,
    max_iter: int = DEFAULT_MAX_ITER,
    threads: int = 1,
) -> Labeling:
    """Label ``A0'`` and its winding preimages up to ``max_depth`` steps.

    Ids run over ``(depth, r_min)`` order with 0 reserved for ``A0'``.
    Bands too thin for the raster are silently absent; more than ``2**k``
    bands at depth ``k``, or an image link that is not a single band one
    level up, raise :class:`LabelingAmbiguityError`.
    """
    if max_depth < 0:
        raise ValueError("max_depth must be non-negative")
    result = classify_detailed(p)
    if result.case is not FatouCase.CASE_C:
        raise PreconditionError(f"annulus labelling needs CaseC, got {result.case}")
    inv = result.inventory
    g: OrbitGeometry = geometry(p, inventory=inv)

    grid = polar_grid(g, 0.5 * g.throat_radius, OUTER_RADIUS, n_theta, n_radial, max_iter, threads)
    key = grid.key
    u_c = _winding_component(grid, key, inv.c_minus, "the critical component")
    filled = _fill_annulus(u_c)
    image = _winding_component(grid, key, evaluate(p, inv.c_minus), "the image of the critical component")
    image_profile = _mean_radius_profile(image)

    hit = np.empty((n_theta, n_radial), np.int16)
    log_lo = math.log(grid.r_lo)

    def work(t0, t1, k0, k1):
        _hit_tile(hit, t0, t1, k0, k1, n_theta, n_radial, log_lo, grid.dlog,
                  g.a, g.lam, filled, max_depth)

    run_tiled(work, n_theta, n_radial, threads)

    # collect bands depth by depth; label 0 is A0' itself
    masks = [filled]
    depths = [0]
    for depth in range(1, max_depth + 1):
        comps = topology.label_periodic(hit == depth)
        found = [comps.labels == lab for lab in sorted(comps.wrapping)]
        if len(found) > 2 ** depth:
            raise LabelingAmbiguityError(
                f"{len(found)} bands at depth {depth}, at most {2 ** depth} are possible"
            )
        found.sort(key=lambda m: _band_extent(grid, m)[0])
        masks.extend(found)
        depths.extend([depth] * len(found))

    raster = np.full((n_theta, n_radial), NO_LABEL, np.int16)
    for ident, mask in enumerate(masks):
        raster[mask] = ident

    labeling = Labeling(p, [], raster, grid, _band_extent(grid, image), max_depth)
    for ident, (mask, depth) in enumerate(zip(masks, depths)):
        image_id = NO_LABEL
        if depth > 0:
            image_id = _image_link(labeling, mask, ident, depth, depths)
        labeling.labels.append(
            AnnulusLabel(
                id=ident,
                radial_band=_band_extent(grid, mask),
                depth=depth,
                image_id=image_id,
                in_w3=ident != 0 and _inside(_mean_radius_profile(mask), image_profile),
                cell_count=int(mask.sum()),
            )
        )
    return labeling


def _image_link(labeling: Labeling, mask, ident, depth, depths) -> int:
    p, grid = labeling.params, labeling.grid
    votes = Counter()
    samples = _sample(_interior_cells(mask), IMAGE_SAMPLES)
    for t, k in samples:
        votes[labeling.label_at(evaluate(p, grid.point(int(t), int(k))))] += 1
    target, count = votes.most_common(1)[0]
    if target == NO_LABEL or count < IMAGE_AGREEMENT * len(samples):
        raise LabelingAmbiguityError(
            f"band {ident} has no dominant image band ({dict(votes)})"
        )
    if depths[target] != depth - 1:
        raise LabelingAmbiguityError(
            f"band {ident} at depth {depth} maps to band {target} at depth {depths[target]}"
        )
    return int(target)


class Terminal(str, enum.Enum):
    ESCAPED = "Escaped"
    BUDGET_EXHAUSTED = "BudgetExhausted"
    LEFT_LABELED_SET = "LeftLabeledSet"

    def __str__(self):
        return self.value


@dataclass
class Itinerary:
    symbols: list[int]
    terminal: Terminal
    labeling: Optional[Labeling] = field(default=None, repr=False, compare=False)

    def __str__(self) -> str:
        return " ".join(map(str, self.symbols))


def compute_itinerary(labeling: Labeling, z: complex, max_steps: int = 32) -> Itinerary:
    """Label sequence of the orbit of ``z`` until it escapes or leaves the bands.

    An iterate counts as escaped once it lies in the basin of infinity or
    in the throat around the pole; symbols stop at ``max_steps``.
    """
    g = labeling.grid.geometry
    symbols: list[int] = []
    for _ in range(max_steps):
        if z is INFINITY:
            return Itinerary(symbols, Terminal.ESCAPED, labeling)
        e, _route = orbit_signature(g, z, DEFAULT_MAX_ITER)
        if e is not None and e <= 1:
            return Itinerary(symbols, Terminal.ESCAPED, labeling)
        lab = labeling.label_at(z)
        if lab == NO_LABEL:
            return Itinerary(symbols, Terminal.LEFT_LABELED_SET, labeling)
        symbols.append(lab)
        z = evaluate(labeling.params, z)
    return Itinerary(symbols, Terminal.BUDGET_EXHAUSTED, labeling)


def check_itinerary(it: Itinerary, labeling: Optional[Labeling] = None) -> list[str]:
    """Violations of the realizability rules; empty means realizable so far.

    The rules are: no two consecutive zeros; a zero is followed by a band
    lying inside the image of ``U_c``; a nonzero ``i`` is followed by
    ``s(i)``. The last two need a labeling, taken from ``it`` if not given.
    """
    labeling = labeling or it.labeling
    out = []
    for j, (u, v) in enumerate(zip(it.symbols, it.symbols[1:])):
        if u == 0 and v == 0:
            out.append(f"step {j}: two consecutive zeros")
        if labeling is None:
            continue
        if u == 0 and v != 0 and not labeling[v].in_w3:
            out.append(f"step {j}: 0 followed by {v}, which lies outside the image of U_c")
        if u != 0 and v != labeling.successor(u):
            out.append(f"step {j}: {u} followed by {v}, expected {labeling.successor(u)}")
    return out


def zero_recurrence_failures(it: Itinerary, labeling: Optional[Labeling] = None) -> list[int]:
    """Positions ``j`` whose nonzero symbol is not followed by 0 after ``depth`` steps.

    Only positions whose deadline falls inside the recorded symbols count.
    """
    labeling = labeling or it.labeling
    out = []
    for j, s in enumerate(it.symbols):
        if s == 0:
            continue
        due = j + labeling[s].depth
        if due < len(it.symbols) and 0 not in it.symbols[j + 1 : due + 1]:
            out.append(j)
    return out
