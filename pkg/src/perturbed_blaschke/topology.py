"""Raster topology: components, holes, and winding on polar cylinders.

Components use 4-connectivity and their complements 8-connectivity, the
standard complementary pair that keeps the digital Jordan theorem intact.
Polar rasters are indexed ``[theta, radius]`` with theta periodic; a
component *wraps* when it contains a loop with nonzero winding about the
origin, detected exactly with a union-find that tracks seam crossings.
"""
from __future__ import annotations

import numpy as np
from scipy import ndimage

__all__ = [
    "FOUR",
    "EIGHT",
    "label",
    "bounded_holes",
    "connectivity",
    "PeriodicLabels",
    "label_periodic",
]

FOUR = ndimage.generate_binary_structure(2, 1)
EIGHT = ndimage.generate_binary_structure(2, 2)


def label(mask: np.ndarray, eight: bool = False):
    return ndimage.label(mask, structure=EIGHT if eight else FOUR)


def bounded_holes(component: np.ndarray) -> tuple[np.ndarray, int]:
    """Label the 8-connected complement regions that miss the raster border."""
    holes, n = ndimage.label(~component, structure=EIGHT)
    border = np.unique(
        np.concatenate([holes[0], holes[-1], holes[:, 0], holes[:, -1]])
    )
    keep = np.ones(n + 1, bool)
    keep[border] = False
    keep[0] = False
    remap = np.zeros(n + 1, np.int32)
    remap[keep] = np.arange(1, keep.sum() + 1)
    return remap[holes], int(keep.sum())


def connectivity(component: np.ndarray) -> int:
    """``1 + number of bounded holes`` of a boolean component mask."""
    return bounded_holes(component)[1] + 1


class _OffsetUnionFind:
    """Union-find carrying an integer winding offset to the root."""

    def __init__(self, n):
        self.parent = list(range(n))
        self.offset = [0] * n
        self.wraps = [False] * n

    def find(self, x):
        path = []
        while self.parent[x] != x:
            path.append(x)
            x = self.parent[x]
        root = x
        total = 0
        for node in reversed(path):
            total += self.offset[node]
            self.offset[node] = total
            self.parent[node] = root
        return root

    def union(self, x, y, delta):
        """Record that crossing from ``x`` to ``y`` adds ``delta`` windings."""
        rx, ry = self.find(x), self.find(y)
        ox, oy = self.offset[x] if x != rx else 0, self.offset[y] if y != ry else 0
        if rx == ry:
            if ox + delta != oy:
                self.wraps[rx] = True
            return
        # pot(y) = pot(x) + delta
        self.parent[ry] = rx
        self.offset[ry] = ox + delta - oy
        self.wraps[rx] = self.wraps[rx] or self.wraps[ry]


class PeriodicLabels:
    """Components of a mask on a theta-periodic raster.

    ``labels`` uses 0 for background and ``1..count`` for components;
    ``wrapping`` holds the labels of components that encircle the origin.
    """

    def __init__(self, labels: np.ndarray, count: int, wrapping: set[int]):
        self.labels = labels
        self.count = count
        self.wrapping = wrapping

    def wraps(self, lab: int) -> bool:
        return lab in self.wrapping


def label_periodic(mask: np.ndarray, eight: bool = False) -> PeriodicLabels:
    """Label ``mask[theta, r]`` with theta periodic and detect winding."""
    strip, n = ndimage.label(mask, structure=EIGHT if eight else FOUR)
    uf = _OffsetUnionFind(n + 1)
    last, first = strip[-1], strip[0]
    shifts = (-1, 0, 1) if eight else (0,)
    nr = mask.shape[1]
    for s in shifts:
        lo, hi = max(0, -s), min(nr, nr - s)
        u = last[lo:hi]
        v = first[lo + s : hi + s]
        both = (u > 0) & (v > 0)
        for x, y in set(zip(u[both].tolist(), v[both].tolist())):
            # stepping past theta = 2pi into row 0 adds one turn
            uf.union(x, y, 1)

    roots = np.array([uf.find(k) for k in range(n + 1)])
    uniq = np.unique(roots[1:]) if n else np.array([], int)
    relabel = np.zeros(n + 1, np.int32)
    for new, r in enumerate(uniq, start=1):
        relabel[roots == r] = new
    relabel[0] = 0
    wrapping = {int(relabel[r]) for r in uniq if uf.wraps[r]}
    return PeriodicLabels(relabel[strip], len(uniq), wrapping)
