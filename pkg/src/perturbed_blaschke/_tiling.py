"""Fixed-order tile scheduling for the raster kernels."""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor

TILE = 64


def tiles(ny: int, nx: int, size: int = TILE):
    for j0 in range(0, ny, size):
        for i0 in range(0, nx, size):
            yield j0, min(j0 + size, ny), i0, min(i0 + size, nx)


def run_tiled(fn, ny: int, nx: int, threads: int | None = None, size: int = TILE):
    """Call ``fn(j0, j1, i0, i1)`` on every tile.

    Tiles own disjoint output regions, so the result does not depend on the
    thread count or on completion order.
    """
    jobs = list(tiles(ny, nx, size))
    threads = threads or 1
    if threads <= 1 or len(jobs) == 1:
        for job in jobs:
            fn(*job)
        return
    with ThreadPoolExecutor(max_workers=threads) as pool:
        for fut in [pool.submit(fn, *job) for job in jobs]:
            fut.result()
