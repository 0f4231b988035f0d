"""Invariant batteries run by ``verify <suite>``.

Each suite returns a :class:`SuiteReport`; every check is one line of
output and the suite passes only if all of them do.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import topology
from .critical_finder import check_annulus, full_inventory, small_crit_seeds, small_zero_seeds
from .fatou import (
    FatouCase,
    classify,
    component_stats,
    component_table,
    escape_grid,
)
from .orbit import geometry
from .rational_map import INFINITY, ParameterPair, evaluate
from .symbolic import check_itinerary, compute_itinerary, label_annuli, zero_recurrence_failures

__all__ = [
    "A",
    "REFERENCE_PARAMETERS",
    "SUITES",
    "Check",
    "SuiteReport",
    "run_suite",
    "covering_raster",
    "seed_error",
]

A = 0.5
REFERENCE_PARAMETERS = {
    FatouCase.CASE_A: 3.022e-5,
    FatouCase.CASE_B: 2.8e-5 + 8.4e-7j,
    FatouCase.CASE_C: 1e-5,
}


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.name}" + (f": {self.detail}" if self.detail else "")


@dataclass
class SuiteReport:
    name: str
    checks: list[Check] = field(default_factory=list)
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return bool(self.checks) and all(c.passed for c in self.checks)

    def add(self, name: str, passed: bool, detail: str = "") -> None:
        self.checks.append(Check(name, bool(passed), detail))

    def lines(self) -> list[str]:
        out = [c.line() for c in self.checks]
        verdict = "PASS" if self.passed else "FAIL"
        out.append(f"{verdict} suite {self.name} ({self.seconds:.1f} s)")
        return out


def seed_error(p: ParameterPair, kind: str = "zero") -> float:
    """``max |refined - seed| / |lam|**(1/5)`` over the five small roots."""
    inv = full_inventory(p)
    if kind == "zero":
        refined, seeds = inv.small_zeros, small_zero_seeds(p)
    else:
        refined, seeds = inv.small_crits, small_crit_seeds(p)
    return max(abs(w - s) for w, s in zip(refined, seeds)) / abs(p.lam) ** 0.2


def covering_raster(k: int, m: int, n: int = 1024) -> np.ndarray:
    """Pull back a connectivity-``m`` annulus through ``z**k`` on an ``n x n`` raster.

    The target is ``0.2 < |w| < 0.95`` with ``m - 2`` round holes on
    ``|w| = 0.6``; the map is an unbranched degree-``k`` cover there, so the
    preimage has connectivity ``k (m - 2) + 2``.
    """
    if k < 1 or m < 2:
        raise ValueError("need k >= 1 and m >= 2")
    xs = (np.arange(n) + 0.5) / n * 2.0 - 1.0
    z = xs[None, :] - 1j * xs[:, None]
    w = z**k
    mask = (np.abs(w) > 0.2) & (np.abs(w) < 0.95)
    for h in range(m - 2):
        c = 0.6 * np.exp(2j * np.pi * (h + 0.5) / (m - 2))
        mask &= np.abs(w - c) > 0.08
    return mask


def _inventory(report: SuiteReport):
    for lam in (1e-5, 1e-6, 1e-7):
        p = ParameterPair(A, lam)
        inv = full_inventory(p)
        worst = max(inv.zero_residuals + inv.crit_residuals)
        report.add(f"residuals lambda={lam:g}", worst < 1e-9, f"max scaled residual {worst:.2e}")
        report.add(f"annulus lambda={lam:g}", check_annulus(p, inv))
        report.add(
            f"counts lambda={lam:g}",
            inv.critical_count == 10 and inv.finite_zero_count == 6,
            f"{inv.critical_count} critical points, {inv.finite_zero_count} finite zeros",
        )


def _lemma(report: SuiteReport):
    p = ParameterPair(A, 1e-5)
    rng = np.random.default_rng(0)
    throat = geometry(p).throat_radius
    r = throat * np.sqrt(rng.uniform(0, 1, 1000))
    th = rng.uniform(0, 2 * np.pi, 1000)
    inner = [complex(z) for z in r * np.exp(1j * th)]
    low = min(abs(evaluate(p, z)) for z in inner)
    report.add("throat maps outside |z|=2", low > 2, f"min |B(z)| = {low:.4g} over 1000 samples")

    r = 2.0 + rng.exponential(2.0, 1000)
    th = rng.uniform(0, 2 * np.pi, 1000)
    stayed = 0
    for z in r * np.exp(1j * th):
        w = complex(z)
        for _ in range(10):
            w = evaluate(p, w)
            if w is not INFINITY and abs(w) <= 2:
                break
        else:
            stayed += 1
    report.add("far field stays outside |z|=2", stayed == 1000, f"{stayed}/1000 samples for 10 steps")


def _asymptotics(report: SuiteReport):
    lams = (1e-5, 1e-7, 1e-9)
    for kind in ("zero", "crit"):
        errs = [seed_error(ParameterPair(A, lam), kind) for lam in lams]
        detail = ", ".join(f"{e:.3e}" for e in errs)
        report.add(f"{kind} seed error decreases", errs[0] > errs[1] > errs[2], detail)


def _classify3(report: SuiteReport):
    for expected, lam in REFERENCE_PARAMETERS.items():
        t0 = time.perf_counter()
        got = classify(ParameterPair(A, lam))
        dt = time.perf_counter() - t0
        report.add(f"classify lambda={lam:g}", got is expected, f"{got} in {dt:.2f} s")


def _topology(report: SuiteReport):
    disk = np.zeros((64, 64), bool)
    yy, xx = np.mgrid[:64, :64]
    rr = np.hypot(yy - 31.5, xx - 31.5)
    disk[rr < 20] = True
    report.add("synthetic disk", topology.connectivity(disk) == 1)
    report.add("synthetic annulus", topology.connectivity((rr < 20) & (rr > 8)) == 2)
    for k, m in ((1, 3), (2, 3), (3, 3), (2, 4), (3, 5)):
        got = topology.connectivity(covering_raster(k, m, 768))
        want = k * (m - 2) + 2
        report.add(f"degree-{k} cover of connectivity {m}", got == want, f"measured {got}, expected {want}")

    p = ParameterPair(A, REFERENCE_PARAMETERS[FatouCase.CASE_C])
    grid = escape_grid(p, 0j, 2.4, nx=2048)
    inv = full_inventory(p)
    uc = component_stats(grid, grid.pixel(inv.c_minus))
    report.add("critical component triply connected", uc.connectivity == 3, f"measured {uc.connectivity}")
    report.add("critical component surrounds 0", uc.surrounds_origin)
    best = max(s.connectivity for _, s in component_table(grid))
    report.add("component of connectivity >= 4", best >= 4, f"largest measured {best}")

    p = ParameterPair(A, REFERENCE_PARAMETERS[FatouCase.CASE_A])
    grid = escape_grid(p, 0j, 2.4, nx=2048)
    rng = np.random.default_rng(0)
    seeds = np.argwhere(grid.escaped)
    picks = seeds[rng.choice(len(seeds), 50, replace=False)]
    worst = max(component_stats(grid, (int(i), int(j))).connectivity for j, i in picks)
    report.add("CaseA components at most doubly connected", worst <= 2, f"largest of 50 seeds {worst}")


def _itinerary(report: SuiteReport):
    p = ParameterPair(A, REFERENCE_PARAMETERS[FatouCase.CASE_C])
    labeling = label_annuli(p, 4)
    report.add("labels to depth 4", len(labeling) > 1, f"{len(labeling)} labels")
    report.add("two depth-1 labels", len(labeling.by_depth(1)) == 2)
    inv = full_inventory(p)
    report.add("c_minus band is label 0", labeling.label_at(inv.c_minus) == 0)

    rng = np.random.default_rng(0)
    violations = late = 0
    for _ in range(100):
        z = labeling.sample_point(int(rng.integers(len(labeling))), rng)
        it = compute_itinerary(labeling, z, 40)
        violations += len(check_itinerary(it))
        late += len(zero_recurrence_failures(it, labeling))
    report.add("100 itineraries realizable", violations == 0, f"{violations} violations")
    report.add("0 recurs within each label's depth", late == 0, f"{late} late returns")

    mismatched = 0
    for lab in labeling:
        if lab.id == 0:
            continue
        for _ in range(50):
            z = labeling.sample_point(lab.id, rng)
            mismatched += labeling.label_at(evaluate(p, z)) != lab.image_id
    report.add("band images match links", mismatched == 0, f"{mismatched} mismatches")


SUITES: dict[str, Callable[[SuiteReport], None]] = {
    "inventory": _inventory,
    "lemma": _lemma,
    "asymptotics": _asymptotics,
    "classify3": _classify3,
    "topology": _topology,
    "itinerary": _itinerary,
}


def run_suite(name: str) -> SuiteReport:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    report = SuiteReport(name)
    t0 = time.perf_counter()
    SUITES[name](report)
    report.seconds = time.perf_counter() - t0
    return report
