"""Acceptance criteria, one test per criterion.

Each test records a one-line verdict that is printed in the run summary;
run this file alone with ``pytest tests/test_acceptance.py -v``.
"""
import math
import time

import numpy as np
import pytest

from perturbed_blaschke import (
    FatouCase,
    ParameterPair,
    blaschke_crits,
    check_annulus,
    check_itinerary,
    classify,
    compute_itinerary,
    component_stats,
    escape_grid,
    evaluate,
    full_inventory,
)
from perturbed_blaschke.cli import main
from perturbed_blaschke.fatou import ClassifierBudget, component_table
from perturbed_blaschke.orbit import geometry
from perturbed_blaschke.rational_map import INFINITY
from perturbed_blaschke.render import parameter_escape_grid
from perturbed_blaschke.suites import seed_error

from conftest import ACCEPTANCE, A, LAM_A, LAM_B, LAM_C


def report(n, ok, detail):
    ACCEPTANCE[n] = f"criterion {n}: {'PASS' if ok else 'FAIL'} ({detail})"
    print(ACCEPTANCE[n])
    assert ok, detail


def test_1_reference_parameter_classification():
    # compile the kernels first so timings measure the computation only
    classify(ParameterPair(A, 2e-5))
    details, ok = [], True
    for lam, want in ((LAM_A, FatouCase.CASE_A), (LAM_B, FatouCase.CASE_B), (LAM_C, FatouCase.CASE_C)):
        p = ParameterPair(A, lam)
        t0 = time.perf_counter()
        got = classify(p)  # includes the doubled-budget reruns
        dt = time.perf_counter() - t0
        doubled = classify(p, ClassifierBudget(max_iter=4000, n_radial=1024))
        ok &= got is want and doubled is want and dt < 2.0
        details.append(f"{got}/{doubled} {dt:.2f}s")
    report(1, ok, "; ".join(details))


def test_2_root_inventory():
    ok, worst = True, 0.0
    for lam in (1e-5, 1e-6, 1e-7):
        p = ParameterPair(A, lam)
        inv = full_inventory(p)
        worst = max(worst, *inv.zero_residuals, *inv.crit_residuals)
        ok &= check_annulus(p, inv)
    errs = [seed_error(ParameterPair(A, lam)) for lam in (1e-5, 1e-7, 1e-9)]
    ok &= worst < 1e-9 and errs[0] > errs[1] > errs[2]
    report(2, ok, f"max residual {worst:.1e}; seed errors {', '.join(f'{e:.2e}' for e in errs)}")


def test_3_closed_form_critical_points():
    cm, cp = blaschke_crits(0.5)
    oracle = sorted(np.roots([-1.5, 4.5, -1.5]), key=abs)
    err = max(abs(cm - oracle[0]), abs(cp - oracle[1]))
    ok = err < 1e-10 and abs(cm - 0.381966) < 1e-6 and abs(cp - 2.618034) < 1e-6
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(20):
        a = math.sqrt(rng.uniform(0.0025, 0.9)) * np.exp(2j * np.pi * rng.uniform())
        m, p = blaschke_crits(complex(a))
        worst = max(worst, abs(p - 1 / m.conjugate()))
    ok &= worst < 1e-12
    report(3, ok, f"oracle error {err:.1e}; max |c+ - 1/conj(c-)| {worst:.1e}")


def test_4_throat_and_far_field():
    p = ParameterPair(A, LAM_C)
    rng = np.random.default_rng(11)
    r = geometry(p).throat_radius * np.sqrt(rng.uniform(0, 1, 1000))
    inner = r * np.exp(2j * np.pi * rng.uniform(0, 1, 1000))
    low = min(abs(evaluate(p, complex(z))) for z in inner)
    outer = (2 + rng.exponential(3.0, 1000)) * np.exp(2j * np.pi * rng.uniform(0, 1, 1000))
    stayed = 0
    for z in outer:
        w, ok = complex(z), True
        for _ in range(10):
            w = evaluate(p, w)
            if w is INFINITY:
                break
            ok &= abs(w) > 2
        stayed += ok
    report(4, low > 2 and stayed == 1000, f"min |B| on throat {low:.3f}; {stayed}/1000 far-field orbits stay")


def test_5_connectivity_witnesses():
    pc = ParameterPair(A, LAM_C)
    t0 = time.perf_counter()
    grid = escape_grid(pc, 0j, 2.4, nx=2048)
    uc = component_stats(grid, grid.pixel(full_inventory(pc).c_minus))
    others = [s.connectivity for seed, s in component_table(grid)]
    t_c = time.perf_counter() - t0
    big = max(others)
    n_big = sum(c >= 4 for c in others)

    pa = ParameterPair(A, LAM_A)
    t0 = time.perf_counter()
    grid = escape_grid(pa, 0j, 2.4, nx=2048)
    rng = np.random.default_rng(0)
    seeds = np.argwhere(grid.escaped)
    picks = seeds[rng.choice(len(seeds), 50, replace=False)]
    worst = max(component_stats(grid, (int(i), int(j))).connectivity for j, i in picks)
    t_a = time.perf_counter() - t0

    ok = uc.connectivity == 3 and n_big >= 1 and worst <= 2 and t_c < 60 and t_a < 60
    report(
        5, ok,
        f"U_c {uc.connectivity}; {n_big} components >= 4 (max {big}); CaseA max {worst} over 50 seeds; "
        f"{t_c:.1f}s/{t_a:.1f}s",
    )


def test_6_itinerary_soundness(labeling):
    rng = np.random.default_rng(6)
    violations = 0
    for _ in range(100):
        z = labeling.sample_point(int(rng.integers(len(labeling))), rng)
        violations += len(check_itinerary(compute_itinerary(labeling, z, 40)))
    depth1 = len(labeling.by_depth(1))
    ok = labeling.max_depth == 4 and depth1 == 2 and violations == 0
    report(6, ok, f"{len(labeling)} labels to depth 4; {depth1} at depth 1; {violations} violations in 100 itineraries")


def _outputs(tmp_path, capsys, threads, tag):
    files = {}
    d = tmp_path / f"{tag}-{threads}"
    d.mkdir()
    common = ["--threads", str(threads)]
    assert main(["render-dynamical", "--res", "256x256", "--out", str(d / "dyn.ppm"), *common]) == 0
    assert main(["render-parameter", "--res", "64x64", "--out", str(d / "par.ppm"), *common]) == 0
    assert main(["classify", "--lambda", "3.022e-5", "--lambda", "2.8e-5,8.4e-7", "--lambda", "1e-5",
                 "--out", str(d / "cls.csv"), *common]) == 0
    assert main(["itinerary", "--depth", "2", "--res", "512x1024", "--samples", "5",
                 "--out", str(d / "itin.txt"), *common]) == 0
    assert main(["critical-points", "--out", str(d / "crit.txt"), *common]) == 0
    capsys.readouterr()
    for f in sorted(d.iterdir()):
        files[f.name] = f.read_bytes()
    return files


def test_7_determinism(tmp_path, capsys):
    first = _outputs(tmp_path, capsys, 1, "a")
    again = _outputs(tmp_path, capsys, 1, "b")
    eight = _outputs(tmp_path, capsys, 8, "c")
    same_runs = first == again
    same_threads = first == eight
    report(7, same_runs and same_threads, f"{len(first)} outputs; repeat identical {same_runs}; 1 vs 8 threads identical {same_threads}")


def test_8_parameter_plane():
    t0 = time.perf_counter()
    g = parameter_escape_grid(A, complex(-0.7e-5, 0), 1.6e-4, 1.6e-4, 256, 256)
    dt = time.perf_counter() - t0
    marks = []
    for lam in (LAM_A, LAM_B, LAM_C):
        i, j = g.pixel(complex(lam))
        marks.append(int(g.escape_index[j, i]))
    ok = dt < 120 and all(e >= 0 for e in marks)
    report(8, ok, f"{dt:.1f}s; escape indices at the reference parameters {marks}")


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-v"]))
