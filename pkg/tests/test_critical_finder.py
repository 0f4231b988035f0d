import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from perturbed_blaschke import (
    DomainError,
    NoConvergenceError,
    ParameterPair,
    blaschke_crits,
    check_annulus,
    full_inventory,
    refine_root,
)
from perturbed_blaschke.critical_finder import (
    annulus_bounds,
    small_crit_seeds,
    small_zero_seeds,
)
from perturbed_blaschke.rational_map import eval_derivative, evaluate


def free_crit_oracle(a):
    """Roots of -3 conj(a) z^2 + (4 + 2|a|^2) z - 3a, the free part of B_a'."""
    roots = np.roots([-3 * np.conj(a), 4 + 2 * abs(a) ** 2, -3 * a])
    return sorted(roots, key=abs)


def test_blaschke_crits_at_half():
    cm, cp = blaschke_crits(0.5)
    assert cm == pytest.approx((3 - math.sqrt(5)) / 2, abs=1e-15)
    assert cp == pytest.approx((3 + math.sqrt(5)) / 2, abs=1e-14)
    om, op = free_crit_oracle(0.5)
    assert abs(cm - om) < 1e-10 and abs(cp - op) < 1e-10


@settings(max_examples=50, deadline=None)
@given(st.floats(0.05, 0.95), st.floats(0, 2 * math.pi))
def test_blaschke_crits_match_oracle(r, t):
    a = r * cmath.exp(1j * t)
    cm, cp = blaschke_crits(a)
    om, op = free_crit_oracle(a)
    assert abs(cm - om) < 1e-10 and abs(cp - op) < 1e-9
    assert abs(cp - 1 / cm.conjugate()) < 1e-12 * abs(cp)
    assert abs(eval_derivative(ParameterPair(a), cm)) < 1e-12


def test_blaschke_crits_domain():
    with pytest.raises(DomainError):
        blaschke_crits(0)
    with pytest.raises(DomainError):
        blaschke_crits(1.2)


def test_seed_formulas():
    p = ParameterPair(0.5, 1e-5)
    zs = small_zero_seeds(p)
    cs = small_crit_seeds(p)
    assert zs[0] == pytest.approx((2e-5) ** 0.2)
    assert all(abs(abs(z) - (2e-5) ** 0.2) < 1e-15 for z in zs)
    assert all(abs(abs(c) - (4e-5 / 3) ** 0.2) < 1e-15 for c in cs)
    args = [cmath.phase(z) % (2 * math.pi) for z in zs]
    assert args == sorted(args)
    with pytest.raises(DomainError):
        small_zero_seeds(ParameterPair(0.5))


def test_annulus_bounds():
    lo, hi = annulus_bounds(ParameterPair(0.5, 1e-5))
    assert lo == pytest.approx(1e-5 ** 0.2) and hi == pytest.approx((4e-5) ** 0.2)


@pytest.mark.parametrize("lam", [1e-5, 1e-6, 1e-7, 1e-9, 3.022e-5, 2.8e-5 + 8.4e-7j])
def test_inventory(lam):
    p = ParameterPair(0.5, lam)
    inv = full_inventory(p)
    assert max(inv.zero_residuals + inv.crit_residuals) < 1e-9
    assert check_annulus(p, inv)
    assert inv.critical_count == 10 and inv.finite_zero_count == 6
    for z in inv.small_zeros:
        assert abs(evaluate(p, z)) < 1e-9 * abs(lam) / abs(z) ** 2
    # the free critical points move only slightly away from the Blaschke ones
    cm, cp = blaschke_crits(0.5)
    assert abs(inv.c_minus - cm) < 1e-2 and abs(inv.c_plus - cp) < 1e-2
    assert abs(inv.z0 - 0.5) < 1e-2
    assert len({round(z.real, 12) + 1j * round(z.imag, 12) for z in inv.small_zeros + inv.small_crits}) == 10


def test_seed_error_shrinks():
    def err(lam):
        p = ParameterPair(0.5, lam)
        inv = full_inventory(p)
        return max(abs(w - s) for w, s in zip(inv.small_zeros, small_zero_seeds(p))) / lam ** 0.2

    e5, e7, e9 = err(1e-5), err(1e-7), err(1e-9)
    assert e5 > e7 > e9


def test_inventory_domain():
    with pytest.raises(DomainError):
        full_inventory(ParameterPair(0.5))
    with pytest.raises(DomainError):
        full_inventory(ParameterPair(0.5, 2e-3))


def test_refine_root_failures():
    p = ParameterPair(0.5, 1e-5)
    with pytest.raises(ValueError):
        refine_root("hessian", p, 0.1)
    with pytest.raises(NoConvergenceError):
        refine_root("value", p, 0.3, max_iter=1)
    with pytest.raises(NoConvergenceError):
        refine_root("value", p, 0.0)


def test_inventory_text():
    inv = full_inventory(ParameterPair(0.5, 1e-5))
    lines = inv.to_text().splitlines()
    assert lines[0] == "# role re im residual"
    roles = [ln.split()[0] for ln in lines[1:]]
    assert roles == ["c_plus", "c_minus", "z0", "pole"] + [f"zero{k}" for k in range(5)] + [f"crit{k}" for k in range(5)]
    assert all(len(ln.split()) == 4 for ln in lines[1:])
