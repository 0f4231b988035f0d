import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from perturbed_blaschke import INFINITY, ParameterPair, RegionTag, RouteClass, full_inventory, iterate_orbit
from perturbed_blaschke.orbit import escape_time_at, geometry, orbit_signature, region_tag
from perturbed_blaschke.rational_map import evaluate

P = ParameterPair(0.5, 1e-5)


def test_far_field_escapes_immediately():
    rec = iterate_orbit(P, 3)
    assert rec.escaped and rec.escape_index == 0 and rec.route_signature == "F"


def test_throat_point():
    rec = iterate_orbit(P, 0.001)
    assert rec.escape_index == 1 and rec.route_signature == "TF"


def test_origin_hits_pole():
    rec = iterate_orbit(P, 0)
    assert rec.escape_index == 1 and rec.final_point is INFINITY


def test_infinity_start():
    assert iterate_orbit(P, INFINITY).escape_index == 0


def test_critical_orbit_routes_through_small_annulus():
    inv = full_inventory(P)
    rec = iterate_orbit(P, inv.c_minus)
    assert rec.escape_index == 4
    assert rec.route_signature == "MMATF"
    assert orbit_signature(geometry(P, inventory=inv), inv.c_minus, 500) == (4, RouteClass.VIA_A0)


def test_unperturbed_disk_does_not_escape():
    rec = iterate_orbit(ParameterPair(0.5), 0.9, 200)
    assert not rec.escaped and rec.escape_index is None
    assert escape_time_at(ParameterPair(0.5), 0.9) is None
    assert len(rec.route) == 201


def test_region_tags():
    g = geometry(P)
    assert g.throat_radius == pytest.approx(math.sqrt(1e-5 / 3))
    assert g.throat_radius == pytest.approx(0.001826, abs=1e-6)
    assert region_tag(P, 3) is RegionTag.FAR_FIELD
    assert region_tag(P, 0.001) is RegionTag.POLE_THROAT
    assert region_tag(P, 0.12) is RegionTag.SMALL_ANNULUS
    assert region_tag(P, 0.3) is RegionTag.MID_ZONE
    assert region_tag(P, INFINITY) is RegionTag.FAR_FIELD
    assert RegionTag.SMALL_ANNULUS.letter == "A"


def test_bad_arguments():
    with pytest.raises(ValueError):
        iterate_orbit(P, 0.3, 0)
    with pytest.raises(ValueError):
        geometry(P, rho=0.5)


def test_throat_maps_to_far_field():
    rng = np.random.default_rng(1)
    throat = geometry(P).throat_radius
    z = throat * np.sqrt(rng.uniform(0, 1, 1000)) * np.exp(2j * np.pi * rng.uniform(0, 1, 1000))
    assert all(abs(evaluate(P, complex(w))) > 2 for w in z)


@settings(max_examples=300, deadline=None)
@given(st.floats(2.0001, 50), st.floats(0, 2 * math.pi))
def test_far_field_is_invariant(r, t):
    w = r * complex(math.cos(t), math.sin(t))
    for _ in range(10):
        w = evaluate(P, w)
        if w is INFINITY:
            break
        assert abs(w) > 2


@settings(max_examples=100, deadline=None)
@given(st.floats(0.3, 0.95), st.floats(0, 2 * math.pi))
def test_escape_index_is_consistent_along_orbit(r, t):
    z = r * complex(math.cos(t), math.sin(t))
    rec = iterate_orbit(P, z)
    if rec.escaped and rec.escape_index >= 1:
        # the image needs exactly one step fewer
        nxt = iterate_orbit(P, evaluate(P, z))
        assert nxt.escape_index == rec.escape_index - 1
