import numpy as np
import pytest

from perturbed_blaschke import topology
from perturbed_blaschke.suites import covering_raster


def disk(n=64, r=20, c=None):
    yy, xx = np.mgrid[:n, :n]
    cy, cx = c or ((n - 1) / 2, (n - 1) / 2)
    return np.hypot(yy - cy, xx - cx) < r


def test_disk_and_annulus():
    assert topology.connectivity(disk()) == 1
    assert topology.connectivity(disk() & ~disk(r=8)) == 2


def test_two_holes():
    shape = disk() & ~disk(r=5, c=(31.5, 22)) & ~disk(r=5, c=(31.5, 42))
    holes, n = topology.bounded_holes(shape)
    assert n == 2 and topology.connectivity(shape) == 3
    assert set(np.unique(holes)) == {0, 1, 2}


def test_hole_touching_border_is_not_bounded():
    shape = np.ones((20, 20), bool)
    shape[5:10, 0:5] = False
    assert topology.connectivity(shape) == 1


def test_diagonal_gap_does_not_open_hole():
    # an 8-connected leak through a diagonal keeps the hole attached to the outside
    shape = np.zeros((7, 7), bool)
    shape[1, 1:6] = shape[5, 1:6] = shape[1:6, 1] = shape[1:6, 5] = True
    assert topology.connectivity(shape) == 2
    shape[1, 5] = False
    shape[0, 6] = False
    assert topology.connectivity(shape) == 1


def test_four_connected_components():
    mask = np.array([[1, 0], [0, 1]], bool)
    assert topology.label(mask)[1] == 2
    assert topology.label(mask, eight=True)[1] == 1


@pytest.mark.parametrize("k,m", [(1, 2), (1, 3), (2, 3), (3, 3), (4, 3), (2, 4), (3, 5)])
def test_covering_connectivity(k, m):
    assert topology.connectivity(covering_raster(k, m, 768)) == k * (m - 2) + 2


def test_covering_arguments():
    with pytest.raises(ValueError):
        covering_raster(0, 3)


def ring(n_theta=64, n_r=32, lo=10, hi=20):
    mask = np.zeros((n_theta, n_r), bool)
    mask[:, lo:hi] = True
    return mask


def test_periodic_ring_wraps():
    comps = topology.label_periodic(ring())
    assert comps.count == 1 and comps.wraps(1)


def test_cut_ring_does_not_wrap():
    mask = ring()
    mask[30, :] = False
    comps = topology.label_periodic(mask)
    assert comps.count == 1 and not comps.wraps(1)


def test_seam_cut_ring_does_not_wrap():
    mask = ring()
    mask[0, :] = False
    comps = topology.label_periodic(mask)
    assert comps.count == 1 and not comps.wraps(1)


def spiral(step):
    # a band climbing one radial cell every ``step`` angles
    mask = np.zeros((64, 32), bool)
    for t in range(64):
        k = 4 + t // step
        mask[t, k : k + 6] = True
    return mask


def test_spiral_wraps_when_it_meets_itself():
    comps = topology.label_periodic(spiral(16))
    assert comps.count == 1 and comps.wraps(1)


def test_spiral_without_overlap_does_not_wrap():
    comps = topology.label_periodic(spiral(8))
    assert comps.count == 1 and not comps.wraps(1)


def test_blobs_do_not_wrap():
    mask = np.zeros((64, 32), bool)
    mask[60:64, 3:6] = True
    mask[0:4, 3:6] = True
    mask[20:25, 10:12] = True
    comps = topology.label_periodic(mask)
    assert comps.count == 2 and not comps.wrapping


def test_diagonal_seam_link_needs_eight_connectivity():
    mask = np.zeros((8, 8), bool)
    mask[7, 3] = mask[0, 4] = True
    assert topology.label_periodic(mask).count == 2
    assert topology.label_periodic(mask, eight=True).count == 1
