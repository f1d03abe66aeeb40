import numpy as np
import pytest

from speiserlab.errors import GeometryError
from speiserlab.fatness import (
    PlanarSet,
    check_hs,
    check_union_fat,
    disks_intersect,
    fatness_estimate,
)
from speiserlab.lattices import triangular_ball
from speiserlab.packing import EUCLIDEAN, inscribed_collection, pack_disk


def test_unit_disk_quarter_fat():
    tau = fatness_estimate(PlanarSet.disk(), n_samples=100_000, n_radii=8, seed=1)
    assert tau >= 0.25 - 0.02


def test_thin_union_less_fat():
    # near the far tip of the tiny lobe, a medium disk sees just a sliver of
    # the big disk plus the lobe: analytically the fraction dips to ~0.21
    s = PlanarSet(((0j, 1.0), (1.01 + 0j, 0.01)))
    tau = fatness_estimate(s, n_samples=20_000, n_radii=24, seed=2, n_centers=40)
    assert tau < 0.23


def test_determinism_same_seed():
    s = PlanarSet(((0j, 1.0), (0.5 + 0.5j, 0.7)))
    a = fatness_estimate(s, n_samples=5_000, n_radii=6, seed=77)
    b = fatness_estimate(s, n_samples=5_000, n_radii=6, seed=77)
    assert a == b


def test_more_radii_never_increase():
    s = PlanarSet(((0j, 1.0), (1.2 + 0j, 0.5)))
    taus = [
        fatness_estimate(s, n_samples=3_000, n_radii=k, seed=5) for k in (2, 4, 8)
    ]
    assert taus[0] >= taus[1] >= taus[2]


def test_degenerate_set_rejected():
    with pytest.raises(GeometryError):
        PlanarSet(((0j, 0.0),))
    with pytest.raises(GeometryError):
        PlanarSet(((0j, 1.0), (10 + 0j, 1.0)))  # disconnected


def test_union_lemma_two_unit_disks():
    a = PlanarSet.disk(0j, 1.0)
    b = PlanarSet.disk(1 + 0j, 1.0)
    report = check_union_fat(a, b, tau=0.25, seed=11, n_samples=20_000)
    assert report["passes"]


def test_union_identical_disks():
    a = PlanarSet.disk(0j, 1.0)
    report = check_union_fat(a, a, tau=0.25, seed=12, n_samples=50_000)
    assert report["tau_union"] >= 0.25 - 0.02


def test_union_disjoint_rejected():
    a = PlanarSet.disk(0j, 1.0)
    b = PlanarSet.disk(5 + 0j, 1.0)
    with pytest.raises(GeometryError):
        check_union_fat(a, b, tau=0.25)


def test_union_lemma_random_pairs_sample():
    rng = np.random.default_rng(42)
    for _ in range(20):
        r1, r2 = rng.uniform(0.1, 10, size=2)
        c2 = complex(rng.uniform(0, 0.9) * (r1 + r2), 0)
        a = PlanarSet.disk(0j, float(r1))
        b = PlanarSet.disk(c2, float(r2))
        assert disks_intersect(a, b)
        report = check_union_fat(
            a, b, tau=0.25, seed=int(rng.integers(1 << 31)), n_samples=8_000
        )
        assert report["passes"]


def test_check_hs_inscribed_hex_patch():
    p = pack_disk(triangular_ball(6, 2), boundary=EUCLIDEAN)
    col = inscribed_collection(p)
    report = check_hs(None, col, samples=30_000, seed=3)
    assert report.compact_connected
    assert report.locally_finite
    assert report.max_overlap <= 7
    assert report.adjacency_ok
    assert report.worst_fatness >= 1 / 16 - 0.01
    assert report.all_pass()


def test_check_hs_detects_broken_adjacency():
    p = pack_disk(triangular_ball(6, 2), boundary=EUCLIDEAN)
    col = inscribed_collection(p)
    # shrink one vertex disk to break its adjacencies
    key = ("v", 0)
    c, r = col.sets[key][0]
    col.sets[key] = ((c, r * 1e-3),)
    report = check_hs(None, col, samples=5_000, seed=4)
    assert not report.adjacency_ok
    assert report.missing_adjacencies


def test_check_hs_disjoint_family_fails():
    from speiserlab.packing import FatCollection

    sets = {
        ("v", 0): ((0j, 1.0),),
        ("v", 1): ((10 + 0j, 1.0),),
    }
    col = FatCollection(
        sets=sets, adjacency=[(("v", 0), ("v", 1))], tau=0.25, overlap_bound=2
    )
    report = check_hs(None, col, samples=2_000, seed=5)
    assert not report.adjacency_ok
