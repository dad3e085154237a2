from __future__ import annotations

import math

import numpy as np
import pytest

from conftest import random_map, random_point
from piecewise_mobius import (BOUNDARY, INF, PMT, Circline, MoebiusMap, Partition, Region,
                              Side, disk_partition, preset)
from piecewise_mobius.errors import BadParameter, NoRegion
from piecewise_mobius.partition import TOL_B, locate_points
from piecewise_mobius.pmt import Consistency, Termination
from piecewise_mobius.presets import PRESETS, family
from piecewise_mobius.sphere import homogeneous_array


# -- partition -----------------------------------------------------------------

def test_disk_partition_locates():
    P = disk_partition(0, 1)
    assert P.K == 2
    assert P.locate(0.3j) == 1
    assert P.locate(INF) == 2
    assert P.locate(1) == BOUNDARY
    assert P.locate(1 + 1e-12) == BOUNDARY
    assert list(locate_points(P, [0, 5, -1j])) == [1, 2, BOUNDARY]


def test_boundary_is_deduplicated():
    P = disk_partition(2, 3)
    assert len(P.boundary_components()) == 1
    assert P.boundary_index(Circline.circle(2, 3).flipped()) == 0


def test_validate_accepts_good_partition():
    rep = disk_partition(1, 1).validate(samples=20_000)
    assert rep.ok, rep


def test_validate_reports_gap_and_overlap():
    c1, c2 = Circline.circle(0, 1), Circline.circle(3, 1)
    gap = Partition([Region(((c1, Side.INSIDE),), 1, 0), Region(((c2, Side.INSIDE),), 2, 3)])
    rep = gap.validate(samples=5_000)
    assert rep.gap_count > 0 and not rep.ok
    over = Partition([Region(((c1, Side.INSIDE),), 1, 0),
                      Region(((Circline.circle(0, 2), Side.INSIDE),), 2, 0)])
    assert over.validate(samples=5_000).overlap_count > 0


def test_region_indices_must_be_ordered():
    c = Circline.circle(0, 1)
    with pytest.raises(ValueError):
        Partition([Region(((c, Side.INSIDE),), 2), Region(((c, Side.OUTSIDE),), 1)])


def test_locate_raises_outside_all_regions():
    c1, c2 = Circline.circle(0, 1), Circline.circle(3, 1)
    gap = Partition([Region(((c1, Side.INSIDE),), 1), Region(((c2, Side.INSIDE),), 2)])
    with pytest.raises(NoRegion):
        gap.locate(10)


def test_three_region_partition():
    line = Circline.line(-5, 5)   # real axis, upper half plane on the left
    disk = Circline.circle(0, 1)
    P = Partition([
        Region(((disk, Side.INSIDE),), 1, 0),
        Region(((disk, Side.OUTSIDE), (line, Side.INSIDE)), 2, 3j),
        Region(((disk, Side.OUTSIDE), (line, Side.OUTSIDE)), 3, -3j),
    ])
    assert P.validate(samples=20_000).ok
    assert [P.locate(z) for z in (0.1 + 0.1j, 2j, -2j, 3)] == [1, 2, 3, BOUNDARY]


def test_locate_is_moebius_natural(rng):
    P = disk_partition(0.3, 1.2)
    for _ in range(10):
        g = random_map(rng, 1.0)
        Q = P.transported(g)
        for _ in range(20):
            z = random_point(rng)
            if min(abs(c.value(z)) for c in P.boundary) < 10 * TOL_B * 1e3:
                continue
            assert Q.locate(g(z)) == P.locate(z)


# -- PMT -----------------------------------------------------------------------

def test_minimality_rejects_equal_neighbours():
    m = MoebiusMap(2, 0, 0, 1)
    with pytest.raises(ValueError, match="minimal"):
        PMT(disk_partition(0, 1), [m, MoebiusMap(4, 0, 0, 2)])


def test_map_count_must_match():
    with pytest.raises(ValueError):
        PMT(disk_partition(0, 1), [MoebiusMap(2, 0, 0, 1)])


def test_apply_and_boundary():
    F = preset("two_scalings", lam=0.5)
    assert F(0.5) == pytest.approx(0.25)
    assert F(4) == pytest.approx(8)
    assert F(1j) is None


def test_step_array_matches_scalar(rng):
    F = preset("tent")
    pts = [random_point(rng) for _ in range(50)]
    h, k = F.step_array(homogeneous_array(pts))
    for z, kk, hh in zip(pts, k, h):
        assert kk == F.locate(z)
        if kk:
            w = F(z)
            got = hh[0] / hh[1] if hh[1] != 0 else INF
            assert abs(got - w) <= 1e-9 * max(1, abs(w)) or (math.isinf(abs(got)) and math.isinf(abs(w)))


def test_orbit_converges_and_hits_boundary():
    F = preset("two_scalings")
    rec = F.orbit(0.5, n=500)
    assert rec.termination is Termination.CONVERGED
    assert abs(rec.limit) < 1e-5
    hit = F.orbit(1.0)
    assert hit.termination is Termination.HIT_BOUNDARY and hit.step == 0
    # tent: 1/7 -> 7/2 * 1/7 = 1/2, which lies on B
    T = preset("tent")
    rec = T.orbit(1 / 7)
    assert rec.hit_boundary and rec.step == 1


def test_word_map_order():
    F = preset("hiper_no_ss")
    z = 0.7 + 0.1j
    w = F.word_map((1, 2))
    assert w(z) == pytest.approx(F.f(2)(F.f(1)(z)))


def test_itinerary_consistency():
    F = preset("ghost")
    assert F.itinerary_consistent(0.5, (1,)) is Consistency.CONSISTENT
    assert F.itinerary_consistent(0.5, (2,)) is Consistency.INCONSISTENT
    assert F.itinerary_consistent(0, (1,)) is Consistency.ON_CLOSURE


def test_clearance():
    F = preset("two_scalings")
    assert F.clearance(0) == pytest.approx(math.sqrt(2))
    assert F.clearance(1) == pytest.approx(0, abs=1e-15)


# -- presets -------------------------------------------------------------------

@pytest.mark.parametrize("name", sorted(PRESETS))
def test_presets_build_and_validate(name):
    F = preset(name)
    assert F.partition.validate(samples=20_000).ok
    assert F.K == len(F.maps) == 2


def test_preset_errors():
    with pytest.raises(BadParameter):
        preset("nonexistent")
    with pytest.raises(BadParameter):
        preset("two_scalings", lam=2)
    with pytest.raises(BadParameter):
        preset("tent", bogus=1)
    with pytest.raises(BadParameter):
        preset("tent", center=0)          # circle no longer through 1/2
    with pytest.raises(BadParameter):
        family("ghost")


def test_family_sets_parameter():
    fam = family("tent", center=-0.5)
    F = fam(2 + 2j)
    assert F.params["lam"] == 2 + 2j
    assert fam.param == "lam"


def test_expand_no_hyper_maps():
    F = preset("expand_no_hyper")
    lam = 10 / 9 * np.exp(2j * np.pi / 3)
    assert F.f(2)(0) == pytest.approx(lam)
    assert F.f(1)(0.25) == pytest.approx(0.25 * np.exp(2j * np.pi / 3))


@pytest.mark.parametrize("variant", ["c102i", "c099", "f2_08", "f2_11"])
def test_perturbation_variants(variant):
    F = preset("perturbed_pair", variant=variant)
    assert F.partition.validate(samples=5_000).ok
