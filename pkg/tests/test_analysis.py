from __future__ import annotations

import cmath

import pytest

from piecewise_mobius import (AlphaStatus, Kind, MapClass, Verdict, backward_arcs,
                              find_periodic, preset)
from piecewise_mobius.analysis import (
    SignatureConfig,
    alpha_expanding_check,
    alpha_sample,
    attracting_cycles,
    capture_iterations,
    hyperbolicity_check,
    is_ghost,
    kind_from_multiplier,
    lyndon_words,
    omega_limit_approx,
    orbit_derivative,
    parameter_sweep,
    primitive_words,
    schottky_hypothesis_check,
    signature,
)
from piecewise_mobius.errors import BadParameter, DepthOverflow
from piecewise_mobius.presets import family
from piecewise_mobius.sphere import chordal_dist, is_inf


def census(F, max_len=4):
    return {("inf" if is_inf(p.point) else complex(round(p.point.real, 9), round(p.point.imag, 9))):
            p.kind for p in find_periodic(F, max_len)}


# -- words ---------------------------------------------------------------------

def test_lyndon_words_are_primitive_and_minimal_rotations():
    words = list(lyndon_words(2, 6))
    assert len(words) == 23               # 2 + 1 + 2 + 3 + 6 + 9
    for w in words:
        rots = [w[i:] + w[:i] for i in range(len(w))]
        assert w == min(rots) and len(set(rots)) == len(w)


def test_word_cap():
    assert len(primitive_words(3, 4)) == 32
    with pytest.raises(DepthOverflow):
        primitive_words(4, 12)


@pytest.mark.parametrize("m, cls, kind", [
    (0.5, MapClass.LOXODROMIC, Kind.ATTRACTING),
    (3j, MapClass.LOXODROMIC, Kind.REPELLING),
    (cmath.exp(0.3j), MapClass.ELLIPTIC, Kind.ELLIPTIC),
    (1, MapClass.PARABOLIC, Kind.PARABOLIC),
    (1, MapClass.IDENTITY, Kind.IDENTITY),
])
def test_kind_from_multiplier(m, cls, kind):
    assert kind_from_multiplier(m, cls) is kind


# -- census --------------------------------------------------------------------

def test_two_scalings_census():
    assert census(preset("two_scalings")) == {0j: Kind.ATTRACTING, "inf": Kind.ATTRACTING}


def test_ghost_census_and_ghost_test():
    F = preset("ghost")
    assert census(F) == {0j: Kind.GHOST, "inf": Kind.ATTRACTING}
    S = backward_arcs(F, 3)
    assert is_ghost(F, 0j, (1,), S)
    assert not is_ghost(F, 0.5, (1,), S)      # not on the arcs


def test_tent_census_has_expected_repellers():
    F = preset("tent", lam=3.5)
    c = census(F, 2)
    assert c[0j] is Kind.REPELLING
    assert c[complex(round(7 / 9, 9), 0)] is Kind.REPELLING
    assert c["inf"] is Kind.ATTRACTING


def test_census_closed_under_rotation():
    F = preset("tent", lam=2 + 2j)
    pts = find_periodic(F, 4)
    for p in pts:
        if p.period < 2 or p.kind is Kind.GHOST:
            continue
        q = F(p.point)
        rot = p.word[1:] + p.word[:1]
        match = [r for r in pts if chordal_dist(r.point, q) < 1e-8]
        assert match and match[0].word == rot
        assert abs(match[0].multiplier - p.multiplier) < 1e-9


def test_expand_no_hyper_skips_identity_word():
    pts = find_periodic(preset("expand_no_hyper"), 3)
    kinds = {p.kind for p in pts}
    assert Kind.IDENTITY in kinds
    # (1,1,1) is the identity on the disk: it must not flood the census
    assert len(pts) < 12


def test_attracting_cycles_group_rotations():
    F = preset("hiper_no_ss", lam=0.5 - 0.25j)
    cycles = attracting_cycles(find_periodic(F, 4))
    for cyc in cycles:
        assert len(cyc) == len(cyc[0].word)


def test_omega_limit():
    F = preset("two_scalings")
    om = omega_limit_approx(F, 0.3)
    assert len(om) == 1 and abs(om[0]) < 1e-9
    assert omega_limit_approx(F, 1.0) is None


# -- hyperbolicity -------------------------------------------------------------

def test_hyperbolicity_verdicts():
    assert hyperbolicity_check(preset("two_scalings"), 4, seeds=50, raster_size=16).verdict \
        is Verdict.HYPERBOLIC
    r = hyperbolicity_check(preset("ghost"), 4, seeds=50, raster_size=16)
    assert r.verdict is Verdict.NOT_HYPERBOLIC and "ghost" in r.reason
    r = hyperbolicity_check(preset("irrational_annulus"), 4, seeds=50, raster_size=16)
    assert r.verdict is Verdict.NOT_HYPERBOLIC and "no attracting" in r.reason


def test_capture_iterations_bounded():
    pts = find_periodic(preset("two_scalings"), 2)
    cycles = attracting_cycles(pts)
    n = capture_iterations(cycles, 1e-6)
    assert 60 < n < 200
    assert capture_iterations(cycles, 1e-300, cap=500) == 500


# -- alpha ---------------------------------------------------------------------

def test_alpha_sample_needs_depth():
    F = preset("tent")
    with pytest.raises(BadParameter):
        alpha_sample(F, backward_arcs(F, 2))


def test_alpha_empty_for_two_scalings():
    F = preset("two_scalings")
    samples = alpha_sample(F, backward_arcs(F, 6))
    assert samples == []
    assert alpha_expanding_check(F, samples).status is AlphaStatus.EMPTY_ALPHA


def test_orbit_derivative():
    F = preset("tent", lam=3.5)
    assert orbit_derivative(F, 0.0, 3) == pytest.approx(3.5 ** 3)
    assert orbit_derivative(F, 0.5, 1) is None


def test_tent_alpha_expanding_at_one_step():
    F = preset("tent", lam=3.5)
    res = alpha_expanding_check(F, alpha_sample(F, backward_arcs(F, 8)), 5)
    assert res.status is AlphaStatus.EXPANDING and res.N == 1


# -- Schottky ------------------------------------------------------------------

def test_schottky_cases():
    F = preset("tent", lam=3.5)
    res = schottky_hypothesis_check(F, backward_arcs(F, 5))
    assert res.passed
    assert set(res.levels[0].cases.values()) <= {"3a", "3b", "3c"}
    bad = preset("perturbed_pair", variant="c099")
    res = schottky_hypothesis_check(bad, backward_arcs(bad, 3))
    assert not res.passed and res.levels[0].witness


def test_schottky_depth_guard():
    F = preset("tent")
    with pytest.raises(BadParameter):
        schottky_hypothesis_check(F, backward_arcs(F, 2), depth=4)


# -- sweeps --------------------------------------------------------------------

def test_signature_is_rotation_invariant_data():
    a = signature(preset("tent", lam=3.5))
    b = signature(preset("tent", lam=3.6))
    assert a == b


def test_tent_sweep_single_signature():
    grid = parameter_sweep(family("tent"), (3.0, 4.0), (0.0, 1.0), (4, 4))
    assert len(grid.distinct()) == 1 and not grid.change.any()


def test_single_cell_sweep():
    grid = parameter_sweep(family("hiper_no_ss"), (0.5, 0.5), (-0.2, -0.2), (1, 1))
    assert grid.shape == (1, 1) and not grid.change.any()
    assert grid.re[0] == 0.5


def test_signature_extras():
    cfg = SignatureConfig(max_len=3, raster_size=16, multiplier_quantum=0.1)
    sig = signature(preset("two_scalings"), cfg)
    assert len(sig) == 6
