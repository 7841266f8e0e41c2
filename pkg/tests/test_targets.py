"""Tests for the benchmark target functions."""

import math

import numpy as np
import pytest

from sphqi import real_sph_harm
from sphqi.targets import (
    TARGET_NAMES,
    CapBump,
    GaussianBumpSum,
    HarmonicTarget,
    WendlandPoles,
    make_target,
)


def _random_unit(n, seed):
    rng = np.random.default_rng(seed)
    pts = rng.standard_normal((n, 3))
    return pts / np.linalg.norm(pts, axis=1, keepdims=True)


def test_harmonic_target_matches_sph_harm():
    pts = _random_unit(50, 0)
    target = HarmonicTarget(ell=6, k=4)
    assert np.array_equal(target(pts), real_sph_harm(6, 4, pts))


def test_harmonic_target_vanishes_at_poles():
    poles = np.array([[0.0, 0.0, 1.0], [0.0, 0.0, -1.0]])
    assert np.max(np.abs(HarmonicTarget(ell=6, k=4)(poles))) < 1e-15


def test_wendland_poles_value_at_pole():
    # distance 0 to the e1 bump, all other centers outside the unit support
    assert WendlandPoles()(np.array([1.0, 0.0, 0.0])) == 1.0


def test_wendland_poles_frozen_value():
    # at (1,1,1)/sqrt(3): three bumps at r = sqrt(2 - 2/sqrt(3)), via mpmath
    p = np.full(3, 1.0 / math.sqrt(3.0))
    assert abs(WendlandPoles()(p) - 5.921732344880534e-04) < 1e-17


def test_wendland_poles_symmetry():
    target = WendlandPoles()
    vals = [target(v) for v in (np.eye(3)).tolist()] + [
        target(v) for v in (-np.eye(3)).tolist()
    ]
    assert vals == [1.0] * 6


def test_cap_bump_pole_edge_and_exterior():
    bump = CapBump()
    assert bump(np.array([0.0, 0.0, 1.0])) == 1.0
    # support boundary at z = 1/2 (chord length exactly 1); input
    # renormalization may nudge the point marginally inside
    s = math.sqrt(3.0) / 2.0
    assert bump(np.array([s, 0.0, 0.5])) < 1e-30
    assert bump(np.array([0.0, 0.0, -1.0])) == 0.0
    assert bump(np.array([1.0, 0.0, 0.0])) == 0.0


def test_cap_bump_frozen_interior_value():
    # z = 3/4: (1 - sqrt(1/2))^2 = 3/2 - sqrt(2)
    p = np.array([math.sqrt(1.0 - 0.5625), 0.0, 0.75])
    assert abs(CapBump()(p) - (1.5 - math.sqrt(2.0))) < 1e-15


def test_cap_bump_respects_center():
    bump = CapBump(center=(1.0, 0.0, 0.0))
    assert bump(np.array([1.0, 0.0, 0.0])) == 1.0
    assert bump(np.array([0.0, 0.0, 1.0])) == 0.0


def test_gaussian_bump_sum_range():
    target = GaussianBumpSum(seed=3)
    vals = target(_random_unit(2000, 4))
    assert np.all(vals > 0.0)
    assert np.all(vals < 23.0)


def test_gaussian_bump_single_center_frozen():
    center = np.array([[0.0, 0.0, 1.0]])
    target = GaussianBumpSum(centers=center, sharpness=10.0)
    z = 0.9
    p = np.array([math.sqrt(1.0 - z * z), 0.0, z])
    assert abs(target(p) - 1.099551168636169e-02) < 1e-16


def test_gaussian_bump_degenerate_centers_reach_bound():
    # all 23 centers coincident: the value at the center is exactly 23
    centers = np.tile(np.array([[0.0, 0.0, 1.0]]), (23, 1))
    target = GaussianBumpSum(centers=centers)
    assert target(np.array([0.0, 0.0, 1.0])) == 23.0


def test_gaussian_bump_seed_controls_centers():
    pts = _random_unit(10, 5)
    same = GaussianBumpSum(seed=9)(pts)
    assert np.array_equal(GaussianBumpSum(seed=9)(pts), same)
    assert not np.array_equal(GaussianBumpSum(seed=10)(pts), same)


def test_targets_return_scalar_for_single_vector():
    p = np.array([0.0, 1.0, 0.0])
    for target in (GaussianBumpSum(seed=1), CapBump(), WendlandPoles()):
        assert np.ndim(target(p)) == 0


def test_make_target_names():
    assert isinstance(make_target("f1"), HarmonicTarget)
    assert isinstance(make_target("f2"), GaussianBumpSum)
    assert isinstance(make_target("f3"), CapBump)
    assert isinstance(make_target("wendland6"), WendlandPoles)
    assert set(TARGET_NAMES) == {"f1", "f2", "f3", "wendland6"}


def test_make_target_seed_only_affects_f2():
    pts = _random_unit(8, 6)
    assert np.array_equal(make_target("f1", seed=1)(pts), make_target("f1", seed=2)(pts))
    assert not np.array_equal(
        make_target("f2", seed=1)(pts), make_target("f2", seed=2)(pts)
    )


def test_make_target_rejects_unknown():
    with pytest.raises(ValueError, match="unknown target"):
        make_target("nope")
