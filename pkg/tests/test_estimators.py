"""Tests for the quasi-interpolation and hyperinterpolation estimators."""

import math

import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from sphqi import (
    GaussianKernel,
    Hyperinterpolator,
    PoissonKernel,
    SphericalQuasiInterpolator,
    gaussian_coefficient,
    poisson_coefficient,
    product_rule_s2,
    real_sph_harm,
)


def _random_unit(n, seed):
    rng = np.random.default_rng(seed)
    pts = rng.standard_normal((n, 3))
    return pts / np.linalg.norm(pts, axis=1, keepdims=True)


# ---------------------------------------------------------------------------
# Quasi-interpolation.
# ---------------------------------------------------------------------------


def test_qi_constant_target_gives_mass_coefficient():
    rule = product_rule_s2(60)
    est = SphericalQuasiInterpolator(kernel=GaussianKernel(rho=1.0))
    est.fit_function(rule, lambda pts: np.ones(pts.shape[0]))
    vals = est.predict(_random_unit(20, 0))
    ref = 1.0 - math.exp(-2.0)
    assert np.max(np.abs(vals - ref)) < 1e-8


def test_qi_zero_target_gives_zero():
    rule = product_rule_s2(20)
    est = SphericalQuasiInterpolator(kernel=GaussianKernel(rho=0.5))
    est.fit_function(rule, lambda pts: np.zeros(pts.shape[0]))
    assert np.max(np.abs(est.predict(_random_unit(10, 1)))) == 0.0


def test_qi_eigenfunction_property():
    # QI of Y_{3,2} equals gl(3) Y_{3,2} up to (tiny) quadrature truncation
    rule = product_rule_s2(60)
    est = SphericalQuasiInterpolator(kernel=GaussianKernel(rho=0.25))
    est.fit_function(rule, lambda pts: real_sph_harm(3, 2, pts))
    pts = _random_unit(40, 2)
    expect = gaussian_coefficient(3, 0.25) * real_sph_harm(3, 2, pts)
    assert np.max(np.abs(est.predict(pts) - expect)) < 1e-9


def test_qi_eigenfunction_poisson():
    rule = product_rule_s2(80)
    est = SphericalQuasiInterpolator(kernel=PoissonKernel(rho=0.4))
    est.fit_function(rule, lambda pts: real_sph_harm(5, 1, pts))
    pts = _random_unit(40, 3)
    expect = poisson_coefficient(5, 0.6) * real_sph_harm(5, 1, pts)
    assert np.max(np.abs(est.predict(pts) - expect)) < 1e-8


def test_qi_linearity_in_samples():
    rule = product_rule_s2(30)
    pts = _random_unit(25, 4)
    rng = np.random.default_rng(5)
    y1 = rng.standard_normal(rule.size)
    y2 = rng.standard_normal(rule.size)
    a, b = 0.7, -2.2

    def fitted(y):
        est = SphericalQuasiInterpolator(kernel=GaussianKernel(rho=0.5))
        return est.fit(rule.points, y, sample_weight=rule.weights).predict(pts)

    combined = fitted(a * y1 + b * y2)
    assert np.allclose(combined, a * fitted(y1) + b * fitted(y2), rtol=1e-12)


def test_qi_multi_output_columns_match_single_fits():
    rule = product_rule_s2(24)
    pts = _random_unit(15, 6)
    rng = np.random.default_rng(9)
    Y = rng.standard_normal((rule.size, 3))
    est = SphericalQuasiInterpolator(kernel=GaussianKernel(rho=0.4))
    batch = est.fit(rule.points, Y, sample_weight=rule.weights).predict(pts)
    assert batch.shape == (15, 3)
    for col in range(3):
        single = clone(est).fit(
            rule.points, Y[:, col], sample_weight=rule.weights
        ).predict(pts)
        assert np.allclose(batch[:, col], single, rtol=1e-13)


def test_qi_sparse_path_matches_dense():
    # narrow compact support triggers the sparse evaluation branch; a full
    # dense apply over the same nodes must give the same field
    from sphqi import CompactSupportKernel

    rule = product_rule_s2(40)
    kern = CompactSupportKernel(rho=0.3, m=3)
    est = SphericalQuasiInterpolator(kernel=kern)
    est.fit_function(rule, lambda pts: real_sph_harm(2, 1, pts))
    pts = _random_unit(500, 21)
    fast = est.predict(pts)
    t = np.clip(pts @ rule.points.T, -1.0, 1.0)
    dense = kern(t) @ est.coef_
    # summation order differs between the sparse and dense reductions
    assert np.max(np.abs(fast - dense)) < 1e-13


def test_qi_single_point_returns_scalar():
    rule = product_rule_s2(10)
    est = SphericalQuasiInterpolator(kernel=GaussianKernel(rho=0.5))
    est.fit_function(rule, lambda pts: np.ones(pts.shape[0]))
    val = est.predict(np.array([0.0, 0.0, 1.0]))
    assert np.ndim(val) == 0


def test_qi_noise_averaging_shrinks_with_trials():
    # zero target + iid noise: the QI mean over T trials shrinks ~ 1/sqrt(T)
    rule = product_rule_s2(20)
    rng = np.random.default_rng(123)
    pts = _random_unit(50, 7)
    est = SphericalQuasiInterpolator(kernel=GaussianKernel(rho=0.5))
    noise = rng.standard_normal((rule.size, 30))
    est.fit(rule.points, noise, sample_weight=rule.weights)
    per_trial = est.predict(pts)
    mean_field = per_trial.mean(axis=1)
    typical_single = np.sqrt(np.mean(per_trial**2))
    # 3-sigma band around the Monte-Carlo 1/sqrt(30) reduction
    assert np.sqrt(np.mean(mean_field**2)) < 3.0 * typical_single / math.sqrt(30)


def test_fit_requires_sample_weight():
    rule = product_rule_s2(6)
    est = SphericalQuasiInterpolator()
    with pytest.raises(ValueError, match="sample_weight"):
        est.fit(rule.points, np.ones(rule.size))


def test_fit_rejects_bad_shapes_and_values():
    rule = product_rule_s2(6)
    est = SphericalQuasiInterpolator()
    with pytest.raises(ValueError):
        est.fit(rule.points, np.ones(rule.size - 1), sample_weight=rule.weights)
    with pytest.raises(ValueError):
        est.fit(rule.points, np.ones(rule.size), sample_weight=rule.weights[:-1])
    bad_w = rule.weights.copy()
    bad_w[0] = -bad_w[0]
    with pytest.raises(ValueError):
        est.fit(rule.points, np.ones(rule.size), sample_weight=bad_w)
    bad_y = np.ones(rule.size)
    bad_y[3] = np.nan
    with pytest.raises(ValueError):
        est.fit(rule.points, bad_y, sample_weight=rule.weights)


def test_fit_rejects_off_sphere_nodes():
    est = SphericalQuasiInterpolator()
    X = np.array([[0.0, 0.0, 2.0]])
    with pytest.raises(ValueError):
        est.fit(X, np.ones(1), sample_weight=np.ones(1))


def test_predict_before_fit_raises():
    with pytest.raises(NotFittedError):
        SphericalQuasiInterpolator().predict(np.array([0.0, 0.0, 1.0]))
    with pytest.raises(NotFittedError):
        Hyperinterpolator().predict(np.array([0.0, 0.0, 1.0]))


def test_estimator_params_round_trip():
    kern = GaussianKernel(rho=0.3)
    est = SphericalQuasiInterpolator(kernel=kern, block_elems=1000)
    params = est.get_params()
    assert params["kernel"] is kern
    est2 = clone(est)
    assert est2.get_params()["block_elems"] == 1000


# ---------------------------------------------------------------------------
# Hyperinterpolation.
# ---------------------------------------------------------------------------


def test_hyper_reproduces_harmonic():
    rule = product_rule_s2(12)
    est = Hyperinterpolator(degree=6)
    est.fit_function(rule, lambda pts: real_sph_harm(6, 4, pts))
    pts = _random_unit(100, 11)
    assert np.max(np.abs(est.predict(pts) - real_sph_harm(6, 4, pts))) < 1e-12


def test_hyper_annihilates_higher_degree():
    # degree-4 projection of a degree-6 harmonic is zero (rule exact to 10+6)
    rule = product_rule_s2(16)
    est = Hyperinterpolator(degree=4)
    est.fit_function(rule, lambda pts: real_sph_harm(6, 4, pts))
    assert np.max(np.abs(est.predict(_random_unit(30, 12)))) < 1e-12


def test_hyper_degree_zero_is_quadrature_mean():
    rule = product_rule_s2(10)
    rng = np.random.default_rng(3)
    y = rng.standard_normal(rule.size)
    est = Hyperinterpolator(degree=0)
    est.fit(rule.points, y, sample_weight=rule.weights)
    mean = float(np.dot(rule.weights, y)) / (4.0 * math.pi)
    vals = est.predict(_random_unit(9, 13))
    assert np.allclose(vals, mean, atol=1e-14)


def test_hyper_constant_reproduction():
    rule = product_rule_s2(8)
    est = Hyperinterpolator(degree=3)
    est.fit_function(rule, lambda pts: np.full(pts.shape[0], 2.5))
    assert np.max(np.abs(est.predict(_random_unit(12, 14)) - 2.5)) < 1e-12


def test_hyper_warns_when_rule_too_coarse():
    rule = product_rule_s2(8)
    est = Hyperinterpolator(degree=6)
    with pytest.warns(UserWarning, match="below 2\\*degree"):
        est.fit_function(rule, lambda pts: np.ones(pts.shape[0]))
