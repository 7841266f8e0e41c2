"""Tests for sphere quadrature rules and the node-file loader."""

import math

import numpy as np
import pytest

from sphqi import (
    QuadratureRule,
    gauss_legendre_1d,
    load_md_nodes,
    product_rule_s2,
    verify_exactness,
)

FULL_AREA = 4.0 * math.pi


# ---------------------------------------------------------------------------
# 1-D Gauss-Legendre.
# ---------------------------------------------------------------------------


def test_gauss_legendre_single_node():
    rule = gauss_legendre_1d(1)
    assert np.allclose(rule.nodes, [0.0], atol=1e-15)
    assert np.allclose(rule.weights, [2.0], atol=1e-15)


def test_gauss_legendre_two_nodes():
    rule = gauss_legendre_1d(2)
    ref = 1.0 / math.sqrt(3.0)
    assert np.allclose(np.sort(rule.nodes), [-ref, ref], atol=1e-15)
    assert np.allclose(rule.weights, [1.0, 1.0], atol=1e-15)


def test_gauss_legendre_monomial_exactness():
    # m nodes integrate x^k over [-1, 1] exactly through degree 2m - 1
    rule = gauss_legendre_1d(5)
    for k in range(0, 10):
        exact = 0.0 if k % 2 else 2.0 / (k + 1)
        got = float(np.dot(rule.weights, rule.nodes**k))
        assert abs(got - exact) < 1e-14, k
    # degree 2m = 10 must fail by a visible margin
    got = float(np.dot(rule.weights, rule.nodes**10))
    assert abs(got - 2.0 / 11.0) > 1e-6


def test_gauss_legendre_rejects_nonpositive():
    with pytest.raises(ValueError):
        gauss_legendre_1d(0)


# ---------------------------------------------------------------------------
# Product rules on S^2.
# ---------------------------------------------------------------------------


def test_product_rule_invariants():
    for n in (1, 7, 24, 51):
        rule = product_rule_s2(n)
        assert rule.order == n
        assert rule.size == ((n + 2) // 2) * (n + 1)
        assert np.all(rule.weights > 0.0)
        assert abs(rule.weights.sum() - FULL_AREA) < 1e-10
        norms = np.linalg.norm(rule.points, axis=1)
        assert np.max(np.abs(norms - 1.0)) < 1e-12


def test_product_rule_exactness_low_orders():
    for n in (2, 5, 12):
        rule = product_rule_s2(n)
        assert verify_exactness(rule, n) <= 1e-10


def test_product_rule_exactness_ceiling():
    # order 12 cannot integrate all degree-20 harmonics
    rule = product_rule_s2(12)
    assert verify_exactness(rule, 20) > 1e-6


def test_product_rule_centroid_free():
    # odd harmonics vanish by the antipodal longitude symmetry
    rule = product_rule_s2(4)
    moments = rule.points.T @ rule.weights
    assert np.max(np.abs(moments)) < 1e-13


def test_quadrature_rule_validation():
    pts = np.array([[0.0, 0.0, 1.0], [0.0, 0.0, -1.0]])
    w = np.array([2.0 * math.pi, 2.0 * math.pi])
    rule = QuadratureRule(points=pts, weights=w, order=1)
    assert rule.size == 2
    with pytest.raises(ValueError):
        QuadratureRule(points=pts, weights=np.array([-1.0, 1.0]), order=1)
    with pytest.raises(ValueError):
        QuadratureRule(points=pts, weights=np.array([1.0, 1.0]), order=1)
    with pytest.raises(ValueError):
        QuadratureRule(
            points=np.array([[0.0, 0.0, 2.0], [0.0, 0.0, -1.0]]),
            weights=w,
            order=1,
        )


def test_quadrature_rule_arrays_read_only():
    rule = product_rule_s2(3)
    with pytest.raises(ValueError):
        rule.weights[0] = 0.0


# ---------------------------------------------------------------------------
# Node-file loader.
# ---------------------------------------------------------------------------

TET = np.array(
    [
        [1.0, 1.0, 1.0],
        [1.0, -1.0, -1.0],
        [-1.0, 1.0, -1.0],
        [-1.0, -1.0, 1.0],
    ]
) / math.sqrt(3.0)


def _write_nodes(path, points, weights, header=None):
    lines = [] if header is None else [header]
    for p, w in zip(points, weights):
        lines.append(f"{p[0]:.15f} {p[1]:.15f} {p[2]:.15f} {w:.15f}")
    path.write_text("\n".join(lines) + "\n")


def test_load_md_nodes_round_trip(tmp_path):
    path = tmp_path / "tet.txt"
    _write_nodes(path, TET, np.full(4, math.pi), header="# tetrahedron")
    rule = load_md_nodes(path)
    assert rule.size == 4
    assert rule.order == 1  # |X| = (order + 1)^2
    assert abs(rule.weights.sum() - FULL_AREA) < 1e-10
    # degree-1 exactness by symmetry
    assert verify_exactness(rule, 1) < 1e-12


def test_load_md_nodes_renormalizes_slightly_off_points(tmp_path):
    path = tmp_path / "近.txt"
    pts = TET * (1.0 + 5e-9)
    _write_nodes(path, pts, np.full(4, math.pi))
    rule = load_md_nodes(path)
    norms = np.linalg.norm(rule.points, axis=1)
    assert np.max(np.abs(norms - 1.0)) < 1e-14


def test_load_md_nodes_rejects_bad_field_count(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("0 0 1\n")
    with pytest.raises(ValueError, match=r":1: expected 4 columns"):
        load_md_nodes(path)


def test_load_md_nodes_rejects_off_sphere(tmp_path):
    path = tmp_path / "off.txt"
    _write_nodes(path, TET * 1.1, np.full(4, math.pi))
    with pytest.raises(ValueError):
        load_md_nodes(path)


def test_load_md_nodes_rejects_negative_weight(tmp_path):
    path = tmp_path / "neg.txt"
    _write_nodes(path, TET, np.array([math.pi, math.pi, -math.pi, 3 * math.pi]))
    with pytest.raises(ValueError):
        load_md_nodes(path)


def test_load_md_nodes_missing_file():
    with pytest.raises(OSError):
        load_md_nodes("/nonexistent/nodes.txt")
