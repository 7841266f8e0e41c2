"""Positive quadrature rules on the unit sphere S^2.

Provides Gauss-Legendre rules on [-1, 1], the Gauss-Legendre x equal-angle
product rule on S^2, a loader for externally supplied node files, and an
exactness verifier based on orthonormal spherical harmonics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import roots_legendre

from ._validation import check_nonneg_int, check_unit_points

__all__ = [
    "Gauss1D",
    "QuadratureRule",
    "gauss_legendre_1d",
    "product_rule_s2",
    "load_md_nodes",
    "verify_exactness",
]

FULL_AREA = 4.0 * math.pi


@dataclass(frozen=True, eq=False)
class Gauss1D:
    """A Gauss-Legendre rule on [-1, 1]: nodes and positive weights."""

    nodes: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        if self.nodes.shape != self.weights.shape or self.nodes.ndim != 1:
            raise ValueError("nodes and weights must be 1-D arrays of equal length")


def gauss_legendre_1d(m):
    """M-point Gauss-Legendre rule on [-1, 1], exact for degree <= 2M - 1."""
    m = check_nonneg_int(m, name="m")
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    nodes, weights = roots_legendre(m)
    return Gauss1D(nodes=nodes, weights=weights)


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    """A positive quadrature rule on S^2 with a declared polynomial order.

    ``points`` has shape (N, 3) with unit rows, ``weights`` is positive with
    total mass 4 pi, and ``order`` is the degree up to which the rule is
    declared exact.  Instances are immutable; the arrays are marked
    read-only.
    """

    points: np.ndarray
    weights: np.ndarray
    order: int
    mass_tol: float = field(default=1e-10, repr=False)

    def __post_init__(self):
        pts, _ = check_unit_points(self.points, name="points", tol=1e-12)
        w = np.asarray(self.weights, dtype=float)
        if w.ndim != 1 or w.shape[0] != pts.shape[0]:
            raise ValueError("weights must be 1-D and match the number of points")
        if not np.all(np.isfinite(w)) or np.any(w <= 0.0):
            raise ValueError("weights must be finite and strictly positive")
        mass = float(w.sum())
        if abs(mass - FULL_AREA) > self.mass_tol:
            raise ValueError(
                f"weights must sum to 4*pi within {self.mass_tol:.1e}; "
                f"got deviation {abs(mass - FULL_AREA):.3e}"
            )
        if self.order < 0:
            raise ValueError(f"order must be >= 0, got {self.order}")
        pts = np.ascontiguousarray(pts)
        w = np.ascontiguousarray(w)
        pts.setflags(write=False)
        w.setflags(write=False)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "weights", w)

    @property
    def size(self):
        """Number of nodes."""
        return self.points.shape[0]


def product_rule_s2(n):
    """Product rule of polynomial order n on S^2.

    Tensorizes an M-point Gauss-Legendre rule in z = cos(theta) with
    M = ceil((n + 1) / 2) and L = n + 1 equispaced longitudes; the result
    integrates all spherical polynomials of degree <= n exactly and has
    weights (2 pi / L) v_i summing to 4 pi.
    """
    n = check_nonneg_int(n, name="n")
    m = (n + 2) // 2
    ell = n + 1
    gl = gauss_legendre_1d(m)
    phi = 2.0 * math.pi * np.arange(ell) / ell
    z = np.repeat(gl.nodes, ell)
    s = np.sqrt(np.clip(1.0 - z * z, 0.0, None))
    cos_phi = np.tile(np.cos(phi), m)
    sin_phi = np.tile(np.sin(phi), m)
    points = np.column_stack([s * cos_phi, s * sin_phi, z])
    weights = np.repeat(gl.weights, ell) * (2.0 * math.pi / ell)
    return QuadratureRule(points=points, weights=weights, order=n)


def load_md_nodes(path):
    """Load a whitespace-separated ``x y z w`` node file into a QuadratureRule.

    Lines starting with ``#`` and blank lines are skipped.  Node norms may
    deviate from 1 by at most 1e-8 and are renormalized; weights must be
    strictly positive.  The declared order follows the |X| = (n + 1)^2
    convention: order = ceil(sqrt(|X|)) - 1.
    """
    rows = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            parts = stripped.split()
            if len(parts) != 4:
                raise ValueError(
                    f"{path}:{lineno}: expected 4 columns (x y z w), got {len(parts)}"
                )
            try:
                rows.append([float(p) for p in parts])
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: non-numeric entry") from exc
    if not rows:
        raise ValueError(f"{path}: no node rows found")
    data = np.asarray(rows, dtype=float)
    points = data[:, :3]
    weights = data[:, 3]
    norms = np.linalg.norm(points, axis=1)
    if np.any(np.abs(norms - 1.0) > 1e-8):
        bad = int(np.argmax(np.abs(norms - 1.0)))
        raise ValueError(
            f"{path}: node {bad} has norm {norms[bad]!r}, outside the 1e-8 tolerance"
        )
    if np.any(weights <= 0.0):
        bad = int(np.argmax(weights <= 0.0))
        raise ValueError(f"{path}: weight {bad} is not strictly positive")
    points = points / norms[:, None]
    n_nodes = points.shape[0]
    # order = ceil(sqrt(|X|)) - 1 per the |X| = (n + 1)^2 convention
    root = math.isqrt(n_nodes)
    order = root - 1 if root * root == n_nodes else root
    return QuadratureRule(points=points, weights=weights, order=order)


def verify_exactness(rule, nmax):
    """Worst-case quadrature residual over spherical harmonics up to degree nmax.

    Returns max over 1 <= ell <= nmax and all orders of
    |sum_j w_j Y_{ell,k}(x_j)|, combined with the mass defect
    |sum_j w_j - 4 pi|.  Exact harmonics integrate to zero, so for a rule of
    order >= nmax the result is pure roundoff.

    The sweep runs one fully normalized associated Legendre recurrence per
    azimuthal order m, which keeps the cost O(nmax^2 N).
    """
    nmax = check_nonneg_int(nmax, name="nmax")
    pts = rule.points
    w = rule.weights
    z = pts[:, 2]
    u = np.hypot(pts[:, 0], pts[:, 1])
    phi = np.arctan2(pts[:, 1], pts[:, 0])
    residual = abs(float(w.sum()) - FULL_AREA)
    sqrt2 = math.sqrt(2.0)
    seed = np.full_like(z, 1.0 / math.sqrt(4.0 * math.pi))
    for m in range(nmax + 1):
        if m > 0:
            seed = seed * (math.sqrt((2 * m + 1) / (2.0 * m)) * u)
            wc = w * (sqrt2 * np.cos(m * phi))
            ws = w * (sqrt2 * np.sin(m * phi))
        else:
            wc = w
            ws = None
        p_prev = None
        p = seed
        a_prev = None
        for ell in range(m, nmax + 1):
            if ell > m:
                if ell == m + 1:
                    a = math.sqrt(2 * m + 3)
                    p_prev, p = p, a * z * p
                else:
                    a = math.sqrt((4.0 * ell * ell - 1.0) / (ell * ell - m * m))
                    p_prev, p = p, a * (z * p - p_prev / a_prev)
                a_prev = a
            if ell == 0:
                continue
            residual = max(residual, abs(float(wc @ p)))
            if ws is not None:
                residual = max(residual, abs(float(ws @ p)))
    return residual
