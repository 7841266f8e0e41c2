"""Quasi-interpolation and hyperinterpolation estimators on S^2.

Both estimators follow the sklearn protocol: ``fit(X, y, sample_weight=w)``
takes quadrature nodes, samples and weights, and ``predict(X)`` evaluates
the approximant.  ``fit_function`` is a convenience wrapper that samples a
callable target on a QuadratureRule.  Multi-output ``y`` of shape (N, T) is
supported and evaluated in one pass, which keeps repeated-trial studies
(noise averaging) cheap.
"""

from __future__ import annotations

import math
import warnings

import numpy as np
from scipy import sparse
from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from ._validation import check_nonneg_int, check_unit_points
from .kernels import GaussianKernel, ZonalKernel

__all__ = [
    "SphericalQuasiInterpolator",
    "Hyperinterpolator",
]


def _blocked_zonal_apply(
    eval_points, nodes, coef, profile, block_elems=4_000_000, support_cosine=-1.0
):
    """Compute rows of profile(eval_points . nodes^T) @ coef without the full matrix.

    ``profile`` maps an array of cosines to kernel values of the same shape.
    ``coef`` has shape (N,) or (N, T).  Work proceeds in row blocks sized so
    each temporary stays near ``block_elems`` elements.

    ``support_cosine`` is the smallest cosine at which the profile can be
    nonzero (-1.0 for full support).  When the support cap is small, most
    cosines fall below it and the block is evaluated sparsely: the profile
    runs only on the in-support entries, which for narrow compact-support
    kernels removes almost all of the pointwise work.
    """
    n_nodes = nodes.shape[0]
    squeeze = coef.ndim == 1
    coef2 = coef[:, None] if squeeze else coef
    out = np.empty((eval_points.shape[0], coef2.shape[1]))
    block = max(1, int(block_elems // max(n_nodes, 1)))
    nodes_t = np.ascontiguousarray(nodes.T)
    for start in range(0, eval_points.shape[0], block):
        stop = min(start + block, eval_points.shape[0])
        t = eval_points[start:stop] @ nodes_t
        np.clip(t, -1.0, 1.0, out=t)
        if support_cosine > -1.0:
            mask = t >= support_cosine
            nnz = int(np.count_nonzero(mask))
            if nnz <= 0.25 * t.size:
                if nnz == 0:
                    out[start:stop] = 0.0
                else:
                    rows, cols = np.nonzero(mask)
                    vals = profile(t[rows, cols])
                    mat = sparse.csr_matrix((vals, (rows, cols)), shape=t.shape)
                    out[start:stop] = mat @ coef2
                continue
        out[start:stop] = profile(t) @ coef2
    return out[:, 0] if squeeze else out


def _harmonic_stacks(points, degree):
    """Yield (m, stack, cosm, sinm) per azimuthal order for a point block.

    ``stack[i]`` holds the fully normalized associated Legendre values
    \\bar P_{m+i}^m(z) at the block's points; ``cosm``/``sinm`` are the
    sqrt(2) cos(m phi) / sin(m phi) azimuth factors (None at m = 0).
    Together they enumerate an orthonormal real spherical-harmonic basis
    through degree ``degree``, one recurrence pass per order.
    """
    z = points[:, 2]
    u = np.hypot(points[:, 0], points[:, 1])
    phi = np.arctan2(points[:, 1], points[:, 0])
    sqrt2 = math.sqrt(2.0)
    seed = np.full(z.shape, 1.0 / math.sqrt(4.0 * math.pi))
    for m in range(degree + 1):
        if m > 0:
            seed = seed * (math.sqrt((2 * m + 1) / (2.0 * m)) * u)
            cosm = sqrt2 * np.cos(m * phi)
            sinm = sqrt2 * np.sin(m * phi)
        else:
            cosm = sinm = None
        count = degree - m + 1
        stack = np.empty((count, z.size))
        stack[0] = seed
        a_prev = 1.0
        for i in range(1, count):
            ell = m + i
            if i == 1:
                a = math.sqrt(2 * m + 3.0)
                np.multiply(z, stack[0], out=stack[1])
                stack[1] *= a
            else:
                a = math.sqrt((4.0 * ell * ell - 1.0) / (ell * ell - m * m))
                np.multiply(z, stack[i - 1], out=stack[i])
                stack[i] -= stack[i - 2] / a_prev
                stack[i] *= a
            a_prev = a
        yield m, stack, cosm, sinm


def _harmonic_apply(eval_points, nodes, coef, degree, block_elems=4_000_000):
    """Apply the truncated zonal projector of ``degree`` to node data ``coef``.

    Returns sum_{ell<=degree} (2 ell + 1)/(4 pi) P_ell(eval . nodes^T) @ coef
    evaluated through an orthonormal real-harmonic basis (addition theorem):
    analysis products over the nodes, then synthesis at the evaluation
    points.  Cost is O(degree^2 (N + M)) plus small matrix products instead
    of the O(degree N M) of forming the projector matrix, and both sweeps
    run in row blocks sized so each Legendre stack stays near
    ``block_elems`` elements.
    """
    squeeze = coef.ndim == 1
    coef2 = coef[:, None] if squeeze else coef
    width = coef2.shape[1]
    rows = max(1, int(block_elems // (degree + 1)))

    a_cos = [np.zeros((degree - m + 1, width)) for m in range(degree + 1)]
    a_sin = [np.zeros((degree - m + 1, width)) for m in range(1, degree + 1)]
    for start in range(0, nodes.shape[0], rows):
        block = nodes[start : start + rows]
        cblk = coef2[start : start + rows]
        for m, stack, cosm, sinm in _harmonic_stacks(block, degree):
            if m == 0:
                a_cos[0] += stack @ cblk
            else:
                a_cos[m] += stack @ (cblk * cosm[:, None])
                a_sin[m - 1] += stack @ (cblk * sinm[:, None])

    out = np.empty((eval_points.shape[0], width))
    for start in range(0, eval_points.shape[0], rows):
        block = eval_points[start : start + rows]
        acc = np.zeros((block.shape[0], width))
        for m, stack, cosm, sinm in _harmonic_stacks(block, degree):
            if m == 0:
                acc += stack.T @ a_cos[0]
            else:
                acc += cosm[:, None] * (stack.T @ a_cos[m])
                acc += sinm[:, None] * (stack.T @ a_sin[m - 1])
        out[start : start + rows] = acc
    return out[:, 0] if squeeze else out


class _WeightedSphereFit(BaseEstimator):
    """Shared fit plumbing: validated nodes, weights and (possibly 2-D) samples."""

    def fit(self, X, y, sample_weight=None):
        """Store quadrature nodes X, samples y and quadrature weights.

        ``sample_weight`` is mandatory: it carries the quadrature weights of
        the node set and the approximant is a weighted sum, not a fitted
        regression.
        """
        nodes, _ = check_unit_points(X, name="X")
        if sample_weight is None:
            raise ValueError(
                "sample_weight is required: pass the quadrature weights of X"
            )
        w = np.asarray(sample_weight, dtype=float)
        if w.shape != (nodes.shape[0],):
            raise ValueError(
                f"sample_weight must have shape ({nodes.shape[0]},), got {w.shape}"
            )
        if not np.all(np.isfinite(w)) or np.any(w <= 0.0):
            raise ValueError("sample_weight must be finite and strictly positive")
        y = np.asarray(y, dtype=float)
        if y.shape[0] != nodes.shape[0] or y.ndim not in (1, 2):
            raise ValueError(
                f"y must have shape ({nodes.shape[0]},) or ({nodes.shape[0]}, T), "
                f"got {y.shape}"
            )
        if not np.all(np.isfinite(y)):
            raise ValueError("y contains non-finite entries")
        self.nodes_ = nodes
        self.weights_ = w
        self.coef_ = w[:, None] * y if y.ndim == 2 else w * y
        self.n_features_in_ = 3
        return self

    def fit_function(self, rule, f):
        """Sample the callable ``f`` on ``rule`` and fit.

        ``f`` must accept an (N, 3) array of unit vectors and return (N,) or
        (N, T) values.
        """
        return self.fit(rule.points, f(rule.points), sample_weight=rule.weights)

    def _check_fitted(self):
        if not hasattr(self, "nodes_"):
            raise NotFittedError(
                f"{type(self).__name__} is not fitted yet; call fit first"
            )


class SphericalQuasiInterpolator(_WeightedSphereFit):
    """Kernel quasi-interpolant sum_j w_j y_j phi_rho(x_j . x) on S^2.

    Applied to exact samples of a spherical harmonic of degree ell, the
    operator reproduces the harmonic times the kernel coefficient fl(ell)
    up to quadrature error, so accuracy is governed by how flat the low
    coefficients are and how fast the high ones decay.

    Parameters
    ----------
    kernel : ZonalKernel, default GaussianKernel(rho=0.1)
        The scaled zonal kernel.
    block_elems : int
        Target temporary size (elements) for blocked evaluation.
    """

    def __init__(self, kernel=None, block_elems=4_000_000):
        self.kernel = kernel
        self.block_elems = block_elems

    def _resolved_kernel(self):
        kernel = self.kernel if self.kernel is not None else GaussianKernel()
        if not isinstance(kernel, ZonalKernel):
            raise ValueError(f"kernel must be a ZonalKernel, got {type(kernel).__name__}")
        return kernel

    def predict(self, X):
        """Evaluate the quasi-interpolant at unit vectors X."""
        self._check_fitted()
        pts, single = check_unit_points(X, name="X")
        kernel = self._resolved_kernel()
        out = _blocked_zonal_apply(
            pts,
            self.nodes_,
            self.coef_,
            kernel._values,
            self.block_elems,
            support_cosine=kernel.support_cosine(),
        )
        return out[0] if single else out


class Hyperinterpolator(_WeightedSphereFit):
    """Discretized L2 projection onto spherical polynomials of a given degree.

    Evaluates sum_j w_j y_j D_n(x_j . x) with the truncated zonal projector
    D_n; when the quadrature rule is exact to degree 2n this is the exact
    L2 projection of polynomial data.

    Parameters
    ----------
    degree : int
        Truncation degree n.
    block_elems : int
        Target temporary size (elements) for blocked evaluation.
    """

    def __init__(self, degree=10, block_elems=4_000_000):
        self.degree = degree
        self.block_elems = block_elems

    def fit_function(self, rule, f):
        degree = check_nonneg_int(self.degree, name="degree")
        if rule.order < 2 * degree:
            warnings.warn(
                f"rule order {rule.order} is below 2*degree={2 * degree}; "
                f"the discretized projection is not exact on polynomials",
                stacklevel=2,
            )
        return super().fit_function(rule, f)

    def predict(self, X):
        """Evaluate the hyperinterpolant at unit vectors X."""
        self._check_fitted()
        degree = check_nonneg_int(self.degree, name="degree")
        pts, single = check_unit_points(X, name="X")
        out = _harmonic_apply(
            pts, self.nodes_, self.coef_, degree, self.block_elems
        )
        return out[0] if single else out
