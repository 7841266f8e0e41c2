"""Error metrics for spherical approximants."""

from __future__ import annotations

import numpy as np

__all__ = ["discrete_l2_error", "rmse"]


def _values_at(g, points):
    """Evaluate a callable at points, or pass an array of values through."""
    if callable(g):
        vals = np.asarray(g(points), dtype=float)
    else:
        vals = np.asarray(g, dtype=float)
    if vals.shape[0] != points.shape[0]:
        raise ValueError(
            f"values have leading size {vals.shape[0]}, expected {points.shape[0]}"
        )
    return vals


def discrete_l2_error(g, g_ref, eval_rule):
    """Weighted discrete L2 distance sqrt(sum_j w_j (g - g_ref)^2) on a rule.

    ``g`` and ``g_ref`` may be callables on (N, 3) unit vectors or
    precomputed value arrays aligned with ``eval_rule.points``.
    """
    diff = _values_at(g, eval_rule.points) - _values_at(g_ref, eval_rule.points)
    return float(np.sqrt(eval_rule.weights @ (diff * diff)))


def rmse(g, g_ref, points):
    """Unweighted root-mean-square error over a fixed point set."""
    points = np.asarray(points, dtype=float)
    diff = _values_at(g, points) - _values_at(g_ref, points)
    return float(np.sqrt(np.mean(diff * diff)))
