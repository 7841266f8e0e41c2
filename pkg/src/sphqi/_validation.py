"""Input validation helpers shared across the package."""

from __future__ import annotations

import numbers

import numpy as np

__all__ = [
    "check_unit_points",
    "check_cosines",
    "check_nonneg_int",
    "check_positive",
]


def check_unit_points(X, *, name="X", tol=1e-8):
    """Validate an array of points on the unit sphere S^2.

    Accepts a single point of shape (3,) or a batch of shape (N, 3).
    Points whose Euclidean norm deviates from 1 by at most ``tol`` are
    renormalized; larger deviations raise ``ValueError``.

    Returns
    -------
    points : ndarray of shape (N, 3)
    single : bool
        True when the input was a single (3,) point.
    """
    X = np.asarray(X, dtype=float)
    single = X.ndim == 1
    if single:
        X = X[None, :]
    if X.ndim != 2 or X.shape[1] != 3:
        raise ValueError(f"{name} must have shape (N, 3), got {X.shape}")
    if not np.all(np.isfinite(X)):
        raise ValueError(f"{name} contains non-finite entries")
    norms = np.linalg.norm(X, axis=1)
    if np.any(np.abs(norms - 1.0) > tol):
        worst = float(np.max(np.abs(norms - 1.0)))
        raise ValueError(
            f"{name} must contain unit vectors (max norm deviation {worst:.3e} "
            f"exceeds tolerance {tol:.1e})"
        )
    return X / norms[:, None], single


def check_cosines(t, *, name="t", tol=1e-12):
    """Validate cosine arguments: finite, within [-1-tol, 1+tol], clipped."""
    t = np.asarray(t, dtype=float)
    if not np.all(np.isfinite(t)):
        raise ValueError(f"{name} contains non-finite entries")
    if np.any(np.abs(t) > 1.0 + tol):
        worst = float(np.max(np.abs(t)))
        raise ValueError(f"{name} must lie in [-1, 1], got |{name}| up to {worst!r}")
    return np.clip(t, -1.0, 1.0)


def check_nonneg_int(value, *, name):
    """Validate a non-negative integer argument and return it as int."""
    if isinstance(value, bool) or not isinstance(value, numbers.Integral):
        raise ValueError(f"{name} must be an integer, got {value!r}")
    value = int(value)
    if value < 0:
        raise ValueError(f"{name} must be >= 0, got {value}")
    return value


def check_positive(value, *, name):
    """Validate a finite positive real argument and return it as float."""
    value = float(value)
    if not np.isfinite(value) or value <= 0.0:
        raise ValueError(f"{name} must be a positive finite number, got {value!r}")
    return value
