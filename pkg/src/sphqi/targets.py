"""Benchmark target functions on S^2.

All targets are callables mapping an (N, 3) array of unit vectors (or a
single (3,) vector) to values; they vectorize over the batch axis.
"""

from __future__ import annotations


import numpy as np

from ._validation import check_unit_points
from .special import real_sph_harm

__all__ = [
    "HarmonicTarget",
    "GaussianBumpSum",
    "CapBump",
    "WendlandPoles",
    "make_target",
    "TARGET_NAMES",
]


class HarmonicTarget:
    """A single real orthonormal spherical harmonic Y_{ell,k}."""

    def __init__(self, ell=6, k=4):
        self.ell = ell
        self.k = k

    def __call__(self, points):
        return real_sph_harm(self.ell, self.k, points)

    def __repr__(self):
        return f"HarmonicTarget(ell={self.ell}, k={self.k})"


class GaussianBumpSum:
    """Sum of geodesic exponential bumps sum_k exp(-sharpness * dist(c_k, x)).

    Centers are drawn once from the uniform sphere distribution (normalized
    3-D Gaussians) with the given seed, or supplied explicitly.
    """

    def __init__(self, seed=42, n_centers=23, sharpness=10.0, centers=None):
        if centers is None:
            rng = np.random.default_rng(seed)
            raw = rng.normal(size=(n_centers, 3))
            centers = raw / np.linalg.norm(raw, axis=1)[:, None]
        self.centers, _ = check_unit_points(np.asarray(centers, dtype=float))
        self.sharpness = float(sharpness)

    def __call__(self, points):
        pts, single = check_unit_points(points)
        cos = np.clip(pts @ self.centers.T, -1.0, 1.0)
        vals = np.exp(-self.sharpness * np.arccos(cos)).sum(axis=1)
        return float(vals[0]) if single else vals

    def __repr__(self):
        return (
            f"GaussianBumpSum(n_centers={self.centers.shape[0]}, "
            f"sharpness={self.sharpness})"
        )


class CapBump:
    """Finitely smooth cap bump (1 - sqrt(2 - 2 t))_+^2 with t = center . x.

    Supported on the half-space t >= 1/2; continuously differentiable but
    not twice differentiable at the support boundary.
    """

    def __init__(self, center=(0.0, 0.0, 1.0)):
        center_arr, _ = check_unit_points(np.asarray(center, dtype=float))
        self.center = center_arr[0]

    def __call__(self, points):
        pts, single = check_unit_points(points)
        t = np.clip(pts @ self.center, -1.0, 1.0)
        vals = np.maximum(1.0 - np.sqrt(2.0 - 2.0 * t), 0.0) ** 2
        return float(vals[0]) if single else vals

    def __repr__(self):
        return f"CapBump(center={tuple(self.center)})"


class WendlandPoles:
    """Sum of compactly supported Wendland bumps at the six coordinate poles.

    Each bump is phi(r) = (1 - r)_+^4 (4 r + 1) of the Euclidean distance to
    a center; centers are +-e1, +-e2, +-e3.
    """

    def __init__(self):
        eye = np.eye(3)
        self.centers = np.vstack([eye, -eye])

    def __call__(self, points):
        pts, single = check_unit_points(points)
        # ||x - c||^2 = 2 - 2 x . c on the unit sphere
        r = np.sqrt(np.clip(2.0 - 2.0 * (pts @ self.centers.T), 0.0, None))
        vals = ((np.maximum(1.0 - r, 0.0) ** 4) * (4.0 * r + 1.0)).sum(axis=1)
        return float(vals[0]) if single else vals

    def __repr__(self):
        return "WendlandPoles()"


TARGET_NAMES = ("f1", "f2", "f3", "wendland6")


def make_target(name, seed=42):
    """Build a named benchmark target; ``seed`` only affects ``f2``."""
    if name == "f1":
        return HarmonicTarget(ell=6, k=4)
    if name == "f2":
        return GaussianBumpSum(seed=seed)
    if name == "f3":
        return CapBump()
    if name == "wendland6":
        return WendlandPoles()
    raise ValueError(f"unknown target '{name}' (choose from {TARGET_NAMES})")
