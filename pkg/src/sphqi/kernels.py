"""Scaled zonal kernels on S^d and their Fourier-Legendre coefficients.

A zonal kernel phi(x . y) is expanded as sum_ell fl(ell) K_ell(x, y) where
K_ell(x, y) = N(d, ell) / omega_d * P_ell(d + 1; x . y) is the reproducing
kernel of the degree-ell harmonics.  Each kernel family below exposes

* pointwise values, ``kernel(t)`` for t = x . y in [-1, 1],
* closed-form coefficients ``kernel.coefficient(ell)`` (d = 2), and
* whole coefficient tables ``kernel.coefficient_table(ellmax)``.

``numeric_coefficient`` provides an independent quadrature route to the same
coefficients through the weighted Funk-Hecke integral

    fl(ell) = omega_{d-1} * int_{-1}^{1} phi(t) P_ell(d+1; t) (1-t^2)^{(d-2)/2} dt.

Kernel families are sklearn-style parameter objects: ``get_params`` /
``set_params`` / ``clone`` work, including nested access to the base kernel
of a high-order combination (``base__rho``).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import roots_legendre
from sklearn.base import BaseEstimator, clone

from ._validation import check_cosines, check_nonneg_int, check_positive
from .special import (
    gammainc_p,
    gegenbauer_normalized,
    gegenbauer_normalized_sequence,
    hyp2f1_terminating,
    legendre_p_sequence,
    pochhammer,
    scaled_bessel_i_half,
    scaled_bessel_i_half_sequence,
    sphere_surface_area,
)


@lru_cache(maxsize=128)
def _gl_nodes(n):
    nodes, weights = roots_legendre(n)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights

__all__ = [
    "ZonalKernel",
    "PoissonKernel",
    "GaussianKernel",
    "CompactSupportKernel",
    "HighOrderKernel",
    "combination_weights",
    "poisson_coefficient",
    "gaussian_coefficient",
    "gaussian_coefficient_hadamard",
    "compact_support_coefficient",
    "numeric_coefficient",
    "FlatnessReport",
    "DecayReport",
    "flatness_report",
    "decay_report",
    "KernelSpec",
    "parse_kernel",
]


# ---------------------------------------------------------------------------
# Module-level closed forms (d = 2).
# ---------------------------------------------------------------------------

def poisson_coefficient(ell, alpha):
    """Coefficient alpha^ell of the normalized Poisson kernel, 0 <= alpha < 1."""
    ell = check_nonneg_int(ell, name="ell")
    alpha = float(alpha)
    if not 0.0 <= alpha < 1.0:
        raise ValueError(f"alpha must lie in [0, 1), got {alpha!r}")
    return alpha**ell


def gaussian_coefficient(ell, rho):
    """Coefficient of the scaled Gaussian kernel on S^2 via scaled Bessel I.

    fl(ell) = sqrt(2 pi) / rho * e^{-z} I_{ell+1/2}(z) with z = 1 / rho^2.
    """
    ell = check_nonneg_int(ell, name="ell")
    rho = check_positive(rho, name="rho")
    z = 1.0 / (rho * rho)
    return math.sqrt(2.0 * math.pi) / rho * scaled_bessel_i_half(ell, z)


def gaussian_coefficient_hadamard(ell, rho):
    """Gaussian coefficient through the finite Hadamard-type expansion.

    fl(ell) = sum_{j=0}^{ell} a_j(nu) rho^(2j) P(nu + j + 1/2, 2 / rho^2)
    with nu = ell + 1/2 and a_j(nu) = (1/2 - nu)_j (1/2 + nu)_j / (2^j j!).
    The alternating terms decrease only when rho * nu < 1, which is required.
    """
    ell = check_nonneg_int(ell, name="ell")
    rho = check_positive(rho, name="rho")
    nu = ell + 0.5
    if rho * nu >= 1.0:
        raise ValueError(
            f"Hadamard route requires rho * (ell + 1/2) < 1, got {rho * nu!r}"
        )
    x = 2.0 / (rho * rho)
    total = 0.0
    for j in range(ell + 1):
        a_j = pochhammer(0.5 - nu, j) * pochhammer(0.5 + nu, j) / (2.0**j * math.factorial(j))
        total += a_j * rho ** (2 * j) * gammainc_p(nu + j + 0.5, x)
    return total


def compact_support_coefficient(ell, rho, m):
    """Coefficient of the normalized compact-support kernel on S^2.

    For rho < 2 equals 2F1(ell + 1, -ell; m + 2; rho^2 / 4); degrees above
    m + 1 use the equivalent Gegenbauer form
    (1 - rho^2/4)^(m+1) * C~_{ell-m-1}^{m+3/2}(1 - rho^2/2), whose
    ratio-normalized recurrence stays conditioned at large ell.  For
    rho >= 2 the support covers the whole sphere and the coefficient is
    computed by exact Gauss-Legendre integration of the degree-m polynomial
    kernel (zero for ell > m).
    """
    ell = check_nonneg_int(ell, name="ell")
    rho = check_positive(rho, name="rho")
    m = check_nonneg_int(m, name="m")
    if rho >= 2.0:
        return _cs_coefficient_full_support(ell, rho, m)
    z = 0.25 * rho * rho
    if ell <= m + 1:
        return hyp2f1_terminating(ell, ell + 1.0, m + 2.0, z)
    return (1.0 - z) ** (m + 1) * gegenbauer_normalized(
        ell - m - 1, m + 1.5, 1.0 - 2.0 * z
    )


def _cs_kernel_profile(t, rho, m):
    """Unnormalized compact-support profile (1 - (2 - 2t) / rho^2)_+^m.

    Dense kernel application evaluates this on ~1e9-element batches, so the
    arithmetic runs in place on a single temporary; ``t`` is never mutated.
    """
    inv = 2.0 / (rho * rho)
    base = np.asarray(t, dtype=float) * inv
    base += 1.0 - inv
    np.maximum(base, 0.0, out=base)
    if m != 1:
        base **= m
    return base


def _cs_coefficient_full_support(ell, rho, m):
    """Exact coefficient for rho >= 2: plain Gauss-Legendre on [-1, 1].

    The integrand phi(t) P_ell(3; t) is a polynomial of degree m + ell, so a
    rule with ceil((m + ell) / 2) + 1 points is exact.
    """
    n_nodes = (m + ell) // 2 + 2
    nodes, weights = _gl_nodes(n_nodes)
    norm = (m + 1) / (math.pi * rho * rho)
    vals = norm * _cs_kernel_profile(nodes, rho, m)
    p = legendre_p_sequence(ell, 3, nodes)[ell]
    return 2.0 * math.pi * float(np.dot(weights, vals * p))


# ---------------------------------------------------------------------------
# Kernel families.
# ---------------------------------------------------------------------------

class ZonalKernel(BaseEstimator):
    """Base class for zonal kernels phi_rho(x . y) on S^d.

    Subclasses implement ``_values`` (pointwise, already normalized),
    ``coefficient`` and ``coefficient_table``; ``__call__`` validates and
    clips the cosine argument.  ``order`` is the approximation order s in
    the low-degree coefficient bound |1 - fl(ell)| <= C (ell rho)^s.
    """

    def __call__(self, t):
        t = check_cosines(t)
        vals = self._values(np.atleast_1d(t))
        return float(vals[0]) if t.ndim == 0 else vals

    def _values(self, t):  # pragma: no cover - abstract
        raise NotImplementedError

    def coefficient(self, ell):  # pragma: no cover - abstract
        raise NotImplementedError

    def coefficient_table(self, ellmax):
        """Coefficients for ell = 0..ellmax as an array (generic loop)."""
        ellmax = check_nonneg_int(ellmax, name="ellmax")
        return np.array([self.coefficient(ell) for ell in range(ellmax + 1)])

    def breakpoints(self):
        """Interior cosine values where the profile is not smooth."""
        return ()

    def support_cosine(self):
        """Smallest cosine with a nonzero kernel value (-1.0 for full support)."""
        return -1.0

    @property
    def order(self):  # pragma: no cover - abstract
        raise NotImplementedError

    def _coefficient_other_d(self, ell):
        warnings.warn(
            f"closed-form coefficients for {type(self).__name__} are implemented "
            f"for d=2 only; falling back to numeric Funk-Hecke quadrature",
            stacklevel=3,
        )
        return numeric_coefficient(self, ell)


class PoissonKernel(ZonalKernel):
    """Normalized Poisson kernel at scale rho in (0, 1]; alpha = 1 - rho.

    phi(t) = (1 - alpha^2) / (omega_d (1 + alpha^2 - 2 alpha t)^((d+1)/2)),
    with coefficients alpha^ell in every dimension.
    """

    def __init__(self, rho=0.1, d=2):
        self.rho = rho
        self.d = d

    def _check(self):
        rho = check_positive(self.rho, name="rho")
        if rho > 1.0:
            raise ValueError(f"PoissonKernel requires rho <= 1, got {rho}")
        d = check_nonneg_int(self.d, name="d")
        if d < 1:
            raise ValueError(f"d must be >= 1, got {d}")
        return rho, d

    @property
    def alpha(self):
        rho, _ = self._check()
        return 1.0 - rho

    def _values(self, t):
        rho, d = self._check()
        alpha = 1.0 - rho
        denom = np.asarray(t, dtype=float) * (-2.0 * alpha)
        denom += 1.0 + alpha * alpha
        if d == 2:
            # x^{3/2} via sqrt avoids a libm pow on large batches
            root = np.sqrt(denom)
            denom *= root
        else:
            denom **= (d + 1) / 2.0
        np.divide(
            (1.0 - alpha * alpha) / sphere_surface_area(d), denom, out=denom
        )
        return denom

    def coefficient(self, ell):
        _, _ = self._check()
        return poisson_coefficient(ell, self.alpha)

    def coefficient_table(self, ellmax):
        ellmax = check_nonneg_int(ellmax, name="ellmax")
        return self.alpha ** np.arange(ellmax + 1, dtype=float)

    @property
    def order(self):
        return 1


class GaussianKernel(ZonalKernel):
    """Scaled Gaussian kernel phi_rho(t) = (2 pi)^(-d/2) rho^(-d) e^{-(1-t)/rho^2}."""

    def __init__(self, rho=0.1, d=2):
        self.rho = rho
        self.d = d

    def _check(self):
        rho = check_positive(self.rho, name="rho")
        d = check_nonneg_int(self.d, name="d")
        if d < 1:
            raise ValueError(f"d must be >= 1, got {d}")
        return rho, d

    def _values(self, t):
        rho, d = self._check()
        # exponent (t - 1)/rho^2 <= 0, evaluated in place on one temporary
        vals = np.asarray(t, dtype=float) - 1.0
        vals *= 1.0 / (rho * rho)
        np.exp(vals, out=vals)
        vals *= (2.0 * math.pi) ** (-d / 2.0) * rho ** (-d)
        return vals

    def coefficient(self, ell):
        rho, d = self._check()
        if d != 2:
            return self._coefficient_other_d(ell)
        return gaussian_coefficient(ell, rho)

    def coefficient_table(self, ellmax):
        rho, d = self._check()
        ellmax = check_nonneg_int(ellmax, name="ellmax")
        if d != 2:
            return super().coefficient_table(ellmax)
        z = 1.0 / (rho * rho)
        return math.sqrt(2.0 * math.pi) / rho * scaled_bessel_i_half_sequence(ellmax, z)

    @property
    def order(self):
        return 2


class CompactSupportKernel(ZonalKernel):
    """Normalized compact-support kernel with polynomial profile exponent m.

    phi_rho(t) = Gamma(m + d/2 + 1) / (pi^(d/2) Gamma(m + 1) rho^d)
                 * (1 - (2 - 2t) / rho^2)_+^m,
    supported on the spherical cap x . y >= 1 - rho^2 / 2.
    """

    def __init__(self, rho=0.5, m=5, d=2):
        self.rho = rho
        self.m = m
        self.d = d

    def _check(self):
        rho = check_positive(self.rho, name="rho")
        m = check_nonneg_int(self.m, name="m")
        d = check_nonneg_int(self.d, name="d")
        if d < 1:
            raise ValueError(f"d must be >= 1, got {d}")
        return rho, m, d

    def _values(self, t):
        rho, m, d = self._check()
        norm = math.gamma(m + d / 2.0 + 1.0) / (
            math.pi ** (d / 2.0) * math.gamma(m + 1.0) * rho**d
        )
        vals = _cs_kernel_profile(t, rho, m)
        vals *= norm
        return vals

    def coefficient(self, ell):
        rho, m, d = self._check()
        if d != 2:
            return self._coefficient_other_d(ell)
        return compact_support_coefficient(ell, rho, m)

    def coefficient_table(self, ellmax):
        rho, m, d = self._check()
        ellmax = check_nonneg_int(ellmax, name="ellmax")
        if d != 2 or rho >= 2.0:
            return super().coefficient_table(ellmax)
        z = 0.25 * rho * rho
        out = np.empty(ellmax + 1)
        head = min(ellmax, m + 1)
        for ell in range(head + 1):
            out[ell] = hyp2f1_terminating(ell, ell + 1.0, m + 2.0, z)
        if ellmax > m + 1:
            tail = gegenbauer_normalized_sequence(
                ellmax - m - 1, m + 1.5, 1.0 - 2.0 * z
            )
            out[m + 2 :] = (1.0 - z) ** (m + 1) * tail[1:]
        return out

    def breakpoints(self):
        rho, _, _ = self._check()
        edge = 1.0 - 0.5 * rho * rho
        return (edge,) if -1.0 < edge < 1.0 else ()

    def support_cosine(self):
        rho, _, _ = self._check()
        return max(1.0 - 0.5 * rho * rho, -1.0)

    @property
    def order(self):
        return 2


def combination_weights(scales):
    """Combination weights lambda_i = prod_{j != i} a_j^2 / (a_j^2 - a_i^2).

    ``scales`` must be strictly increasing and positive.  The returned
    weights satisfy sum_i lambda_i = 1 and sum_i lambda_i a_i^(2j) = 0 for
    j = 1..K-1; both identities are verified numerically before returning.
    """
    a = np.asarray(scales, dtype=float)
    if a.ndim != 1 or a.size < 1:
        raise ValueError("scales must be a non-empty 1-D sequence")
    if np.any(a <= 0.0) or np.any(np.diff(a) <= 0.0):
        raise ValueError(f"scales must be positive and strictly increasing, got {a}")
    k = a.size
    a2 = a * a
    lam = np.empty(k)
    for i in range(k):
        others = np.delete(a2, i)
        lam[i] = np.prod(others / (others - a2[i]))
    resid = abs(lam.sum() - 1.0)
    for j in range(1, k):
        power = a2**j
        resid = max(resid, abs(float(lam @ power)) / float(np.abs(lam) @ power))
    if not resid < 1e-10:
        raise ValueError(
            f"combination weights failed moment identities (residual {resid:.2e}); "
            f"scales {a} are too close or too spread"
        )
    return lam


class HighOrderKernel(ZonalKernel):
    """Linear combination of rescaled base kernels with approximation order 2K.

    psi_rho = sum_i lambda_i phi_{a_i rho} where the K scales a_i default to
    a_i = (i+1)/(K+1) times the base scale rho and the weights lambda_i
    cancel the coefficient deviations up to order rho^(2K-2).  The default
    keeps every scaled width within a factor of 2 of rho, which keeps the
    spectral tail of the narrowest component small; widely spread scales
    (e.g. a_i = i) make the smallest width dominate the tail and are best
    reserved for explicit experimentation.
    """

    def __init__(self, base=None, n_terms=2, scales=None):
        self.base = base
        self.n_terms = n_terms
        self.scales = scales

    def _check(self):
        base = self.base if self.base is not None else GaussianKernel()
        if isinstance(base, HighOrderKernel):
            raise ValueError("base of a HighOrderKernel must be a plain kernel")
        if not isinstance(base, ZonalKernel):
            raise ValueError(f"base must be a ZonalKernel, got {type(base).__name__}")
        k = check_nonneg_int(self.n_terms, name="n_terms")
        if k < 1:
            raise ValueError(f"n_terms must be >= 1, got {k}")
        if self.scales is None:
            scales = np.arange(2, k + 2, dtype=float) / (k + 1)
        else:
            scales = np.asarray(self.scales, dtype=float)
            if scales.size != k:
                raise ValueError(
                    f"scales has {scales.size} entries but n_terms={k}"
                )
        lam = combination_weights(scales)
        return base, scales, lam

    def _scaled_bases(self):
        base, scales, lam = self._check()
        rho = check_positive(base.rho, name="base rho")
        kernels = []
        for a in scales:
            scaled = clone(base)
            scaled.set_params(rho=a * rho)
            kernels.append(scaled)
        return kernels, lam

    @property
    def rho(self):
        base, _, _ = self._check()
        return base.rho

    @property
    def d(self):
        base, _, _ = self._check()
        return base.d

    def _values(self, t):
        kernels, lam = self._scaled_bases()
        # base _values never mutate t and return fresh arrays, so the
        # combination can accumulate in place
        total = kernels[0]._values(t)
        total *= lam[0]
        for w, kern in zip(lam[1:], kernels[1:]):
            part = kern._values(t)
            part *= w
            total += part
        return total

    def coefficient(self, ell):
        kernels, lam = self._scaled_bases()
        return float(sum(w * kern.coefficient(ell) for w, kern in zip(lam, kernels)))

    def coefficient_table(self, ellmax):
        kernels, lam = self._scaled_bases()
        total = lam[0] * kernels[0].coefficient_table(ellmax)
        for w, kern in zip(lam[1:], kernels[1:]):
            total += w * kern.coefficient_table(ellmax)
        return total

    def breakpoints(self):
        kernels, _ = self._scaled_bases()
        pts = sorted({b for kern in kernels for b in kern.breakpoints()})
        return tuple(pts)

    def support_cosine(self):
        kernels, _ = self._scaled_bases()
        return min(kern.support_cosine() for kern in kernels)

    @property
    def order(self):
        _, scales, _ = self._check()
        return 2 * scales.size


# ---------------------------------------------------------------------------
# Numeric Funk-Hecke coefficients (independent quadrature route).
# ---------------------------------------------------------------------------

def numeric_coefficient(kernel, ell, quad_order=600):
    """Coefficient of ``kernel`` at degree ell by weighted Funk-Hecke quadrature.

    Integrates omega_{d-1} phi(t) P_ell(d+1; t) (1 - t^2)^((d-2)/2) over
    [-1, 1] with Gauss-Legendre panels.  The interval is split at the
    kernel's breakpoints (compact-support edges) so each panel sees a smooth
    integrand; every panel gets ``quad_order`` points.
    """
    ell = check_nonneg_int(ell, name="ell")
    quad_order = check_nonneg_int(quad_order, name="quad_order")
    if quad_order < 2:
        raise ValueError(f"quad_order must be >= 2, got {quad_order}")
    d = kernel.d
    edges = [-1.0]
    edges.extend(b for b in kernel.breakpoints() if -1.0 < b < 1.0)
    edges.append(1.0)
    nodes, weights = _gl_nodes(quad_order)
    total = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        mid = 0.5 * (lo + hi)
        half = 0.5 * (hi - lo)
        t = mid + half * nodes
        vals = kernel(t) * legendre_p_sequence(ell, d + 1, t)[ell]
        if d != 2:
            vals = vals * (1.0 - t * t) ** ((d - 2) / 2.0)
        total += half * float(np.dot(weights, vals))
    return sphere_surface_area(d - 1) * total


# ---------------------------------------------------------------------------
# Coefficient behavior reports.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FlatnessReport:
    """Low-degree coefficient flatness across a scale grid.

    For each rho: ``head_ratios`` holds sup over 1 <= ell <= floor(1/rho - 1)
    of |1 - fl(ell)| / (ell rho)^s, and ``tail_sups`` holds sup of |fl(ell)|
    beyond the cutoff.  ``passed`` requires both sequences to stay finite and
    non-exploding as rho decreases.
    """

    s: int
    rho_grid: tuple
    cutoffs: tuple
    head_ratios: tuple
    tail_sups: tuple
    passed: bool


def _non_exploding(vals, factor=1.5, slack=1e-6):
    vals = [v for v in vals if not math.isnan(v)]
    if not vals:
        return True
    if not all(math.isfinite(v) for v in vals):
        return False
    return vals[-1] <= factor * vals[0] + slack


def with_rho(kernel, rho):
    """Clone ``kernel`` with a new scale; reaches into high-order bases."""
    fresh = clone(kernel)
    if isinstance(fresh, HighOrderKernel):
        fresh.set_params(base__rho=rho)
    else:
        fresh.set_params(rho=rho)
    return fresh


def flatness_report(kernel, s, rho_grid, tail_factor=4, tail_min=50):
    """Check |1 - fl(ell)| <= C (ell rho)^s below the 1/rho cutoff.

    Rebuilds ``kernel`` at every rho in ``rho_grid`` (descending), computes
    the head ratio sup and the coefficient sup beyond the cutoff (up to
    ``tail_factor`` times the cutoff plus ``tail_min``), and flags the family
    as passing when both stay finite and non-exploding as rho shrinks.
    """
    s = check_nonneg_int(s, name="s")
    rhos = sorted((float(r) for r in rho_grid), reverse=True)
    if not rhos or rhos[-1] <= 0.0:
        raise ValueError("rho_grid must contain positive scales")
    cutoffs = []
    heads = []
    tails = []
    for rho in rhos:
        kern = with_rho(kernel, rho)
        cutoff = max(int(math.floor(1.0 / rho - 1.0)), 0)
        ellmax = tail_factor * max(cutoff, 1) + tail_min
        table = kern.coefficient_table(ellmax)
        if cutoff >= 1:
            ells = np.arange(1, cutoff + 1)
            ratios = np.abs(1.0 - table[1 : cutoff + 1]) / (ells * rho) ** s
            heads.append(float(np.max(ratios)))
        else:
            heads.append(float("nan"))
        tails.append(float(np.max(np.abs(table[cutoff + 1 :]))))
        cutoffs.append(cutoff)
    passed = (
        all(math.isfinite(v) for v in tails)
        and _non_exploding(heads)
        and _non_exploding(tails)
    )
    return FlatnessReport(
        s=s,
        rho_grid=tuple(rhos),
        cutoffs=tuple(cutoffs),
        head_ratios=tuple(heads),
        tail_sups=tuple(tails),
        passed=passed,
    )


@dataclass(frozen=True)
class DecayReport:
    """High-degree coefficient decay for a single kernel scale.

    ``sup`` is the maximum of fl(ell) (1 + rho ell)^(2 sigma) over degrees
    beyond the 1/rho cutoff, up to ``ellmax``.
    """

    sigma: float
    cutoff: int
    ellmax: int
    sup: float
    passed: bool


def decay_report(kernel, sigma, ellmax=400):
    """Check fl(ell) <= C (1 + rho ell)^(-2 sigma) beyond the 1/rho cutoff."""
    sigma = float(sigma)
    if sigma < 0.0:
        raise ValueError(f"sigma must be >= 0, got {sigma}")
    ellmax = check_nonneg_int(ellmax, name="ellmax")
    rho = check_positive(kernel.rho, name="rho")
    cutoff = max(int(math.floor(1.0 / rho - 1.0)), 0)
    if ellmax <= cutoff:
        raise ValueError(f"ellmax={ellmax} must exceed the cutoff {cutoff}")
    table = kernel.coefficient_table(ellmax)
    ells = np.arange(cutoff + 1, ellmax + 1)
    weighted = table[cutoff + 1 :] * (1.0 + rho * ells) ** (2.0 * sigma)
    sup = float(np.max(weighted))
    return DecayReport(
        sigma=sigma,
        cutoff=cutoff,
        ellmax=ellmax,
        sup=sup,
        passed=math.isfinite(sup),
    )


# ---------------------------------------------------------------------------
# Kernel specification strings.
# ---------------------------------------------------------------------------

_FAMILIES = ("poisson", "gaussian", "cs", "ho")


@dataclass(frozen=True)
class KernelSpec:
    """Parsed kernel description: family plus keyword parameters.

    ``build(rho=...)`` creates the kernel instance; a spec may omit rho and
    act as a template whose scale is supplied per run.
    """

    family: str
    params: dict

    def build(self, rho=None):
        params = dict(self.params)
        if rho is not None:
            params["rho"] = float(rho)
        if "rho" not in params:
            raise ValueError(
                f"kernel spec '{self.family}' needs rho (give rho=... or a scale rule)"
            )
        rho_val = check_positive(params.pop("rho"), name="rho")
        family = self.family
        n_terms = params.pop("K", None)
        scales = params.pop("a", None)
        base_family = params.pop("base", family if family != "ho" else "gaussian")
        if family == "ho" or n_terms is not None and n_terms > 1 or scales is not None:
            base = _build_plain(base_family, rho_val, params)
            return HighOrderKernel(
                base=base,
                n_terms=int(n_terms) if n_terms is not None else (
                    len(scales) if scales is not None else 2
                ),
                scales=scales,
            )
        return _build_plain(family, rho_val, params)

    @property
    def order(self):
        """Approximation order implied by the spec (for scale-rule defaults)."""
        n_terms = self.params.get("K")
        scales = self.params.get("a")
        if self.family == "ho" or n_terms is not None or scales is not None:
            k = int(n_terms) if n_terms is not None else (
                len(scales) if scales is not None else 2
            )
            return 2 * k
        return 1 if self.family == "poisson" else 2


def _build_plain(family, rho, params):
    params = dict(params)
    m = params.pop("m", None)
    if params:
        raise ValueError(f"unknown kernel parameters {sorted(params)} for '{family}'")
    if family == "cs":
        return CompactSupportKernel(rho=rho, m=int(m) if m is not None else 5)
    if m is not None:
        raise ValueError("parameter 'm' applies to the cs family only")
    if family == "poisson":
        return PoissonKernel(rho=rho)
    if family == "gaussian":
        return GaussianKernel(rho=rho)
    raise ValueError(f"unknown kernel family '{family}'")


def parse_kernel(text):
    """Parse ``family[:param=value,...]`` into a KernelSpec.

    Families: ``poisson``, ``gaussian``, ``cs``, ``ho``.  Parameters:
    ``rho`` (float), ``m`` (int, compact-support exponent), ``K`` (int,
    number of high-order terms), ``a`` (slash-separated scales, e.g.
    ``a=0.5/1``), ``base`` (family of a high-order combination).  A plain
    family with ``K`` given, e.g. ``gaussian:K=3``, lifts to the high-order
    combination of that family.
    """
    text = text.strip()
    if not text:
        raise ValueError("empty kernel spec")
    family, _, rest = text.partition(":")
    family = family.strip().lower()
    if family not in _FAMILIES:
        raise ValueError(f"unknown kernel family '{family}' (choose from {_FAMILIES})")
    params = {}
    if rest.strip():
        for item in rest.split(","):
            key, sep, value = item.partition("=")
            key = key.strip()
            value = value.strip()
            if not sep or not key or not value:
                raise ValueError(f"malformed kernel parameter '{item}'")
            if key == "rho":
                params["rho"] = float(value)
            elif key in ("m", "K"):
                params[key] = int(value)
            elif key == "a":
                params["a"] = tuple(float(v) for v in value.split("/"))
            elif key == "base":
                base = value.lower()
                if base not in _FAMILIES or base == "ho":
                    raise ValueError(f"invalid base family '{value}'")
                params["base"] = base
            else:
                raise ValueError(f"unknown kernel parameter '{key}'")
    if family == "ho" and "base" not in params:
        params["base"] = "gaussian"
    if "a" in params and "K" in params and len(params["a"]) != params["K"]:
        raise ValueError("scales 'a' and count 'K' disagree")
    return KernelSpec(family=family, params=params)
