"""Special functions used by the zonal-kernel machinery.

Everything here is self-contained numpy/math code: three-term recurrences
for Legendre and normalized Gegenbauer polynomials, real orthonormal
spherical harmonics on S^2, exponentially scaled modified Bessel functions
of half-integer order, the regularized lower incomplete gamma function,
and a terminating Gauss hypergeometric sum.
"""

from __future__ import annotations

import math

import numpy as np

from ._validation import (
    check_cosines,
    check_nonneg_int,
    check_positive,
    check_unit_points,
)

__all__ = [
    "legendre_p",
    "legendre_p_sequence",
    "gegenbauer_normalized",
    "gegenbauer_normalized_sequence",
    "real_sph_harm",
    "dim_sph_harm",
    "sphere_surface_area",
    "scaled_bessel_i_half",
    "scaled_bessel_i_half_sequence",
    "gammainc_p",
    "pochhammer",
    "hyp2f1_terminating",
]


# ---------------------------------------------------------------------------
# Legendre polynomials P_ell(dim; t), normalized so P_ell(dim; 1) = 1.
# ---------------------------------------------------------------------------

def legendre_p(ell, dim, t):
    """Legendre polynomial P_ell(dim; t) with normalization P_ell(dim; 1) = 1.

    ``dim`` is the ambient dimension d + 1 of the sphere S^d; ``dim = 3``
    gives the classical Legendre polynomials.  Scalar or array ``t``.
    """
    ell = check_nonneg_int(ell, name="ell")
    dim = check_nonneg_int(dim, name="dim")
    if dim < 3:
        raise ValueError(f"dim must be >= 3, got {dim}")
    t = check_cosines(t)
    if ell == 0:
        return np.ones_like(t) if t.ndim else 1.0
    p_prev = np.ones_like(t)
    p = t.copy()
    for k in range(2, ell + 1):
        # (k + dim - 3) P_k = (2k + dim - 4) t P_{k-1} - (k - 1) P_{k-2}
        p, p_prev = ((2 * k + dim - 4) * t * p - (k - 1) * p_prev) / (k + dim - 3), p
    return p if t.ndim else float(p)


def legendre_p_sequence(ellmax, dim, t):
    """All P_ell(dim; t) for ell = 0..ellmax, stacked along the first axis.

    Returns an array of shape ``(ellmax + 1,) + shape(t)``.
    """
    ellmax = check_nonneg_int(ellmax, name="ellmax")
    dim = check_nonneg_int(dim, name="dim")
    if dim < 3:
        raise ValueError(f"dim must be >= 3, got {dim}")
    t = check_cosines(t)
    scalar = t.ndim == 0
    t = np.atleast_1d(t)
    out = np.empty((ellmax + 1,) + t.shape, dtype=float)
    out[0] = 1.0
    if ellmax >= 1:
        out[1] = t
    for k in range(2, ellmax + 1):
        out[k] = ((2 * k + dim - 4) * t * out[k - 1] - (k - 1) * out[k - 2]) / (
            k + dim - 3
        )
    return out[:, 0] if scalar else out


# ---------------------------------------------------------------------------
# Gegenbauer polynomials normalized to value 1 at x = 1.
# ---------------------------------------------------------------------------

def gegenbauer_normalized(n, alpha, x):
    """Gegenbauer polynomial C_n^alpha(x) / C_n^alpha(1).

    Uses the ratio-normalized three-term recurrence
    D_n = [2 (n + alpha - 1) x D_{n-1} - (n - 1) D_{n-2}] / (2 alpha + n - 1),
    which keeps every value bounded by 1 in magnitude on [-1, 1] and is
    overflow-free for large n.  Scalar or array ``x``.
    """
    n = check_nonneg_int(n, name="n")
    alpha = check_positive(alpha, name="alpha")
    x = check_cosines(x, name="x")
    if n == 0:
        return np.ones_like(x) if x.ndim else 1.0
    d_prev = np.ones_like(x)
    d = x.copy()
    for k in range(2, n + 1):
        d, d_prev = (2 * (k + alpha - 1) * x * d - (k - 1) * d_prev) / (
            2 * alpha + k - 1
        ), d
    return d if x.ndim else float(d)


def gegenbauer_normalized_sequence(nmax, alpha, x):
    """All C_n^alpha(x) / C_n^alpha(1) for n = 0..nmax (first axis)."""
    nmax = check_nonneg_int(nmax, name="nmax")
    alpha = check_positive(alpha, name="alpha")
    x = check_cosines(x, name="x")
    scalar = x.ndim == 0
    x = np.atleast_1d(x)
    out = np.empty((nmax + 1,) + x.shape, dtype=float)
    out[0] = 1.0
    if nmax >= 1:
        out[1] = x
    for k in range(2, nmax + 1):
        out[k] = (2 * (k + alpha - 1) * x * out[k - 1] - (k - 1) * out[k - 2]) / (
            2 * alpha + k - 1
        )
    return out[:, 0] if scalar else out


# ---------------------------------------------------------------------------
# Real orthonormal spherical harmonics on S^2.
# ---------------------------------------------------------------------------

def dim_sph_harm(d, ell):
    """Dimension N(d, ell) of the space of degree-ell spherical harmonics on S^d."""
    d = check_nonneg_int(d, name="d")
    ell = check_nonneg_int(ell, name="ell")
    if d < 1:
        raise ValueError(f"d must be >= 1, got {d}")
    if ell == 0:
        return 1
    # (2 ell + d - 1) Gamma(ell + d - 1) / (Gamma(ell + 1) Gamma(d)), exactly.
    return (2 * ell + d - 1) * math.comb(ell + d - 2, ell) // (d - 1)


def sphere_surface_area(d):
    """Surface area of the unit sphere S^d embedded in R^(d+1)."""
    d = check_nonneg_int(d, name="d")
    if d < 1:
        raise ValueError(f"d must be >= 1, got {d}")
    return 2.0 * math.pi ** ((d + 1) / 2.0) / math.gamma((d + 1) / 2.0)


def _norm_alp_block(ell, m_abs, z, u):
    """Fully normalized associated Legendre value P~_ell^m(z) with u = sin(theta).

    Normalization: integral of P~^2 over [-1, 1] equals 1 / (2 pi), so that
    the real harmonics built from them are orthonormal for the area measure.
    """
    # Seed P~_m^m, then raise the degree.
    p = np.full_like(z, 1.0 / math.sqrt(4.0 * math.pi))
    for k in range(1, m_abs + 1):
        p = p * (math.sqrt((2 * k + 1) / (2.0 * k)) * u)
    if ell == m_abs:
        return p
    p_prev = p
    p = math.sqrt(2 * m_abs + 3) * z * p
    if ell == m_abs + 1:
        return p
    a_prev = math.sqrt(2 * m_abs + 3)  # a_{m+1}^m
    for k in range(m_abs + 2, ell + 1):
        a = math.sqrt((4.0 * k * k - 1.0) / (k * k - m_abs * m_abs))
        p, p_prev = a * (z * p - p_prev / a_prev), p
        a_prev = a
    return p


def real_sph_harm(ell, k, points):
    """Real orthonormal spherical harmonic Y_{ell,k} on S^2.

    The index k runs from 1 to 2 ell + 1 and maps to the azimuthal order
    m = k - ell - 1; negative m are sine-type, positive m cosine-type, and
    m = 0 is the zonal member.  Harmonics are orthonormal for the surface
    measure of total mass 4 pi: integral of Y^2 over S^2 equals 1.

    ``points`` is a single (3,) unit vector or an (N, 3) batch.
    """
    ell = check_nonneg_int(ell, name="ell")
    k = check_nonneg_int(k, name="k")
    if not 1 <= k <= 2 * ell + 1:
        raise ValueError(f"k must lie in [1, {2 * ell + 1}] for ell={ell}, got {k}")
    pts, single = check_unit_points(points, name="points")
    m = k - ell - 1
    z = pts[:, 2]
    u = np.hypot(pts[:, 0], pts[:, 1])
    p = _norm_alp_block(ell, abs(m), z, u)
    if m == 0:
        vals = p
    else:
        phi = np.arctan2(pts[:, 1], pts[:, 0])
        if m > 0:
            vals = math.sqrt(2.0) * p * np.cos(m * phi)
        else:
            vals = math.sqrt(2.0) * p * np.sin(-m * phi)
    return float(vals[0]) if single else vals


# ---------------------------------------------------------------------------
# Exponentially scaled modified Bessel functions of half-integer order.
# ---------------------------------------------------------------------------

def _scaled_i_half_order_zero(z):
    """e^{-z} I_{1/2}(z) = sqrt(2 / (pi z)) (1 - e^{-2z}) / 2, stable for all z > 0."""
    return math.sqrt(2.0 / (math.pi * z)) * 0.5 * (-math.expm1(-2.0 * z))


def _scaled_i_half_terminating(ell, z):
    """Exact elementary form of e^{-z} I_{ell+1/2}(z).

    e^{-z} I_{ell+1/2}(z) = [A - (-1)^ell e^{-2z} B] / sqrt(2 pi z) with
    A = sum_j (-1)^j c_j z^{-j}, B = sum_j c_j z^{-j} and
    c_j = (ell+j)! / (j! (ell-j)! 2^j).  Stable when the alternating terms
    of A decrease, i.e. for z >= 0.7 ell (ell + 1) or so.
    """
    term = 1.0
    a = 1.0
    b = 1.0
    for j in range(ell):
        term *= (ell + j + 1) * (ell - j) / (2.0 * (j + 1) * z)
        b += term
        a += -term if (j % 2 == 0) else term
    val = a - (-1.0 if ell % 2 else 1.0) * math.exp(-2.0 * z) * b
    return val / math.sqrt(2.0 * math.pi * z)


class _NoConvergence(RuntimeError):
    pass


def _bessel_ratio_cf(nu, z, tol=5e-17, max_iter=None):
    """Continued fraction for I_{nu+1}(z) / I_nu(z) via the modified Lentz scheme."""
    tiny = 1e-300
    f = tiny
    c = f
    d = 0.0
    cap = max_iter if max_iter is not None else int(4 * z) + 20000
    for k in range(1, cap + 1):
        b = 2.0 * (nu + k) / z
        d = b + d
        if d == 0.0:
            d = tiny
        c = b + 1.0 / c
        if c == 0.0:
            c = tiny
        d = 1.0 / d
        delta = c * d
        f *= delta
        if abs(delta - 1.0) < tol:
            return f
    raise _NoConvergence(f"Bessel ratio CF did not converge for nu={nu}, z={z}")


def _scaled_i_series(nu, z):
    """Ascending series for e^{-z} I_nu(z); all terms positive, log-scaled.

    Slow for very large z but free of cancellation; used as a last-resort
    branch when neither the elementary form nor the continued fraction is
    efficient.
    """
    log_t0 = nu * math.log(0.5 * z) - math.lgamma(nu + 1.0) - z
    total = 1.0
    term = 1.0
    shift = 0.0
    k = 0
    q = 0.25 * z * z
    while True:
        ratio = q / ((k + 1.0) * (k + 1.0 + nu))
        term *= ratio
        total += term
        k += 1
        if total > 1e280:
            total *= 1e-280
            term *= 1e-280
            shift += math.log(1e280)
        if ratio < 1.0 and term < 1e-18 * total:
            break
        if k > 10_000_000:
            raise _NoConvergence(f"Bessel series did not converge for nu={nu}, z={z}")
    return math.exp(log_t0 + shift + math.log(total))


def scaled_bessel_i_half(ell, z):
    """Exponentially scaled modified Bessel function e^{-z} I_{ell+1/2}(z), z > 0.

    Dispatches between the exact elementary representation (large z relative
    to ell^2), a backward continued-fraction/ratio product anchored at the
    closed-form order 1/2, and an ascending series fallback.
    """
    ell = check_nonneg_int(ell, name="ell")
    z = check_positive(z, name="z")
    if ell == 0:
        return _scaled_i_half_order_zero(z)
    if z >= 0.7 * ell * (ell + 1):
        return _scaled_i_half_terminating(ell, z)
    try:
        ratio_top = _bessel_ratio_cf(ell - 0.5, z)
    except _NoConvergence:
        return _scaled_i_series(ell + 0.5, z)
    # Downward ratios t_nu = I_{nu+1} / I_nu from nu = ell - 1/2 to 1/2.
    ratios = [ratio_top]
    for nu in range(ell - 1, 0, -1):  # nu + 1/2 with integer nu
        ratios.append(1.0 / (2.0 * (nu + 0.5) / z + ratios[-1]))
    val = _scaled_i_half_order_zero(z)
    for r in reversed(ratios):
        val *= r
    return val


def scaled_bessel_i_half_sequence(ellmax, z):
    """e^{-z} I_{ell+1/2}(z) for ell = 0..ellmax as a single array."""
    ellmax = check_nonneg_int(ellmax, name="ellmax")
    z = check_positive(z, name="z")
    out = np.empty(ellmax + 1)
    out[0] = _scaled_i_half_order_zero(z)
    # Elementary branch while stable, then one continued fraction at the top
    # order and downward ratios for the remaining orders.
    ell_star = ellmax
    for ell in range(1, ellmax + 1):
        if z >= 0.7 * ell * (ell + 1):
            out[ell] = _scaled_i_half_terminating(ell, z)
        else:
            ell_star = ell - 1
            break
    if ell_star >= ellmax:
        return out
    try:
        ratio_top = _bessel_ratio_cf(ellmax - 0.5, z)
    except _NoConvergence:
        for ell in range(ell_star + 1, ellmax + 1):
            out[ell] = _scaled_i_series(ell + 0.5, z)
        return out
    ratios = np.empty(ellmax - ell_star)
    ratios[-1] = ratio_top
    # ratios[i] = I_{nu+1}/I_nu at nu = ell_star + i + 1/2; step down with
    # r_{nu} = 1 / (2(nu+1)/z + r_{nu+1}).
    for i in range(ellmax - ell_star - 2, -1, -1):
        nu_plus_1 = ell_star + i + 1.5
        ratios[i] = 1.0 / (2.0 * nu_plus_1 / z + ratios[i + 1])
    for i, ell in enumerate(range(ell_star + 1, ellmax + 1)):
        out[ell] = out[ell - 1] * ratios[i]
    return out


# ---------------------------------------------------------------------------
# Regularized lower incomplete gamma function P(b, x).
# ---------------------------------------------------------------------------

def gammainc_p(b, x):
    """Regularized lower incomplete gamma function P(b, x), b > 0, x >= 0.

    Power series for x < b + 1, continued fraction for the complement
    otherwise; both branches agree near the crossover to high accuracy.
    """
    b = check_positive(b, name="b")
    x = float(x)
    if not np.isfinite(x) or x < 0.0:
        raise ValueError(f"x must be finite and >= 0, got {x!r}")
    if x == 0.0:
        return 0.0
    log_front = b * math.log(x) - x - math.lgamma(b)
    if x < b + 1.0:
        # P(b, x) = x^b e^{-x} / Gamma(b) * sum_k x^k / (b)_{k+1}
        ap = b
        term = 1.0 / b
        total = term
        for _ in range(10000):
            ap += 1.0
            term *= x / ap
            total += term
            if abs(term) < abs(total) * 1e-17:
                return min(1.0, math.exp(log_front) * total)
        raise RuntimeError(f"gammainc_p series did not converge for b={b}, x={x}")
    # Continued fraction for Q(b, x) (modified Lentz).
    tiny = 1e-300
    f = x + 1.0 - b
    if f == 0.0:
        f = tiny
    c = 1.0 / tiny
    d = 1.0 / f
    h = d
    for i in range(1, 10000):
        an = -i * (i - b)
        bn = x + 2.0 * i + 1.0 - b
        d = bn + an * d
        if d == 0.0:
            d = tiny
        c = bn + an / c
        if c == 0.0:
            c = tiny
        d = 1.0 / d
        delta = c * d
        h *= delta
        if abs(delta - 1.0) < 5e-17:
            q = math.exp(log_front) * h
            return max(0.0, 1.0 - q)
    raise RuntimeError(f"gammainc_p continued fraction did not converge for b={b}, x={x}")


# ---------------------------------------------------------------------------
# Pochhammer symbol and a terminating 2F1 sum.
# ---------------------------------------------------------------------------

def pochhammer(x, j):
    """Rising factorial (x)_j = x (x + 1) ... (x + j - 1), with (x)_0 = 1."""
    j = check_nonneg_int(j, name="j")
    x = float(x)
    out = 1.0
    for i in range(j):
        out *= x + i
    return out


def hyp2f1_terminating(n, b, c, z):
    """Terminating Gauss hypergeometric sum 2F1(-n, b; c; z).

    Evaluates sum_{k=0}^{n} (-n)_k (b)_k / ((c)_k k!) z^k with compensated
    (Kahan) accumulation.  ``c`` must not be a nonpositive integer >= -n,
    which would put a zero in a denominator before the series terminates.
    """
    n = check_nonneg_int(n, name="n")
    b = float(b)
    c = float(c)
    z = float(z)
    if c <= 0.0 and c == int(c) and int(c) >= -n:
        raise ValueError(f"c={c} is a nonpositive integer >= -n; series undefined")
    total = 1.0
    comp = 0.0
    term = 1.0
    for k in range(n):
        term *= (-(n - k)) * (b + k) / ((c + k) * (k + 1.0)) * z
        y = term - comp
        t = total + y
        comp = (t - total) - y
        total = t
    return total
