"""Standard normal pdf/cdf/quantile helpers.

The quantile uses the Acklam AS-241-style rational approximation (absolute
error ~1e-9 on its own) refined by one Newton step against the erfc-based
CDF, which brings it to near machine precision.  Survival-side variants are
provided so that tail probabilities around 1e-300 stay representable: never
compute 1 - cdf(z) for large z, call sf(z) instead.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import special

_SQRT2 = math.sqrt(2.0)
_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)

# Acklam rational approximation coefficients.
_A = (-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
      1.383577518672690e+02, -3.066479806614716e+01, 2.506628277459239e+00)
_B = (-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
      6.680131188771972e+01, -1.328068155288572e+01)
_C = (-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
      -2.549732539343734e+00, 4.374664141464968e+00, 2.938163982698783e+00)
_D = (7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
      3.754408661907416e+00)

_P_LOW = 0.02425


def norm_pdf(z):
    """Standard normal density, scalar or ndarray."""
    if isinstance(z, (float, int)):
        return _INV_SQRT_2PI * math.exp(-0.5 * z * z)
    return _INV_SQRT_2PI * np.exp(-0.5 * np.square(z))


def norm_cdf(z):
    """P(Z <= z) via erfc; accurate in the lower tail."""
    if isinstance(z, (float, int)):
        return 0.5 * math.erfc(-z / _SQRT2)
    return 0.5 * special.erfc(-np.asarray(z, dtype=float) / _SQRT2)


def norm_sf(z):
    """P(Z > z) via erfc; accurate in the upper tail (down to ~1e-308)."""
    if isinstance(z, (float, int)):
        return 0.5 * math.erfc(z / _SQRT2)
    return 0.5 * special.erfc(np.asarray(z, dtype=float) / _SQRT2)


def _ppf_scalar(p: float) -> float:
    """Scalar norm_ppf: Acklam plus one log-space Newton step."""
    if math.isnan(p):
        raise ValueError("p must lie in [0, 1]")
    if p <= 0.0:
        if p == 0.0:
            return -math.inf
        raise ValueError("p must lie in [0, 1]")
    if p >= 1.0:
        if p == 1.0:
            return math.inf
        raise ValueError("p must lie in [0, 1]")
    flip = p > 0.5
    pt = 1.0 - p if flip else p
    if pt < _P_LOW:
        q = math.sqrt(-2.0 * math.log(pt))
        z = (((((_C[0] * q + _C[1]) * q + _C[2]) * q + _C[3]) * q + _C[4]) * q + _C[5]) / \
            ((((_D[0] * q + _D[1]) * q + _D[2]) * q + _D[3]) * q + 1.0)
    else:
        q = pt - 0.5
        r = q * q
        z = (((((_A[0] * r + _A[1]) * r + _A[2]) * r + _A[3]) * r + _A[4]) * r + _A[5]) * q / \
            (((((_B[0] * r + _B[1]) * r + _B[2]) * r + _B[3]) * r + _B[4]) * r + 1.0)
    cdf = 0.5 * math.erfc(-z / _SQRT2)
    dens = _INV_SQRT_2PI * math.exp(-0.5 * z * z)
    if cdf > 0.0 and dens > 0.0:
        z += (math.log(pt) - math.log(cdf)) * cdf / dens
    return -z if flip else z


def _acklam(p: np.ndarray) -> np.ndarray:
    """Raw rational approximation to ndtri on (0,1), no refinement."""
    z = np.empty_like(p)
    lo = p < _P_LOW
    hi = p > 1.0 - _P_LOW
    mid = ~(lo | hi)
    if np.any(lo):
        q = np.sqrt(-2.0 * np.log(p[lo]))
        z[lo] = (((((_C[0] * q + _C[1]) * q + _C[2]) * q + _C[3]) * q + _C[4]) * q + _C[5]) / \
            ((((_D[0] * q + _D[1]) * q + _D[2]) * q + _D[3]) * q + 1.0)
    if np.any(hi):
        q = np.sqrt(-2.0 * np.log(1.0 - p[hi]))
        z[hi] = -(((((_C[0] * q + _C[1]) * q + _C[2]) * q + _C[3]) * q + _C[4]) * q + _C[5]) / \
            ((((_D[0] * q + _D[1]) * q + _D[2]) * q + _D[3]) * q + 1.0)
    if np.any(mid):
        q = p[mid] - 0.5
        r = q * q
        z[mid] = (((((_A[0] * r + _A[1]) * r + _A[2]) * r + _A[3]) * r + _A[4]) * r + _A[5]) * q / \
            (((((_B[0] * r + _B[1]) * r + _B[2]) * r + _B[3]) * r + _B[4]) * r + 1.0)
    return z


def norm_ppf(p):
    """Inverse standard normal CDF.

    Acklam's approximation plus one Newton step z -= (Phi(z) - p)/phi(z)
    with Phi computed from erfc, so the lower tail is usable down to the
    smallest normal doubles.  p = 0 and p = 1 map to -inf/+inf; values
    outside [0,1] raise ValueError.
    """
    if isinstance(p, (float, int)):
        return _ppf_scalar(float(p))
    p_arr = np.asarray(p, dtype=float)
    if np.any((p_arr < 0.0) | (p_arr > 1.0)) or not np.all(np.isfinite(p_arr)):
        raise ValueError("p must lie in [0, 1]")
    scalar = p_arr.ndim == 0
    p_arr = np.atleast_1d(p_arr)
    z = np.empty_like(p_arr)
    z[p_arr == 0.0] = -np.inf
    z[p_arr == 1.0] = np.inf
    interior = (p_arr > 0.0) & (p_arr < 1.0)
    if np.any(interior):
        pi_ = p_arr[interior]
        zi = _acklam(pi_)
        # One Newton step on log Phi(z) = log p, folded onto the lower
        # tail (upper-tail p mirrored by symmetry).  Working on the log
        # keeps the step bounded in the far tail, where Phi spans many
        # orders of magnitude per unit of z; the step is
        # (log p - log Phi(z)) * Phi(z) / phi(z).
        upper = pi_ > 0.5
        zi[upper] = -zi[upper]
        pt = np.where(upper, 1.0 - pi_, pi_)
        cdf = norm_cdf(zi)
        dens = norm_pdf(zi)
        ok = (dens > 0.0) & (cdf > 0.0)
        delta = np.zeros_like(zi)
        delta[ok] = (np.log(pt[ok]) - np.log(cdf[ok])) * cdf[ok] / dens[ok]
        zi = zi + delta
        zi[upper] = -zi[upper]
        z[interior] = zi
    if scalar:
        return float(z[0])
    return z


def norm_isf(q):
    """Inverse survival function: z with P(Z > z) = q. Exact mirror of ppf."""
    if isinstance(q, (float, int)):
        return -_ppf_scalar(float(q))
    return -norm_ppf(q)
