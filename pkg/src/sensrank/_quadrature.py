"""Adaptive Simpson quadrature.

Classic recursive bisection with Richardson extrapolation: a subinterval is
accepted when |S2 - S1| <= 15 * tol, where S1 is Simpson on the interval and
S2 the two-half composite; the returned value includes the (S2 - S1)/15
correction, giving an effectively sixth-order rule on smooth integrands.
"""

from __future__ import annotations

import math

from .errors import NumericError


def _simpson(fa: float, fm: float, fb: float, h: float) -> float:
    return h / 6.0 * (fa + 4.0 * fm + fb)


def adaptive_simpson(f, a: float, b: float, *, abs_tol: float = 1e-10,
                     rel_tol: float = 1e-8, max_depth: int = 48) -> float:
    """Integrate f over [a, b] to roughly max(abs_tol, rel_tol * |result|).

    The relative part of the tolerance is applied against the running
    whole-interval estimate, so panels of very different magnitude can be
    composed by the caller without the small ones being over-resolved.
    Raises NumericError if the recursion hits max_depth before the local
    tolerance is met.
    """
    if not (a <= b):
        raise ValueError("need a <= b")
    if a == b:
        return 0.0
    fa, fb = f(a), f(b)
    m = 0.5 * (a + b)
    fm = f(m)
    whole = _simpson(fa, fm, fb, b - a)
    tol = max(abs_tol, rel_tol * abs(whole))

    def recurse(x0, fx0, x2, fx2, x1, fx1, s, tol, depth):
        xl = 0.5 * (x0 + x1)
        xr = 0.5 * (x1 + x2)
        fl, fr = f(xl), f(xr)
        s_left = _simpson(fx0, fl, fx1, x1 - x0)
        s_right = _simpson(fx1, fr, fx2, x2 - x1)
        s2 = s_left + s_right
        if not math.isfinite(s2):
            raise NumericError(
                f"non-finite Simpson panel on [{x0}, {x2}]")
        if abs(s2 - s) <= 15.0 * tol or (x1 - x0) <= abs(x1) * 1e-15:
            return s2 + (s2 - s) / 15.0
        if depth >= max_depth:
            raise NumericError(
                f"adaptive Simpson: depth {max_depth} exceeded on "
                f"[{x0}, {x2}] (estimate {s2}, last change {s2 - s})")
        half = 0.5 * tol
        return (recurse(x0, fx0, x1, fx1, xl, fl, s_left, half, depth + 1)
                + recurse(x1, fx1, x2, fx2, xr, fr, s_right, half, depth + 1))

    return recurse(a, fa, b, fb, m, fm, whole, tol, 0)
