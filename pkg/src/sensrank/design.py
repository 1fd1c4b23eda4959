"""Design sensitivity: pi, pi(x) curves, and the uniform sup.

For a score phi and alternative G with |Y|-CDF H(y) = G(y) - G(-y),

  pi(x) = int_{q_{1-x}}^inf phi(H(y)) dG(y) / int_{1-x}^1 phi(t) dt,

with q_{1-x} the (1-x)-quantile of |Y|.  The design sensitivity of the
fixed test is Gamma~ = pi(1)/(1-pi(1)); the uniform test's is the sup of
pi(x)/(1-pi(x)) over x.

Numerically both integrals live on the |Y|-survival scale.  Substituting
u = P(Y > y) (so y = isf(u)) maps the numerator to

  N(x) = int_0^{u(x)} phi(H(isf(u))) du,      u(x) = sf(q_{1-x}),

where phi at H-values near 1 is evaluated through the complement
H = 1 - abs_sf(y), keeping everything accurate when x is tiny.  The
denominator D(x) = int_{1-x}^1 phi is closed form.  pi = N/D <= 1 holds
exactly in the math because phi(H(y)) dG(y) = phi(1-v) r dv with
r = g(y)/(g(y)+g(-y)) <= 1.

When pi is close to 1 the deficiency is integrated directly instead of
being formed as 1 - N/D.  D splits over the two signs of Y, so

  D(x) (1 - pi(x)) = int_{q_{1-x}}^inf phi(1 - abs_sf(y)) g(-y) dy:

the shortfall is exactly the phi-mass sitting on large wrong-sign
differences.  Substituting t = G(-y) maps it onto (0, G(-q_{1-x})]
with integrand phi(1 - abs_sf(-quantile(t))), again evaluated through
the complement.  Everything is cancellation-free, so deficiencies of
order 1e-14 are still meaningful and the infinite-design-sensitivity
regime of normal-tailed alternatives is detectable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._quadrature import adaptive_simpson
from .alternatives import Distribution, TailRatioBound, tail_ratio_liminf
from .errors import ConfigError
from .scores import ScoreFunction

# Below this truncation level, N/D is all cancellation: go deficiency-first.
_DEEP_X = 1e-6
# Panels shrink geometrically by this total factor; the neglected sliver
# below carries at most ~1e-14 of the integral (integrands are monotone
# up to the slowly varying phi factor).
_PANEL_SPAN = 1e-14
_PANELS_PER_DECADE = 1.0

# Fixed deep-tail probes appended to the sup search (in addition to the
# user grid): geometric in the exponent down to 1e-200, which is deep
# enough for normal-type tails to push 1 - pi below the 1e-9 sentinel
# while every intermediate quantity stays inside double range.
PROBE_X = tuple(10.0 ** e for e in
                (-6, -9, -13, -18, -25, -34, -46, -62, -84, -113, -153, -200))

SENTINEL_TOL = 1e-9


@dataclass(frozen=True)
class PiCurve:
    """pi(x) and gamma(x) = pi/(1-pi) on an increasing x grid."""

    x: np.ndarray
    pi: np.ndarray
    gamma: np.ndarray
    score_spec: str
    dist_spec: str


@dataclass(frozen=True)
class UniformDesignSensitivity:
    """sup_x pi(x)/(1-pi(x)) with the achieved argmax; inf when the
    sentinel fired (max pi >= 1 - 1e-9)."""

    gamma_tilde: float
    infinite: bool
    x_at: float
    pi_max: float
    curve: PiCurve


def _panel_integral(f, hi: float, *, rel_tol: float = 1e-9) -> float:
    """int_0^hi f, f positive with at worst a mild (log-type) endpoint
    singularity at 0: geometric panels down to hi * _PANEL_SPAN, the rest
    dropped (bounded by span * sup f, relative ~1e-14)."""
    if hi <= 0.0:
        return 0.0
    n_panels = max(4, int(round(-math.log10(_PANEL_SPAN) / _PANELS_PER_DECADE)))
    edges = np.geomspace(hi * _PANEL_SPAN, hi, n_panels + 1)
    total = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        total += adaptive_simpson(f, float(a), float(b),
                                  abs_tol=0.0, rel_tol=rel_tol)
    return total


def _numerator(score: ScoreFunction, d: Distribution, x: float) -> float:
    """N(x) = int_0^{u(x)} phi(1 - abs_sf(isf(u))) du."""
    if x >= 1.0:
        q_low = 0.0
    else:
        q_low = d.abs_quantile_sf(x)
    u_hi = float(d.sf(q_low))

    def integrand(u: float) -> float:
        y = float(d.isf(u))
        eps_h = float(d.abs_sf(y))
        if eps_h <= 0.0:
            return 0.0
        return float(score.evaluate_complement(min(eps_h, 1.0)))

    return _panel_integral(integrand, u_hi)


def _deficiency(score: ScoreFunction, d: Distribution, x: float) -> float:
    """int_0^{t(x)} phi(1 - abs_sf(-quantile(t))) dt, t(x) = G(-q_{1-x}):
    the wrong-sign phi-mass, integrated over the negative tail's own
    probability scale."""
    if x >= 1.0:
        q_low = 0.0
    else:
        q_low = d.abs_quantile_sf(x)
    t_hi = float(d.cdf(-q_low))

    def integrand(t: float) -> float:
        y = -float(d.quantile(t))
        eps_h = float(d.abs_sf(y))
        if eps_h <= 0.0:
            return 0.0
        return float(score.evaluate_complement(min(eps_h, 1.0)))

    return _panel_integral(integrand, t_hi)


def pi_components(score: ScoreFunction, d: Distribution, x: float
                  ) -> tuple[float, float]:
    """(pi(x), 1 - pi(x)), each computed on its own well-conditioned side."""
    if not 0.0 < x <= 1.0:
        raise ConfigError(f"truncation level x must be in (0,1], got {x}")
    denom = score.tail_integral(x)
    if denom <= 0.0:
        raise ConfigError(
            f"score integral over [1-x, 1] vanished at x = {x}")
    if x < _DEEP_X:
        omp = _deficiency(score, d, x) / denom
        omp = min(max(omp, 0.0), 1.0)
        return 1.0 - omp, omp
    pi = _numerator(score, d, x) / denom
    pi = min(max(pi, 0.0), 1.0)
    if pi < 0.99:
        return pi, 1.0 - pi
    omp = _deficiency(score, d, x) / denom
    omp = min(max(omp, 0.0), 1.0)
    return pi, omp


def pi_of_x(score: ScoreFunction, d: Distribution, x: float) -> float:
    """pi(x) in [0,1]."""
    return pi_components(score, d, x)[0]


def pi_fixed(score: ScoreFunction, d: Distribution) -> float:
    """pi of the fixed-sample test: pi(1)."""
    return pi_of_x(score, d, 1.0)


def _gamma_of(pi: float, omp: float) -> float:
    if omp <= 0.0:
        return math.inf
    return pi / omp


def default_x_grid(points: int = 200, x_min: float = 1e-4) -> np.ndarray:
    if points < 2 or not 0.0 < x_min < 1.0:
        raise ConfigError(f"bad x grid spec ({points} points from {x_min})")
    return np.geomspace(x_min, 1.0, points)


def pi_curve(score: ScoreFunction, d: Distribution,
             x_grid: np.ndarray | None = None) -> PiCurve:
    """Evaluate pi and gamma over a grid (default geometric 1e-4..1)."""
    grid = default_x_grid() if x_grid is None else np.asarray(x_grid, float)
    if grid.ndim != 1 or grid.size == 0 or np.any(np.diff(grid) <= 0.0):
        raise ConfigError("x grid must be strictly increasing and nonempty")
    if grid[0] <= 0.0 or grid[-1] > 1.0:
        raise ConfigError("x grid must lie in (0, 1]")
    pi = np.empty(grid.size)
    gamma = np.empty(grid.size)
    for j, x in enumerate(grid):
        p, omp = pi_components(score, d, float(x))
        pi[j] = p
        gamma[j] = _gamma_of(p, omp)
    return PiCurve(x=grid, pi=pi, gamma=gamma,
                   score_spec=score.spec_string(), dist_spec=d.spec_string())


def gamma_tilde_uniform(score: ScoreFunction, d: Distribution,
                        x_grid: np.ndarray | None = None, *,
                        probe_tail: bool = True) -> UniformDesignSensitivity:
    """sup_x pi(x)/(1-pi(x)) over the grid plus deep-tail probes.

    The returned curve covers only the requested grid; the probes (fixed
    ladder down to x = 1e-200) only feed the sup and the sentinel, which
    fires as soon as any evaluated pi reaches 1 - 1e-9.  Alternatives
    with unbounded density-ratio tails (normal, for one) push 1 - pi(x)
    to 0 like a Gaussian tail in log(1/x), far beyond any reasonable
    plotting grid.
    """
    curve = pi_curve(score, d, x_grid)
    best_gamma = -math.inf
    best_x = float(curve.x[0])
    pi_max = -math.inf
    for x, p, g in zip(curve.x, curve.pi, curve.gamma):
        if g > best_gamma:
            best_gamma, best_x = float(g), float(x)
        pi_max = max(pi_max, float(p))
    if probe_tail:
        for x in PROBE_X:
            try:
                p, omp = pi_components(score, d, x)
            except ConfigError:
                # score mass on [1-x, 1] underflowed (redescending scores
                # scale like x^2 there); deeper probes only get worse
                break
            g = _gamma_of(p, omp)
            if g > best_gamma:
                best_gamma, best_x = g, x
            pi_max = max(pi_max, p)
    infinite = pi_max >= 1.0 - SENTINEL_TOL
    value = math.inf if infinite else best_gamma
    return UniformDesignSensitivity(gamma_tilde=value, infinite=infinite,
                                    x_at=best_x, pi_max=pi_max, curve=curve)


def tail_bound(score: ScoreFunction, d: Distribution) -> TailRatioBound:
    """Tail-ratio lower bound for the uniform design sensitivity.

    Score-independent: any of the four variants has uniform design
    sensitivity at least liminf g(q)/g(-q)."""
    del score  # the bound holds for every admissible score
    return tail_ratio_liminf(d)
