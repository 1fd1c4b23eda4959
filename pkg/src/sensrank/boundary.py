"""Worst-case null model and uniform crossing boundaries.

Under H_0(Gamma) the worst case makes signs i.i.d. Bernoulli(rho) with
rho = Gamma/(1+Gamma).  For the walk with scores c_i the boundary is

  lambda_n = sqrt(2 log(1/alpha) / sigma_n^2(x_0)),
  f(x) = (1/lambda_n) [log(1/alpha)
          + sum_{i=ceil((1-x)(n+1))}^n log(1 + rho (e^{c_i lambda_n} - 1))],

valid simultaneously over all x by a martingale maximal inequality, with

  mu_n(x) = rho * sum c_i,   sigma_n^2(x) = rho (1-rho) * sum c_i^2

over the same index window.  The second-order expansion of f around the
same sub-psi bound is

  g(x) = mu_n(x) + (1 + sigma_n^2(x)/sigma_n^2(x_0))
                   * sqrt(sigma_n^2(x_0) log(1/alpha) / 2),

which dominates f everywhere (g - f >= 0).  Starred boundaries are the
same formulas with c*_i substituted for c_i.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats

from ._normal import norm_isf
from .errors import ConfigError
from .rng import substream

DEFAULT_X0 = 1.0 / 3.0


@dataclass(frozen=True)
class NullModel:
    """Sensitivity parameter Gamma >= 1 and its sign probability rho."""

    gamma: float

    def __post_init__(self):
        if not (math.isfinite(self.gamma) and self.gamma >= 1.0):
            raise ConfigError(f"gamma must be a finite real >= 1, got {self.gamma}")

    @property
    def rho(self) -> float:
        return self.gamma / (1.0 + self.gamma)


@dataclass(frozen=True)
class BoundaryConfig:
    """Level alpha in (0,1) and tuning parameter x0 in (0,1]."""

    alpha: float
    x0: float = DEFAULT_X0

    def __post_init__(self):
        if not (0.0 < self.alpha < 1.0):
            raise ConfigError(f"alpha must be in (0,1), got {self.alpha}")
        if not (0.0 < self.x0 <= 1.0):
            raise ConfigError(f"x0 must be in (0,1], got {self.x0}")


@dataclass(frozen=True)
class BoundaryValues:
    """Per-rank boundary arrays: f[k-1] bounds T(k/(n+1)); g optional."""

    f: np.ndarray
    g: np.ndarray | None
    lambda_n: float
    starred: bool
    gamma: float
    alpha: float
    x0: float


def window_start(x: float, n: int) -> int:
    """i0 = ceil((1-x)(n+1)), clamped to 1..n+1.

    A 1e-12 downward nudge before ceil keeps grid values x = k/(n+1) from
    spilling into the next window through floating-point roundoff; i0 = n+1
    encodes an empty window.
    """
    raw = (1.0 - x) * (n + 1)
    i0 = math.ceil(raw - 1e-12)
    return min(max(i0, 1), n + 1)


def window_size(x: float, n: int) -> int:
    """Number of top ranks inside the window for truncation level x."""
    return n + 1 - window_start(x, n)


def mu(model: NullModel, scores: np.ndarray, k: int) -> float:
    """mu_n at x = k/(n+1): rho times the sum of the top-k scores."""
    c = _top_window(scores, k)
    return model.rho * float(c.sum())


def sigma_sq(model: NullModel, scores: np.ndarray, k: int) -> float:
    """sigma_n^2 at x = k/(n+1): rho(1-rho) times the top-k sum of c^2."""
    c = _top_window(scores, k)
    return model.rho * (1.0 - model.rho) * float(np.square(c).sum())


def _top_window(scores: np.ndarray, k: int) -> np.ndarray:
    scores = np.asarray(scores, dtype=float)
    n = scores.size
    if not 1 <= k <= n:
        raise ConfigError(f"rank k must be in 1..{n}, got {k}")
    return scores[n - k:]


def boundary(model: NullModel, scores: np.ndarray, config: BoundaryConfig,
             *, starred: bool = False, with_g: bool = True) -> BoundaryValues:
    """Evaluate f (and optionally g) at every rank k = 1..n.

    The per-step boundary increment log(1 + rho(e^{c lambda} - 1)) is
    computed as c*lambda + log1p((1-rho) * expm1(-c*lambda)), which is the
    same quantity rearranged to stay finite when c*lambda is large (normal
    scores) and accurate when it is small.
    """
    scores = np.asarray(scores, dtype=float)
    n = scores.size
    if n == 0:
        raise ConfigError("empty score vector")
    if np.any(scores < 0.0):
        raise ConfigError("scores must be nonnegative")
    rho = model.rho
    k0 = window_size(config.x0, n)
    if k0 < 1:
        raise ConfigError(
            f"x0 = {config.x0} leaves no ranks in the window for n = {n}")
    var_x0 = sigma_sq(model, scores, k0)
    if var_x0 <= 0.0:
        raise ConfigError(
            "sigma^2(x0) = 0: every score in the x0 window vanishes, "
            "no valid boundary exists for this configuration")
    log_inv_alpha = math.log(1.0 / config.alpha)
    lam = math.sqrt(2.0 * log_inv_alpha / var_x0)

    t = scores * lam
    increments = t + np.log1p((1.0 - rho) * np.expm1(-t))
    f = (log_inv_alpha + np.cumsum(increments[::-1])) / lam

    g = None
    if with_g:
        csum = np.cumsum(scores[::-1])
        csq = np.cumsum(np.square(scores)[::-1])
        mu_k = rho * csum
        var_k = rho * (1.0 - rho) * csq
        g = mu_k + (1.0 + var_k / var_x0) * math.sqrt(var_x0 * log_inv_alpha / 2.0)

    return BoundaryValues(f=f, g=g, lambda_n=lam, starred=starred,
                          gamma=model.gamma, alpha=config.alpha, x0=config.x0)


def fixed_critical_value(model: NullModel, scores: np.ndarray, alpha: float,
                         method: str = "normal_approx", *, reps: int = 100_000,
                         seed: int = 0) -> float:
    """1-alpha quantile of T_n = sum c_i B_i, B_i iid Bernoulli(rho).

    exact_sign: smallest integer t with P(Bin(n, rho) >= t) <= alpha
    (requires all scores equal to 1, i.e. the sign score, possibly
    tie-averaged).  normal_approx: mu + z_{1-alpha} sigma.  monte_carlo:
    empirical quantile over seeded replicates.
    """
    if not (0.0 < alpha < 1.0):
        raise ConfigError(f"alpha must be in (0,1), got {alpha}")
    scores = np.asarray(scores, dtype=float)
    n = scores.size
    if method == "exact_sign":
        if not np.all(scores == 1.0):
            raise ConfigError("exact_sign requires the sign score (all c_i = 1)")
        tail = stats.binom.sf(np.arange(n + 2) - 1, n, model.rho)
        t = int(np.argmax(tail <= alpha))     # first index where tail <= alpha
        return float(t)
    if method == "normal_approx":
        m = mu(model, scores, n)
        s = math.sqrt(sigma_sq(model, scores, n))
        return m + float(norm_isf(alpha)) * s
    if method == "monte_carlo":
        if reps < 1:
            raise ConfigError(f"reps must be >= 1, got {reps}")
        rng = substream(seed, "fixed_critical_value", model.gamma, alpha, n)
        totals = np.empty(reps, dtype=float)
        chunk = max(1, min(reps, 50_000_000 // max(n, 1)))
        done = 0
        while done < reps:
            take = min(chunk, reps - done)
            u = rng.random((take, n))
            totals[done:done + take] = (u < model.rho) @ scores
            done += take
        return float(np.quantile(totals, 1.0 - alpha, method="higher"))
    raise ConfigError(f"unknown critical-value method {method!r}")
