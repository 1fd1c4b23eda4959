"""Level-alpha sensitivity decisions and the Gamma-threshold search.

uniform_test compares the rank walk T(k/(n+1)) against the crossing
boundary f at every rank where the walk can move, rejecting as soon as
any margin T - f is nonnegative; fixed_test compares the full-sample
statistic against a single critical value.  Ties or zero differences
switch both to the tie-averaged scores c* and, for the uniform test, to
the starred walk that enters tie groups atomically, so decisions are
invariant to the input order of tied pairs.

gamma_threshold locates the sensitivity value: the largest Gamma on an
increasing grid at which the chosen test still rejects, sharpened by
bisection inside the bracketing grid cell.  Rejection should be monotone
nonincreasing in Gamma, but the boundary depends on Gamma nonlinearly
(through both rho and lambda_n), so the scan records monotone_ok rather
than assuming it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .boundary import (DEFAULT_X0, BoundaryConfig, NullModel, boundary,
                       fixed_critical_value)
from .data import PairDifferences, rank_by_abs, tie_averaged_scores
from .errors import ConfigError
from .scores import ScoreFunction, rank_scores
from .walk import build_star_walk, build_walk

DEFAULT_GAMMA_MAX = 100.0
DEFAULT_GRID_POINTS = 400
DEFAULT_BISECT_TOL = 0.01


@dataclass(frozen=True)
class TestResult:
    """One reject / fail-to-reject decision with its evidence.

    crossing_ranks lists every rank k with T(k/(n+1)) >= f(k/(n+1)) (for
    the fixed test, (n,) when it rejects); max_margin is the largest
    T - f over the evaluated ranks, so reject, nonempty crossing_ranks,
    and max_margin >= 0 all say the same thing.  critical_value and x0
    are None for whichever test does not use them.
    """

    kind: str
    reject: bool
    crossing_ranks: tuple[int, ...]
    max_margin: float
    statistic: float
    critical_value: float | None
    gamma: float
    alpha: float
    x0: float | None
    score_spec: str
    starred: bool
    n: int
    degenerate: bool = False

    def __post_init__(self):
        nonempty = len(self.crossing_ranks) > 0
        if self.reject != nonempty or self.reject != (self.max_margin >= 0.0):
            raise ConfigError(
                "inconsistent TestResult: reject, crossing_ranks, and "
                "max_margin must agree")


@dataclass(frozen=True)
class GammaThreshold:
    """Largest Gamma at which the test still rejects.

    gamma_hat = 0.0 signals no rejection even at Gamma = 1 (nothing to
    quantify); at_cap means every scanned Gamma rejected, so gamma_hat
    sits at the grid maximum and the true threshold is only bounded
    below.  decisions holds the per-grid-point reject flags in grid
    order, and monotone_ok whether they were nonincreasing; bracket is
    the (last-reject, first-fail) pair after bisection when a genuine
    crossing was found.
    """

    gamma_hat: float
    grid: np.ndarray
    decisions: np.ndarray
    monotone_ok: bool
    rejects_at_one: bool
    at_cap: bool
    test_kind: str
    bracket: tuple[float, float] | None


def _degenerate_result(kind: str, ranked_n: int, gamma: float, alpha: float,
                       x0: float | None, score: ScoreFunction) -> TestResult:
    return TestResult(kind=kind, reject=False, crossing_ranks=(),
                      max_margin=-math.inf, statistic=0.0,
                      critical_value=None, gamma=float(gamma),
                      alpha=float(alpha), x0=x0,
                      score_spec=score.spec_string(), starred=True,
                      n=ranked_n, degenerate=True)


def uniform_test(data: PairDifferences, score: ScoreFunction, gamma: float,
                 alpha: float = 0.05, x0: float = DEFAULT_X0) -> TestResult:
    """Reject H_0(Gamma) when the walk crosses f anywhere.

    The boundary holds simultaneously over all truncation levels, so the
    walk is checked at every rank where it can change: all of 1..n
    without ties, one rank per tie group with them.
    """
    model = NullModel(gamma)
    config = BoundaryConfig(alpha=alpha, x0=x0)
    ranked = rank_by_abs(data)
    if ranked.zero_count == ranked.n:
        return _degenerate_result("uniform", ranked.n, gamma, alpha,
                                  config.x0, score)
    starred = ranked.has_ties or ranked.zero_count > 0
    if starred:
        walk = build_star_walk(ranked, tie_averaged_scores(ranked, score))
    else:
        walk = build_walk(ranked, score)
    bounds = boundary(model, walk.scores, config, starred=starred,
                      with_g=False)
    ks = walk.eval_ranks
    margins = walk.values[ks - 1] - bounds.f[ks - 1]
    crossing = ks[margins >= 0.0]
    return TestResult(kind="uniform", reject=crossing.size > 0,
                      crossing_ranks=tuple(int(k) for k in crossing),
                      max_margin=float(margins.max()),
                      statistic=walk.full_statistic, critical_value=None,
                      gamma=model.gamma, alpha=config.alpha, x0=config.x0,
                      score_spec=score.spec_string(), starred=starred,
                      n=ranked.n)


def default_fixed_method(score: ScoreFunction) -> str:
    """exact_sign where the binomial tail applies, normal_approx otherwise."""
    return "exact_sign" if score.kind == "sign" else "normal_approx"


def fixed_test(data: PairDifferences, score: ScoreFunction, gamma: float,
               alpha: float = 0.05, method: str | None = None, *,
               reps: int = 100_000, seed: int = 0) -> TestResult:
    """Reject H_0(Gamma) when the full statistic meets its critical value.

    Ties and zeros substitute tie-averaged scores c* in both the
    statistic and the critical value (for the sign score c* is still all
    ones, so exact_sign stays available).
    """
    model = NullModel(gamma)
    if method is None:
        method = default_fixed_method(score)
    ranked = rank_by_abs(data)
    if ranked.zero_count == ranked.n:
        return _degenerate_result("fixed", ranked.n, gamma, alpha, None,
                                  score)
    starred = ranked.has_ties or ranked.zero_count > 0
    if starred:
        c = tie_averaged_scores(ranked, score).c_star
    else:
        c = rank_scores(score, ranked.n)
    statistic = float(np.dot(c, ranked.signs))
    critical = fixed_critical_value(model, c, alpha, method=method,
                                    reps=reps, seed=seed)
    margin = statistic - critical
    reject = margin >= 0.0
    return TestResult(kind="fixed", reject=reject,
                      crossing_ranks=(ranked.n,) if reject else (),
                      max_margin=margin, statistic=statistic,
                      critical_value=critical, gamma=model.gamma,
                      alpha=float(alpha), x0=None,
                      score_spec=score.spec_string(), starred=starred,
                      n=ranked.n)


def default_gamma_grid(gamma_max: float = DEFAULT_GAMMA_MAX,
                       points: int = DEFAULT_GRID_POINTS) -> np.ndarray:
    """Geometric grid from 1 to gamma_max."""
    if not gamma_max > 1.0 or points < 2:
        raise ConfigError(
            f"gamma grid needs gamma_max > 1 and >= 2 points, got "
            f"({gamma_max}, {points})")
    return np.geomspace(1.0, gamma_max, points)


def _decider(data: PairDifferences, score: ScoreFunction, alpha: float,
             x0: float, test_kind: str, method: str | None, reps: int,
             seed: int) -> Callable[[float], bool]:
    """Gamma -> reject closure with the Gamma-independent work hoisted."""
    ranked = rank_by_abs(data)
    if ranked.zero_count == ranked.n:
        return lambda gamma: False
    starred = ranked.has_ties or ranked.zero_count > 0

    if test_kind == "uniform":
        config = BoundaryConfig(alpha=alpha, x0=x0)
        if starred:
            walk = build_star_walk(ranked, tie_averaged_scores(ranked, score))
        else:
            walk = build_walk(ranked, score)
        top = walk.values[walk.eval_ranks - 1]
        idx = walk.eval_ranks - 1

        def decide(gamma: float) -> bool:
            bounds = boundary(NullModel(gamma), walk.scores, config,
                              starred=starred, with_g=False)
            return bool(np.any(top >= bounds.f[idx]))

        return decide

    if starred:
        c = tie_averaged_scores(ranked, score).c_star
    else:
        c = rank_scores(score, ranked.n)
    statistic = float(np.dot(c, ranked.signs))
    resolved = default_fixed_method(score) if method is None else method

    def decide(gamma: float) -> bool:
        critical = fixed_critical_value(NullModel(gamma), c, alpha,
                                        method=resolved, reps=reps, seed=seed)
        return statistic >= critical

    return decide


def gamma_threshold(data: PairDifferences, score: ScoreFunction,
                    alpha: float = 0.05, x0: float = DEFAULT_X0,
                    test_kind: str = "uniform",
                    grid: np.ndarray | None = None, *,
                    bisect_tol: float = DEFAULT_BISECT_TOL,
                    method: str | None = None, reps: int = 100_000,
                    seed: int = 0) -> GammaThreshold:
    """Scan an increasing Gamma grid, then bisect the reject/fail bracket.

    A grid scan comes first because rejection is not proved monotone in
    Gamma; the first reject-to-fail transition is refined by bisection to
    absolute width bisect_tol, and gamma_hat is the last Gamma actually
    verified to reject.
    """
    if test_kind not in ("uniform", "fixed"):
        raise ConfigError(f"test_kind must be uniform or fixed, "
                          f"got {test_kind!r}")
    if not bisect_tol > 0.0:
        raise ConfigError(f"bisect_tol must be positive, got {bisect_tol}")
    grid = default_gamma_grid() if grid is None else \
        np.asarray(grid, dtype=float)
    if (grid.ndim != 1 or grid.size < 2 or np.any(np.diff(grid) <= 0.0)
            or grid[0] < 1.0):
        raise ConfigError(
            "gamma grid must be 1-D, strictly increasing, with >= 2 "
            "points, starting at or above 1")

    decide = _decider(data, score, alpha, x0, test_kind, method, reps, seed)
    decisions = np.fromiter((decide(float(g)) for g in grid), dtype=bool,
                            count=grid.size)
    fails = np.flatnonzero(~decisions)
    monotone_ok = fails.size == 0 or not decisions[fails[0]:].any()

    if not decisions[0]:
        return GammaThreshold(gamma_hat=0.0, grid=grid, decisions=decisions,
                              monotone_ok=monotone_ok, rejects_at_one=False,
                              at_cap=False, test_kind=test_kind, bracket=None)
    if fails.size == 0:
        return GammaThreshold(gamma_hat=float(grid[-1]), grid=grid,
                              decisions=decisions, monotone_ok=monotone_ok,
                              rejects_at_one=True, at_cap=True,
                              test_kind=test_kind, bracket=None)
    lo = float(grid[fails[0] - 1])
    hi = float(grid[fails[0]])
    while hi - lo > bisect_tol:
        mid = 0.5 * (lo + hi)
        if decide(mid):
            lo = mid
        else:
            hi = mid
    return GammaThreshold(gamma_hat=lo, grid=grid, decisions=decisions,
                          monotone_ok=monotone_ok, rejects_at_one=True,
                          at_cap=False, test_kind=test_kind,
                          bracket=(lo, hi))
