"""Sensitivity analysis for paired observational studies with uniform
general signed rank tests.

The statistic family T_n(x) truncates a signed rank statistic to the
top x fraction of pairs by absolute difference; the uniform test
rejects the sensitivity null H_0(Gamma) when the family crosses a
martingale boundary at any x, staying level alpha simultaneously over
all truncation levels.  The package covers the tie-invariant starred
variant, fixed-sample counterparts, Gamma-threshold search, design
sensitivity (fixed and uniform), and seeded Monte Carlo power studies.
"""

from .alternatives import (Cauchy, Distribution, Laplace, Normal,
                           RareEffects, TailRatioBound, parse_dist,
                           tail_ratio_liminf)
from .boundary import (DEFAULT_X0, BoundaryConfig, BoundaryValues, NullModel,
                       boundary, fixed_critical_value, mu, sigma_sq,
                       window_size, window_start)
from .data import (PairDifferences, RankedSample, TieScores, digest,
                   load_csv, rank_by_abs, tie_averaged_scores)
from .design import (PiCurve, UniformDesignSensitivity, default_x_grid,
                     gamma_tilde_uniform, pi_curve, pi_fixed, pi_of_x,
                     tail_bound)
from .errors import ConfigError, InputError, NumericError, SensrankError
from .power import (PowerEstimate, PowerSpec, PowerTable, power_sweep,
                    simulate_power, simulate_worst_case_level)
from .scores import KINDS, ScoreFunction, TruncatedScore, parse_score, rank_scores
from .tester import (GammaThreshold, TestResult, fixed_test, gamma_threshold,
                     uniform_test)
from .walk import WalkFamily, build_star_walk, build_walk

__version__ = "0.1.0"

__all__ = [
    "BoundaryConfig", "BoundaryValues", "Cauchy", "ConfigError",
    "DEFAULT_X0", "Distribution", "GammaThreshold", "InputError", "KINDS",
    "Laplace", "Normal", "NullModel", "NumericError", "PairDifferences",
    "PiCurve", "PowerEstimate", "PowerSpec", "PowerTable", "RankedSample",
    "RareEffects", "ScoreFunction", "SensrankError", "TailRatioBound",
    "TestResult", "TieScores", "TruncatedScore", "UniformDesignSensitivity",
    "WalkFamily", "boundary", "build_star_walk", "build_walk",
    "default_x_grid", "digest", "fixed_critical_value", "fixed_test",
    "gamma_threshold", "gamma_tilde_uniform", "load_csv", "mu",
    "parse_dist", "parse_score", "pi_curve", "pi_fixed", "pi_of_x",
    "power_sweep", "rank_by_abs", "rank_scores", "sigma_sq",
    "simulate_power", "simulate_worst_case_level", "tail_bound",
    "tail_ratio_liminf", "tie_averaged_scores", "uniform_test",
    "window_size", "window_start",
]
