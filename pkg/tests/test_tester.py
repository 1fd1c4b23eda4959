"""Uniform and fixed tests plus the Gamma-threshold search."""

import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from sensrank.data import PairDifferences
from sensrank.errors import ConfigError
from sensrank.scores import ScoreFunction
from sensrank.tester import (TestResult as Result,
                             default_fixed_method, default_gamma_grid,
                             fixed_test, gamma_threshold,
                             uniform_test)

SIGN = ScoreFunction("sign")
WILCOXON = ScoreFunction("wilcoxon")


def all_positive(n):
    return PairDifferences(np.arange(1.0, n + 1.0))


class TestUniformExamples:
    def test_twelve_positive_pairs_reject_at_gamma_one(self):
        res = uniform_test(all_positive(12), SIGN, gamma=1.0, alpha=0.05,
                           x0=1.0)
        assert res.reject
        # T(k) = k first meets f at rank 7 and stays above it
        assert res.crossing_ranks == tuple(range(7, 13))
        assert res.statistic == 12.0
        assert res.max_margin > 0.0
        assert not res.starred
        assert res.critical_value is None

    def test_all_negative_never_rejects(self):
        res = uniform_test(PairDifferences([-1.0, -2.0, -3.0]), SIGN, 1.0)
        assert not res.reject
        assert res.crossing_ranks == ()
        assert res.max_margin < 0.0

    def test_single_pair_margin_formula(self):
        # n=1, sign, alpha=0.5, full window: lambda = sqrt(8 log 2),
        # f(1) = (log 2 + log(1 + (e^lambda - 1)/2)) / lambda ~ 1.0385,
        # so one positive pair (T=1) misses the boundary.
        res = uniform_test(PairDifferences([3.0]), SIGN, gamma=1.0,
                           alpha=0.5, x0=1.0)
        lam = math.sqrt(8.0 * math.log(2.0))
        f1 = (math.log(2.0)
              + math.log1p(0.5 * math.expm1(lam))) / lam
        assert not res.reject
        assert_allclose(res.max_margin, 1.0 - f1, rtol=1e-12)

    def test_starred_activates_on_ties_and_zeros(self):
        assert not uniform_test(PairDifferences([1.0, 2.0]), SIGN, 1.0).starred
        assert uniform_test(PairDifferences([1.0, 1.0]), SIGN, 1.0).starred
        assert uniform_test(PairDifferences([0.0, 2.0]), SIGN, 1.0).starred

    def test_degenerate_all_zeros(self):
        res = uniform_test(PairDifferences([0.0, 0.0]), SIGN, 1.0)
        assert res.degenerate
        assert not res.reject
        assert res.max_margin == -math.inf

    def test_parameter_validation(self):
        data = PairDifferences([1.0, -2.0])
        with pytest.raises(ConfigError):
            uniform_test(data, SIGN, gamma=0.5)
        with pytest.raises(ConfigError):
            uniform_test(data, SIGN, gamma=1.0, alpha=1.5)
        with pytest.raises(ConfigError):
            uniform_test(data, SIGN, gamma=1.0, x0=0.0)

    def test_result_consistency_enforced(self):
        with pytest.raises(ConfigError):
            Result(kind="uniform", reject=True, crossing_ranks=(),
                       max_margin=-1.0, statistic=0.0, critical_value=None,
                       gamma=1.0, alpha=0.05, x0=1.0, score_spec="sign",
                       starred=False, n=3)


class TestFixedExamples:
    def test_ten_positives_meet_binomial_critical(self):
        res = fixed_test(all_positive(10), SIGN, gamma=1.0, alpha=0.05)
        assert res.statistic == 10.0
        assert res.critical_value == 9.0
        assert res.reject
        assert res.crossing_ranks == (10,)
        assert res.x0 is None

    def test_eight_positives_fall_short(self):
        y = np.arange(1.0, 11.0)
        y[:2] *= -1.0
        res = fixed_test(PairDifferences(y), SIGN, gamma=1.0, alpha=0.05)
        assert res.statistic == 8.0
        assert not res.reject
        assert res.crossing_ranks == ()

    def test_unreachable_alpha(self):
        res = fixed_test(all_positive(10), SIGN, gamma=1.0, alpha=1e-12)
        assert res.critical_value == 11.0
        assert not res.reject

    def test_default_method_dispatch(self):
        assert default_fixed_method(SIGN) == "exact_sign"
        assert default_fixed_method(WILCOXON) == "normal_approx"
        res = fixed_test(all_positive(6), WILCOXON, gamma=1.0)
        assert res.critical_value == pytest.approx(
            0.5 * (21.0 / 7.0)
            + 1.6448536269514722 * math.sqrt(0.25 * np.square(
                np.arange(1.0, 7.0) / 7.0).sum()))

    def test_exact_sign_with_nonunit_scores_rejected(self):
        with pytest.raises(ConfigError):
            fixed_test(all_positive(5), WILCOXON, gamma=1.0,
                       method="exact_sign")

    def test_ties_use_averaged_scores(self):
        res = fixed_test(PairDifferences([1.0, -1.0, 2.0]), WILCOXON, 1.0)
        assert res.starred
        # c* = (3/8, 3/8, 3/4); positives are ranks 1 and 3
        assert_allclose(res.statistic, 0.375 + 0.75, rtol=1e-15)

    def test_degenerate_all_zeros(self):
        res = fixed_test(PairDifferences([0.0, 0.0]), SIGN, 1.0)
        assert res.degenerate and not res.reject


class TestGammaGrid:
    def test_geometric_default(self):
        grid = default_gamma_grid()
        assert grid[0] == 1.0 and grid[-1] == 100.0
        assert grid.size == 400
        ratios = grid[1:] / grid[:-1]
        assert_allclose(ratios, ratios[0], rtol=1e-10)

    def test_validation(self):
        with pytest.raises(ConfigError):
            default_gamma_grid(gamma_max=1.0)
        with pytest.raises(ConfigError):
            default_gamma_grid(points=1)


class TestGammaThreshold:
    def test_fixed_sign_has_closed_form_threshold(self):
        # all 30 pairs positive: reject iff rho^30 <= alpha, so the
        # threshold is rho*/(1-rho*) with rho* = alpha^(1/30)
        rho_star = 0.05 ** (1.0 / 30.0)
        want = rho_star / (1.0 - rho_star)
        out = gamma_threshold(all_positive(30), SIGN, test_kind="fixed",
                              bisect_tol=1e-4)
        assert out.rejects_at_one and not out.at_cap
        assert out.monotone_ok
        assert abs(out.gamma_hat - want) < 1e-3
        lo, hi = out.bracket
        assert hi - lo <= 1e-4 and lo == out.gamma_hat

    def test_uniform_threshold_replays(self):
        data = all_positive(30)
        out = gamma_threshold(data, SIGN, test_kind="uniform")
        assert out.rejects_at_one
        assert uniform_test(data, SIGN, out.gamma_hat).reject
        lo, hi = out.bracket
        assert hi - lo <= 0.01
        assert not uniform_test(data, SIGN, hi).reject
        # grid decisions match fresh single tests
        for i in (0, 50, 399):
            fresh = uniform_test(data, SIGN, float(out.grid[i])).reject
            assert bool(out.decisions[i]) == fresh

    def test_never_rejecting_data_gives_zero_sentinel(self):
        out = gamma_threshold(PairDifferences([-1.0, -2.0, -3.0]), SIGN)
        assert not out.rejects_at_one
        assert out.gamma_hat == 0.0
        assert out.bracket is None

    def test_cap_flag(self):
        # tiny grid cap forces the all-reject branch
        data = all_positive(40)
        grid = np.array([1.0, 1.01, 1.02])
        out = gamma_threshold(data, SIGN, grid=grid)
        assert out.at_cap
        assert out.gamma_hat == 1.02
        assert out.bracket is None

    def test_grid_validation(self):
        data = all_positive(5)
        with pytest.raises(ConfigError):
            gamma_threshold(data, SIGN, grid=np.array([0.5, 2.0]))
        with pytest.raises(ConfigError):
            gamma_threshold(data, SIGN, grid=np.array([2.0, 1.5]))
        with pytest.raises(ConfigError):
            gamma_threshold(data, SIGN, grid=np.array([1.0]))
        with pytest.raises(ConfigError):
            gamma_threshold(data, SIGN, test_kind="sequential")
        with pytest.raises(ConfigError):
            gamma_threshold(data, SIGN, bisect_tol=0.0)

    def test_degenerate_data(self):
        out = gamma_threshold(PairDifferences([0.0, 0.0]), SIGN)
        assert out.gamma_hat == 0.0 and not out.rejects_at_one


class TestUniformCanBeLessSensitive:
    def test_small_magnitude_negatives_leave_top_window_clean(self):
        # 900 positives pushed away from zero, 100 negatives squeezed
        # into (-0.2, 0): every top-magnitude window is purely positive,
        # so the walk test keeps rejecting at any Gamma the grid reaches,
        # while the full-sample sign statistic (900 of 1000) caps out
        # near Gamma ~ 8.
        rng = np.random.default_rng(7)
        y = np.concatenate([
            rng.exponential(size=900) + 0.2,
            -0.2 * rng.random(100),
        ])
        data = PairDifferences(y)
        uni = gamma_threshold(data, SIGN, test_kind="uniform")
        fix = gamma_threshold(data, SIGN, test_kind="fixed")
        assert uni.at_cap
        assert uni.gamma_hat == 100.0
        assert 5.0 < fix.gamma_hat < 12.0
        assert uni.gamma_hat >= fix.gamma_hat - 0.01
