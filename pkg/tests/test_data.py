"""Ranking by absolute value, tie groups, tie-averaged scores, CSV input."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from sensrank.data import (PairDifferences, digest, load_csv, rank_by_abs,
                           tie_averaged_scores)
from sensrank.errors import InputError
from sensrank.scores import ScoreFunction, rank_scores

WILCOXON = ScoreFunction("wilcoxon")


class TestPairDifferences:
    def test_basic(self):
        d = PairDifferences([1.5, -2.0, 0.0])
        assert d.n == 3
        assert d.y.dtype == np.float64

    @pytest.mark.parametrize("bad", [
        [], [[1.0, 2.0]], [1.0, np.nan], [np.inf, 1.0],
    ])
    def test_rejects_bad_input(self, bad):
        with pytest.raises(InputError):
            PairDifferences(bad)


class TestRankByAbs:
    def test_orders_by_magnitude(self):
        r = rank_by_abs(PairDifferences([-3.0, 1.0, -2.0]))
        assert_allclose(r.abs_sorted_values, [1.0, 2.0, 3.0])
        assert list(r.signs) == [1, 0, 0]
        assert not r.has_ties
        assert r.n_groups == 3

    def test_tie_groups(self):
        # magnitudes 1,1,2,2,2,3: groups {1,2}, {3,4,5}, {6}
        r = rank_by_abs(PairDifferences([1.0, -1.0, 2.0, 2.0, -2.0, 3.0]))
        assert r.has_ties
        assert list(r.group_size) == [2, 3, 1]
        assert list(r.group_start) == [1, 3, 6]
        assert list(r.group_min) == [1, 1, 3, 3, 3, 6]
        assert r.tie_group_of(4) == range(3, 6)
        assert r.tie_group_of(6) == range(6, 7)

    def test_zeros_form_own_group_with_sign_zero(self):
        r = rank_by_abs(PairDifferences([0.0, 0.0, -1.0, 2.0]))
        assert r.zero_count == 2
        assert list(r.signs[:2]) == [0, 0]
        assert list(r.group_size) == [2, 1, 1]

    def test_drop_zeros(self):
        r = rank_by_abs(PairDifferences([0.0, -1.0, 0.0]), drop_zeros=True)
        assert r.n == 1
        assert r.zero_count == 0
        with pytest.raises(InputError):
            rank_by_abs(PairDifferences([0.0, 0.0]), drop_zeros=True)

    def test_tie_tolerance_chains_close_values(self):
        y = [1.0, 1.005, 2.0]
        exact = rank_by_abs(PairDifferences(y))
        loose = rank_by_abs(PairDifferences(y), tie_tol=0.01)
        assert not exact.has_ties
        assert loose.has_ties
        assert list(loose.group_size) == [2, 1]

    def test_stable_for_equal_magnitudes(self):
        # equal |y| keep input order: the +1.0 entered first stays first
        r = rank_by_abs(PairDifferences([1.0, -1.0]))
        assert list(r.signs) == [1, 0]

    @given(st.lists(st.floats(min_value=-50, max_value=50,
                              allow_nan=False), min_size=1, max_size=30))
    @settings(max_examples=150, deadline=None)
    def test_sorted_and_consistent(self, ys):
        r = rank_by_abs(PairDifferences(ys))
        assert np.all(np.diff(r.abs_sorted_values) >= 0.0)
        assert r.group_id.max() + 1 == r.n_groups
        assert int(r.group_size.sum()) == r.n
        # group boundaries coincide exactly with value changes
        for g in range(r.n_groups):
            start = int(r.group_start[g]) - 1
            size = int(r.group_size[g])
            vals = r.abs_sorted_values[start:start + size]
            assert np.all(vals == vals[0])


class TestTieAveragedScores:
    def test_plain_scores_without_ties(self):
        r = rank_by_abs(PairDifferences([1.0, -2.0, 3.0]))
        c_star = tie_averaged_scores(r, WILCOXON).c_star
        assert_allclose(c_star, rank_scores(WILCOXON, 3), rtol=0)

    def test_averages_within_groups(self):
        # |y| = 1,1,2: c = (1/4, 2/4, 3/4), group {1,2} averages to 3/8
        r = rank_by_abs(PairDifferences([1.0, -1.0, 2.0]))
        c_star = tie_averaged_scores(r, WILCOXON).c_star
        assert_allclose(c_star, [0.375, 0.375, 0.75], rtol=1e-15)

    @pytest.mark.parametrize("kind", ["sign", "wilcoxon", "normal",
                                      "redescending"])
    def test_total_is_preserved(self, kind):
        score = ScoreFunction(kind)
        rng = np.random.default_rng(5)
        y = np.round(rng.normal(size=60), 1)
        r = rank_by_abs(PairDifferences(y))
        c = rank_scores(score, r.n)
        c_star = tie_averaged_scores(r, score).c_star
        assert_allclose(c_star.sum(), c.sum(), rtol=1e-13)

    def test_constant_within_group(self):
        rng = np.random.default_rng(11)
        y = np.round(rng.normal(size=80), 1)
        r = rank_by_abs(PairDifferences(y))
        c_star = tie_averaged_scores(r, WILCOXON).c_star
        for g in range(r.n_groups):
            start = int(r.group_start[g]) - 1
            size = int(r.group_size[g])
            assert np.all(c_star[start:start + size]
                          == c_star[start])

    def test_sign_score_stays_all_ones(self):
        r = rank_by_abs(PairDifferences([1.0, -1.0, 1.0, 2.0]))
        c_star = tie_averaged_scores(r, ScoreFunction("sign")).c_star
        assert_allclose(c_star, 1.0, rtol=0)


class TestLoadCsv:
    def test_single_column(self, tmp_path):
        p = tmp_path / "d.csv"
        p.write_text("y\n1.5\n-2\n0\n")
        d = load_csv(p)
        assert_allclose(d.y, [1.5, -2.0, 0.0])

    def test_treated_control(self, tmp_path):
        p = tmp_path / "d.csv"
        p.write_text("treated,control,site\n3,1,a\n2,5,b\n")
        d = load_csv(p)
        assert_allclose(d.y, [2.0, -3.0])

    def test_y_wins_over_pair(self, tmp_path):
        p = tmp_path / "d.csv"
        p.write_text("y,treated,control\n7,1,2\n")
        assert_allclose(load_csv(p).y, [7.0])

    def test_header_whitespace_tolerated(self, tmp_path):
        p = tmp_path / "d.csv"
        p.write_text(" y \n4\n")
        # DictReader keys keep the raw header; names are matched stripped
        assert load_csv(p).n == 1

    @pytest.mark.parametrize("text,fragment", [
        ("a,b\n1,2\n", "need column"),
        ("y\n", "no data rows"),
        ("y\nabc\n", "bad numeric value in line 2"),
        ("treated,control\n1,\n", "bad numeric value"),
        ("", "header row"),
    ])
    def test_errors_name_the_problem(self, tmp_path, text, fragment):
        p = tmp_path / "d.csv"
        p.write_text(text)
        with pytest.raises(InputError, match=fragment):
            load_csv(p)

    def test_missing_file(self, tmp_path):
        with pytest.raises(InputError, match="cannot open"):
            load_csv(tmp_path / "nope.csv")


class TestDigest:
    def test_counts(self):
        r = rank_by_abs(PairDifferences([0.0, 1.0, 1.0, 2.0, 2.0, 2.0, 5.0]))
        assert digest(r) == {"n": 7, "tie_groups": 2, "tied_values": 5,
                             "zero_count": 1}

    def test_no_ties(self):
        r = rank_by_abs(PairDifferences([1.0, 2.0]))
        assert digest(r) == {"n": 2, "tie_groups": 0, "tied_values": 0,
                             "zero_count": 0}
