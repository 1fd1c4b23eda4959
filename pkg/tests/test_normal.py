"""Inverse-normal and normal-tail primitives against external oracles."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose
from scipy import special

from sensrank._normal import norm_cdf, norm_isf, norm_pdf, norm_ppf, norm_sf

# Reference quantiles computed with mpmath at 50 digits (erfinv for
# moderate p, log-domain root-finding below 1e-4), rounded to 20
# significant figures.
MPMATH_PPF = {
    0.75: 0.6744897501960817432,
    0.25: -0.6744897501960817432,
    1e-5: -4.2648907939228246285,
    1e-12: -7.0344838253011319298,
    1e-100: -21.273453560965324295,
    1e-200: -30.205594179579643063,
    1e-300: -37.047096299361199237,
}


class TestPpfOracles:
    @pytest.mark.parametrize("p,expected", sorted(MPMATH_PPF.items()))
    def test_frozen_quantiles(self, p, expected):
        assert_allclose(norm_ppf(p), expected, rtol=5e-13)

    @pytest.mark.parametrize("p,expected", sorted(MPMATH_PPF.items()))
    def test_isf_mirror(self, p, expected):
        assert norm_isf(p) == -norm_ppf(p)
        assert_allclose(norm_isf(1.0 - 0.75), norm_ppf(0.75), rtol=1e-14)

    def test_against_scipy_grid(self):
        p = np.concatenate([
            np.linspace(1e-4, 1.0 - 1e-4, 2001),
            np.geomspace(1e-300, 1e-4, 300),
        ])
        assert_allclose(norm_ppf(p), special.ndtri(p), rtol=2e-13, atol=1e-13)

    def test_median_and_endpoints(self):
        assert norm_ppf(0.5) == 0.0
        assert norm_ppf(0.0) == -math.inf
        assert norm_ppf(1.0) == math.inf
        assert np.isneginf(norm_ppf(np.array([0.0]))[0])

    @pytest.mark.parametrize("bad", [-0.1, 1.1, math.nan])
    def test_domain_errors(self, bad):
        with pytest.raises(ValueError):
            norm_ppf(bad)
        with pytest.raises(ValueError):
            norm_ppf(np.array([0.5, bad]))


class TestTailFunctions:
    def test_cdf_sf_pair(self):
        z = np.linspace(-8.0, 8.0, 641)
        assert_allclose(norm_cdf(z) + norm_sf(z), 1.0, rtol=0, atol=1e-15)
        assert_allclose(norm_sf(z), norm_cdf(-z), rtol=1e-15)

    def test_deep_tail_survival(self):
        # Phi(-37.04...) = 1e-300 from the frozen table, read backwards.
        for p, z in MPMATH_PPF.items():
            if p < 0.5:
                assert_allclose(norm_cdf(z), p, rtol=1e-12)

    def test_pdf_value(self):
        assert_allclose(norm_pdf(0.0), 1.0 / math.sqrt(2.0 * math.pi),
                        rtol=1e-15)
        assert_allclose(norm_pdf(np.array([1.0, -1.0])),
                        math.exp(-0.5) / math.sqrt(2.0 * math.pi),
                        rtol=1e-15)

    def test_scalar_matches_array_path(self):
        # math.erfc and scipy's erfc agree to a few ulps, not exactly.
        for z in (-30.5, -2.0, 0.3, 9.25):
            assert_allclose(norm_cdf(z), norm_cdf(np.array([z]))[0],
                            rtol=5e-13)
            assert_allclose(norm_sf(z), norm_sf(np.array([z]))[0],
                            rtol=5e-13)
            assert_allclose(norm_pdf(z), norm_pdf(np.array([z]))[0],
                            rtol=5e-13)


class TestRoundTrips:
    @given(st.floats(min_value=1e-12, max_value=1.0 - 1e-12))
    @settings(max_examples=300, deadline=None)
    def test_cdf_of_ppf(self, p):
        assert math.isclose(norm_cdf(norm_ppf(p)), p, rel_tol=1e-11)

    @given(st.floats(min_value=-300.0, max_value=-1.0))
    @settings(max_examples=200, deadline=None)
    def test_ppf_of_cdf_log_domain(self, log10_p):
        p = 10.0 ** log10_p
        z = norm_ppf(p)
        assert math.isclose(norm_cdf(z), p, rel_tol=1e-11)

    @given(st.floats(min_value=-8.0, max_value=5.0))
    @settings(max_examples=200, deadline=None)
    def test_ppf_of_cdf(self, z):
        # cdf keeps full precision on the lower side only; above ~5 the
        # value saturates toward 1 and the inverse pair is sf/isf.
        assert math.isclose(norm_ppf(norm_cdf(z)), z, rel_tol=1e-9,
                            abs_tol=1e-9)

    @given(st.floats(min_value=-5.0, max_value=8.0))
    @settings(max_examples=200, deadline=None)
    def test_isf_of_sf(self, z):
        assert math.isclose(norm_isf(norm_sf(z)), z, rel_tol=1e-9,
                            abs_tol=1e-9)

    def test_monotone_on_grid(self):
        p = np.geomspace(1e-280, 0.5, 5000)
        z = norm_ppf(p)
        assert np.all(np.diff(z) > 0.0)
