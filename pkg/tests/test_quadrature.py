"""Adaptive Simpson integration against closed forms and scipy.quad."""

import math

import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy import integrate

from sensrank._quadrature import adaptive_simpson
from sensrank.errors import NumericError


class TestClosedForms:
    def test_polynomial_is_exact(self):
        # Simpson integrates cubics exactly, adaptivity aside.
        val = adaptive_simpson(lambda t: t ** 3 - 2.0 * t + 1.0, 0.0, 2.0)
        assert_allclose(val, 2.0 ** 4 / 4.0 - 4.0 + 2.0, rtol=1e-14)

    def test_exponential(self):
        val = adaptive_simpson(math.exp, 0.0, 1.0, abs_tol=1e-12)
        assert_allclose(val, math.e - 1.0, rtol=1e-11)

    def test_sine_over_half_period(self):
        val = adaptive_simpson(math.sin, 0.0, math.pi, abs_tol=1e-12)
        assert_allclose(val, 2.0, rtol=1e-11)

    def test_empty_interval(self):
        assert adaptive_simpson(math.exp, 1.0, 1.0) == 0.0

    def test_linearity_in_interval_split(self):
        f = lambda t: 1.0 / (1.0 + t * t)
        kw = dict(abs_tol=1e-12, rel_tol=1e-12)
        whole = adaptive_simpson(f, 0.0, 4.0, **kw)
        parts = (adaptive_simpson(f, 0.0, 1.5, **kw)
                 + adaptive_simpson(f, 1.5, 4.0, **kw))
        assert_allclose(whole, parts, rtol=1e-10)
        assert_allclose(whole, math.atan(4.0), rtol=1e-10)


class TestAgainstScipyQuad:
    @pytest.mark.parametrize("f,a,b", [
        (lambda t: math.exp(-t * t), 0.0, 3.0),
        (lambda t: math.sqrt(t) * math.log1p(t), 0.0, 1.0),
        (lambda t: 1.0 / (0.01 + (t - 0.7) ** 2), 0.0, 1.0),
        (lambda t: t ** 19 * (1.0 - t), 0.0, 1.0),
    ])
    def test_matches_quad(self, f, a, b):
        want, err = integrate.quad(f, a, b, epsabs=1e-13, epsrel=1e-13)
        got = adaptive_simpson(f, a, b, abs_tol=1e-11)
        assert_allclose(got, want, rtol=1e-9, atol=max(1e-11, 10 * err))

    def test_sharp_peak_needs_adaptivity(self):
        # Width-1e-3 bump at the first Simpson midpoint: the coarse
        # estimate is off by orders of magnitude (it sees only the peak
        # value), so only subdivision can recover the true area.
        f = lambda t: math.exp(-((t - 0.5) / 1e-3) ** 2)
        want, _ = integrate.quad(f, 0.0, 1.0, points=[0.5],
                                 epsabs=1e-15, epsrel=1e-13)
        got = adaptive_simpson(f, 0.0, 1.0, abs_tol=1e-13, rel_tol=1e-10)
        assert_allclose(got, want, rtol=1e-7)


class TestControls:
    def test_oscillatory_integrand_at_tight_tolerance(self):
        f = lambda t: math.sin(37.0 * t) ** 2
        want = 0.5 - math.sin(74.0) / 148.0
        tight = adaptive_simpson(f, 0.0, 1.0, abs_tol=1e-12, rel_tol=1e-12)
        assert_allclose(tight, want, atol=1e-10)

    def test_depth_exhaustion_raises(self):
        # A discontinuity the subdivision can never resolve at tiny tol.
        f = lambda t: 0.0 if t < 1.0 / math.pi else 1.0
        with pytest.raises(NumericError):
            adaptive_simpson(f, 0.0, 1.0, abs_tol=1e-300, rel_tol=0.0,
                             max_depth=12)

    def test_reversed_endpoints_rejected(self):
        with pytest.raises(ValueError):
            adaptive_simpson(math.exp, 1.75, 0.25)

    def test_handles_integrand_returning_numpy_scalar(self):
        f = lambda t: np.float64(t) * np.float64(2.0)
        assert_allclose(adaptive_simpson(f, 0.0, 1.0), 1.0, rtol=1e-12)
