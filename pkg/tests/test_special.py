import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import special as sp

from besselhit.errors import DomainError
from besselhit.special import (
    GAMMA_MAX_ARG,
    I_CROSSOVER,
    bessel_i,
    bessel_ie,
    bessel_k,
    bessel_ke,
    erf,
    gamma,
    lgamma,
)


def k_half(k, z):
    """K_{k+1/2}(z) from the finite closed form."""
    s = sum(math.factorial(k + j) / (math.factorial(j) * math.factorial(k - j) * (2 * z) ** j)
            for j in range(k + 1))
    return math.sqrt(math.pi / (2 * z)) * math.exp(-z) * s


def i_half(k, z):
    """I_{k+1/2}(z) for k = 0, 1, 2."""
    c = math.sqrt(2 / (math.pi * z))
    sh, ch = math.sinh(z), math.cosh(z)
    if k == 0:
        return c * sh
    if k == 1:
        return c * (ch - sh / z)
    return c * ((1 + 3 / z**2) * sh - 3 * ch / z)


class TestGamma:
    def test_examples(self):
        assert gamma(1.0) == 1.0
        assert gamma(5.0) == pytest.approx(24.0, rel=1e-15)
        assert gamma(1.5) == pytest.approx(math.sqrt(math.pi) / 2, rel=1e-15)

    @pytest.mark.parametrize("x", np.geomspace(1e-3, 170, 60))
    def test_against_scipy(self, x):
        assert gamma(x) == pytest.approx(sp.gamma(x), rel=1e-13)

    def test_lgamma_matches_log_gamma(self):
        for x in (0.01, 0.5, 3.3, 100.0, 1e5):
            assert lgamma(x) == pytest.approx(sp.gammaln(x), rel=1e-14, abs=1e-14)

    @pytest.mark.parametrize("x", [0.0, -1.0, -0.5])
    def test_domain(self, x):
        with pytest.raises(DomainError):
            gamma(x)
        with pytest.raises(DomainError):
            lgamma(x)

    def test_overflow_signalled(self):
        assert math.isfinite(gamma(GAMMA_MAX_ARG - 1e-9))
        with pytest.raises(OverflowError):
            gamma(172.0)


class TestErf:
    def test_examples(self):
        assert erf(0.0) == 0.0
        assert abs(erf(10.0) - 1.0) <= 1e-15

    def test_maclaurin_oracle(self):
        x = 0.2236068
        series = 2 / math.sqrt(math.pi) * sum(
            (-1) ** n * x ** (2 * n + 1) / (math.factorial(n) * (2 * n + 1)) for n in range(30)
        )
        assert abs(erf(x) - series) <= 1e-14
        # 2 * 0.12408518..., the nu = 1/2 tail at (a=2, b=1, t=10)
        assert erf(x) == pytest.approx(0.2481704, abs=1e-7)

    @given(st.floats(-6, 6))
    def test_odd(self, x):
        assert erf(-x) == -erf(x)


class TestBesselI:
    def test_small_argument(self):
        assert bessel_i(0.0, 1e-12).value == pytest.approx(1.0, rel=1e-15)

    def test_half_integer_example(self):
        r = bessel_i(0.5, 1.0)
        assert r.value == pytest.approx(math.sqrt(2 / math.pi) * math.sinh(1.0), rel=1e-14)
        assert r.value == pytest.approx(0.9376748882, abs=1e-10)
        assert r.terms_used >= 1
        assert 0.0 <= r.trunc_bound <= 1e-12 * r.value

    @pytest.mark.parametrize("k", [0, 1, 2])
    @pytest.mark.parametrize("z", [0.1, 0.7, 3.0, 12.0, 29.0, 45.0])
    def test_half_integer_family(self, k, z):
        assert bessel_i(k + 0.5, z).value == pytest.approx(i_half(k, z), rel=1e-10)

    @pytest.mark.parametrize("nu", [0.0, 0.3, 1.0, 2.5, 7.0])
    @pytest.mark.parametrize("z", [0.05, 1.0, 8.0, 25.0, 60.0, 300.0])
    def test_against_scipy(self, nu, z):
        assert bessel_i(nu, z).value == pytest.approx(sp.iv(nu, z), rel=1e-12)
        assert bessel_ie(nu, z) == pytest.approx(sp.ive(nu, z), rel=1e-12)

    def test_series_lower_bound_and_bound(self):
        # the partial sum stops below the true value and the bound covers the gap
        for nu, z in ((0.0, 5.0), (1.5, 20.0), (3.0, 0.4)):
            r = bessel_i(nu, z, crossover=1e9)
            exact = sp.iv(nu, z)
            assert r.value <= exact * (1 + 1e-15)
            assert exact - r.value <= r.trunc_bound + 4e-16 * exact

    @pytest.mark.parametrize("nu", [0.0, 0.5, 1.0, 2.0, 3.0])
    def test_regimes_overlap_at_crossover(self, nu):
        for z in (I_CROSSOVER, I_CROSSOVER + 5.0, I_CROSSOVER + 20.0):
            series = bessel_i(nu, z, crossover=1e9).value
            asym = bessel_i(nu, z, crossover=0.0).value
            assert asym == pytest.approx(series, rel=1e-10)

    @pytest.mark.parametrize("nu,z", [(-0.5, 1.0), (1.0, 0.0), (1.0, -2.0)])
    def test_domain(self, nu, z):
        with pytest.raises(DomainError):
            bessel_i(nu, z)


class TestBesselK:
    def test_examples(self):
        assert bessel_k(0.5, 1.0) == pytest.approx(0.4610685044, abs=1e-10)
        assert bessel_k(-0.5, 1.0) == bessel_k(0.5, 1.0)
        assert bessel_k(1.5, 2.0) == pytest.approx(0.1799066579, abs=1e-10)

    @pytest.mark.parametrize("k", [0, 1, 2])
    @pytest.mark.parametrize("z", [0.01, 0.5, 1.9, 2.1, 10.0, 80.0])
    def test_half_integer_family(self, k, z):
        assert bessel_k(k + 0.5, z) == pytest.approx(k_half(k, z), rel=1e-10)

    @pytest.mark.parametrize("nu", [0.0, 1e-9, 0.2, 0.5, 1.0, 1.0 + 1e-7, 2.0, 3.7, 10.0, -2.3])
    @pytest.mark.parametrize("z", [1e-3, 0.3, 1.99, 2.0, 5.0, 40.0, 600.0])
    def test_against_scipy(self, nu, z):
        assert bessel_k(nu, z) == pytest.approx(sp.kv(nu, z), rel=1e-10)
        assert bessel_ke(nu, z) == pytest.approx(sp.kve(nu, z), rel=1e-10)

    def test_scaled_survives_underflow(self):
        assert bessel_k(1.0, 800.0) == 0.0
        assert bessel_ke(1.0, 800.0) == pytest.approx(sp.kve(1.0, 800.0), rel=1e-12)

    def test_decreasing_in_z(self):
        for nu in (0.0, 0.5, 2.3):
            vals = [bessel_k(nu, z) for z in np.geomspace(0.01, 50, 80)]
            assert all(x > y > 0 for x, y in zip(vals, vals[1:]))

    def test_domain(self):
        for z in (0.0, -1.0):
            with pytest.raises(DomainError):
                bessel_k(1.0, z)


class TestIdentities:
    @settings(max_examples=200, deadline=None)
    @given(st.floats(0.0, 3.0), st.floats(0.1, 30.0))
    def test_wronskian(self, nu, z):
        w = bessel_i(nu, z).value * bessel_k(nu + 1, z) + bessel_i(nu + 1, z).value * bessel_k(nu, z)
        assert abs(w - 1 / z) <= 1e-9 / z

    @settings(max_examples=200, deadline=None)
    @given(st.floats(-3.0, 3.0), st.floats(0.05, 50.0))
    def test_k_recurrence(self, nu, z):
        lhs = bessel_k(nu + 1, z)
        rhs = bessel_k(nu - 1, z) + 2 * nu / z * bessel_k(nu, z)
        assert lhs == pytest.approx(rhs, rel=1e-9)

    @settings(max_examples=100, deadline=None)
    @given(st.floats(0.0, 5.0), st.floats(1e-3, 200.0))
    def test_positive(self, nu, z):
        assert bessel_i(nu, z).value > 0
        assert bessel_k(nu, z) > 0
