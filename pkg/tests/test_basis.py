"""Special functions against mpmath as an independent oracle."""

from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st
from mpmath import mp, mpc, mpf

from exact_stirling import basis
from exact_stirling.precision import PrecisionPolicy, working_precision


def close(a, b, digits):
    return abs(a - b) <= mpf(10) ** (-digits) * max(1, abs(b))


@pytest.mark.parametrize("n", [2, 4, 6, 8, 10, 20, 40, 60])
def test_bernoulli_against_mpmath(n):
    b = basis.bernoulli(n)
    with working_precision(60):
        assert close(mpf(b.numerator) / b.denominator, mpmath.bernoulli(n), 55)


def test_bernoulli_rejects_odd():
    with pytest.raises(ValueError):
        basis.bernoulli(3)


@pytest.mark.parametrize("k", [1, 2, 3, 7, 15])
def test_cosecant_numbers_are_zeta_values(k):
    c = basis.cosecant_one(k)
    with working_precision(50):
        assert close(mpf(c.numerator) / c.denominator, -2 * mpmath.zeta(2 * k) / mp.pi ** (2 * k), 45)


def test_reciprocal_log_numbers():
    # Gregory coefficients 1/2, -1/12, 1/24, -19/720, 3/160
    want = [Fraction(1, 2), Fraction(-1, 12), Fraction(1, 24), Fraction(-19, 720), Fraction(3, 160)]
    assert [basis.reciprocal_log(k) for k in range(1, 6)] == want


@pytest.mark.parametrize("s,q", [(3, 1), (mpc(2.5, 7), 3), (mpc(0.75, -20), 1), (13, 1001)])
def test_hurwitz_zeta(s, q):
    with working_precision(50):
        assert close(basis.hurwitz_zeta_mp(s, q), mpmath.zeta(s, q), 45)


@settings(max_examples=25, deadline=None)
@given(st.floats(0.6, 8), st.floats(-60, 60))
def test_log_gamma_matches_mpmath(x, y):
    with working_precision(40):
        s = mpc(x, y)
        assert close(basis.log_gamma_mp(s), mpmath.loggamma(s), 35)


@pytest.mark.parametrize("a,x", [(mpf(-3), mpc(2, 5)), (mpf("0.5"), mpc(1, -1)), (mpf(4), mpc(30, 2)),
                                 (mpf(-7), mpc(0.5, 3))])
def test_incomplete_gamma(a, x):
    with working_precision(40):
        got = basis.scaled_upper_gamma_mp(a, x) * mpmath.exp(-x)
        assert close(got, mpmath.gammainc(a, x), 33)


def test_coth_minus_reciprocal_small_argument():
    with working_precision(40):
        x = mpf("1e-30")
        # coth x - 1/x = x/3 - x^3/45 + ...
        assert close(basis.coth_minus_reciprocal_mp(x), x / 3, 35)
        assert close(basis.coth_minus_reciprocal_mp(mpf(2)), mpmath.coth(2) - mpf(1) / 2, 38)


def test_euler_constant_integral():
    v = basis.euler_gamma_integral(PrecisionPolicy(35, 15))
    with working_precision(50):
        assert close(v.re, mp.euler, 33)


def test_erf_multiplier_profile():
    with working_precision(30):
        assert abs(basis.erf_multiplier(mp.pi / 2, 3, 1) - mpf(1) / 2) < mpf(10) ** -28
        assert basis.erf_multiplier(mp.pi, 3, 1) > mpf("0.999")
        assert basis.erf_multiplier(0, 3, 1) < mpf("0.001")
        assert basis.erf_multiplier(-mp.pi, 3, -1) > mpf("0.999")
    with pytest.raises(ValueError):
        basis.erf_multiplier(0, 3, 0)
