from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st
from mpmath import mp, mpf

from exact_stirling import evaluator
from exact_stirling.errors import DomainError, PoleAtNonPositiveInteger
from exact_stirling.evaluator import Method, evaluate, ln_gamma_reference
from exact_stirling.precision import HPComplex, PrecisionPolicy, matching_digits, working_precision
from exact_stirling.sectors import PolarArg


@settings(max_examples=40, deadline=None)
@given(st.fractions(min_value=Fraction(1, 50), max_value=40, max_denominator=50),
       st.fractions(min_value=-1, max_value=1, max_denominator=36))
def test_reference_matches_mpmath(modz, theta):
    z = PolarArg(modz, theta)
    got = ln_gamma_reference(z, PrecisionPolicy(30, 10))
    with working_precision(50):
        want = HPComplex.of(mpmath.loggamma(z.z_mp()), 50)
    assert matching_digits(got, want) > 28 or abs(got - want) < mpf(10) ** -30


def test_reference_rejects_poles():
    with working_precision(30):
        with pytest.raises(PoleAtNonPositiveInteger):
            evaluator.ln_gamma_reference_mp(mpf(-3))


def test_method_parse():
    assert Method.parse("mb") is Method.MB
    assert Method.parse("IncGamma") is Method.INCGAMMA
    with pytest.raises(DomainError):
        Method.parse("laplace")


def test_incgamma_only_in_primary_sector():
    with pytest.raises(DomainError):
        evaluate(PolarArg(3, Fraction(2, 3)), 3, Method.INCGAMMA)
    with pytest.raises(DomainError):
        evaluate(PolarArg(3), 0)


def test_guard_digits_cover_cancellation():
    # TS_50 at z = 3 is about 6e25, so the total needs 26 extra digits
    z = PolarArg(3)
    assert evaluator.cancellation_digits(z, 50) == 26
    r = evaluate(z, 50, Method.BOREL, PrecisionPolicy(20, 10, series_limit=200))
    assert r.precision_used == 30 + 26


def test_reference_method_breakdown():
    r = evaluate(PolarArg(2), 3, Method.REFERENCE, PrecisionPolicy(25, 10))
    with working_precision(40):
        assert abs(r.total.to_mpc()) < mpf(10) ** -30  # ln Gamma(2) = 0


def test_mb_on_line_reports_midpoint():
    # phase 3 pi/2: the two one-sided limits differ by 2 pi i and the midpoint is taken
    z = PolarArg(Fraction(9, 10), Fraction(1, 2), 3)
    r = evaluate(z, 3, Method.MB, PrecisionPolicy(20, 10))
    assert r.line_valued
    assert r.extras["jump_multiple"] == 1
    a, b = r.raw_totals
    with working_precision(40):
        assert abs((a.to_mpc() + b.to_mpc()) / 2 - r.total.to_mpc()) < mpf(10) ** -25
    # on this sheet the real part sits one multiple of 2 pi |z|^3 below the principal value
    ref = ln_gamma_reference(z, PrecisionPolicy(25, 10))
    with working_precision(40):
        shift = (ref.re - r.total.re) / (2 * mp.pi * mpf(729) / 1000)
        assert abs(shift - 1) < mpf(10) ** -19
    # the line value is the conjugate of the one at theta = -pi/2, whose two limits coincide
    mirror = evaluate(z.conjugate(), 3, Method.MB, PrecisionPolicy(20, 10))
    assert mirror.extras["jump_multiple"] == 0
    assert matching_digits(mirror.total.conjugate(), r.total) > 19


def test_n_opt():
    assert evaluator.n_opt_estimate(3) == 9
    assert evaluator.n_opt_estimate(Fraction(1, 10)) == 1
    assert not evaluator.has_optimal_truncation(Fraction(1, 10))
    assert evaluator.has_optimal_truncation(1)


def test_hurst_series():
    partial = evaluator.hurst_gamma_partial(10, PrecisionPolicy(30, 10))
    full = evaluator.hurst_gamma_accelerated(30, PrecisionPolicy(40, 10))
    with working_precision(60):
        assert abs(full.re - mp.euler) < mpf(10) ** -38
        # the plain partial sum converges only logarithmically
        assert abs(partial.re - mp.euler) > mpf(10) ** -6


def test_digamma_difference_order():
    z = PolarArg(3)
    policy = PrecisionPolicy(30, 10)
    psi = evaluator.digamma(z, 5, policy.with_limit(None)).total
    e1 = abs(evaluator.reference_digamma_difference(z, policy, Fraction(1, 1000)) - psi)
    e2 = abs(evaluator.reference_digamma_difference(z, policy, Fraction(1, 10000)) - psi)
    with working_precision(30):
        ratio = e1 / e2
    # central differences: ten times smaller step, a hundred times smaller error
    assert 80 < ratio < 120


def test_stokes_step_records():
    recs = evaluator.stokes_step_experiment(3, [Fraction(-1, 1000)], 10,
                                            PrecisionPolicy(25, 15, series_limit=None))
    rec = recs[0]
    assert rec.sector_M == 0
    assert rec.passed
    assert abs(rec.erf_multiplier - mpf(1) / 2) < mpf("0.01")
    with pytest.raises(DomainError):
        evaluator.stokes_step_experiment(3, [0])
