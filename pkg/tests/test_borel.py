"""Borel-summed forms: printed values, oracles and invariants."""

import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st
from mpmath import mp

from exact_stirling import borel
from exact_stirling.borel import Route
from exact_stirling.errors import DomainError
from exact_stirling.evaluator import Method, evaluate
from exact_stirling.precision import HPComplex, PrecisionPolicy, matching_digits, working_precision
from exact_stirling.sectors import PolarArg

P40 = PrecisionPolicy(40, 20)


def hp(re, im="0"):
    return HPComplex.from_strings(re, im)


def tail_digits(value, tail):
    """Digits the cutoff tail leaves in a value."""
    if tail == 0:
        return math.inf
    return float(-mpmath.log10(tail / abs(value)))


def oracle_loggamma(arg, digits=60):
    with working_precision(digits):
        return HPComplex.of(mpmath.loggamma(arg.w_mp()), digits)


# printed leading terms and truncated sums

@pytest.mark.parametrize("z,want", [
    (PolarArg(3), "0.66546925487494697026844282871193190148012386819465"),
    (PolarArg(Fraction(1, 10)), "1.73997257040229101538752631827936332290183806908929"),
])
def test_stirling_F_printed(z, want):
    assert matching_digits(borel.stirling_F(z, PrecisionPolicy(55, 10)), hp(want)) > 49


def test_stirling_F_at_one():
    with working_precision(60):
        want = HPComplex.of(-1 + mpmath.log(2 * mp.pi) / 2, 60)
    assert matching_digits(borel.stirling_F(PolarArg(1), P40), want) > 45


@pytest.mark.parametrize("z,N,want", [
    (PolarArg(3), 2, "0.02777777777777777777777777777777777777777777777777"),
    (PolarArg(Fraction(1, 10)), 3, "-1.94444444444444444444444444444444444444444444"),
    (PolarArg(5), 1, "0"),
])
def test_truncated_sum_printed(z, N, want):
    got = borel.truncated_sum(z, N, P40)
    if want == "0":
        assert got.is_zero()
    else:
        assert matching_digits(got, hp(want)) > 44


def test_stirling_coefficients_are_rational():
    assert borel.stirling_coefficient(1) == Fraction(1, 12)
    assert borel.stirling_coefficient(2) == Fraction(-1, 360)
    assert borel.stirling_coefficient(3) == Fraction(1, 1260)


# remainders against printed digits; the printed runs summed n up to 10^5

@pytest.mark.parametrize("z,N,want", [
    (PolarArg(3), 2, "-0.0000998520927794385973038298896926468609453577911"),
    (PolarArg(Fraction(1, 10)), 5, "5875.473057541649375261942492788406592113174013182747"),
])
def test_remainder_quadrature_printed(z, N, want):
    # N <= 2 gets ten times the requested cutoff, so ask for the printed 10^5 directly
    limit = 10_000 if N <= 2 else 100_000
    policy = PrecisionPolicy(45, 20)
    got = borel.remainder_sector_quad(z, N, policy, limit=limit)
    tail = borel.tail_bound_mp(z, N, borel.effective_limit(N, limit))
    expected = hp(want)
    # the printed run kept terms up to 10^5 only, so agreement is capped by that tail
    need = min(40, tail_digits(expected.to_mpc(), tail) - 1)
    assert matching_digits(got, expected) >= need


@pytest.mark.parametrize("z,N,want", [
    (PolarArg(3), 3, "3.028565656775362781062293505563582854900697488e-6"),
    (PolarArg(Fraction(1, 10)), 9, "2.948674194748506172595384719922447233767119265136e13"),
])
def test_remainder_incgamma_printed(z, N, want):
    policy = PrecisionPolicy(40, 20, series_limit=2000)
    got = borel.remainder_sector_incgamma(z, N, policy)
    expected = hp(want)
    tail = borel.tail_bound_mp(z, N, 2000)
    need = min(38, tail_digits(expected.to_mpc(), tail) - 1)
    assert need > 8
    assert matching_digits(got, expected) >= need


def test_incgamma_rejects_outside_primary_sector():
    with pytest.raises(DomainError):
        borel.remainder_sector_incgamma(PolarArg(3, Fraction(2, 3)), 3)


@pytest.mark.parametrize("theta", [Fraction(0), Fraction(1, 5), Fraction(-1, 3)])
def test_remainder_routes_agree(theta):
    z = PolarArg(3, theta)
    policy = PrecisionPolicy(30, 15, series_limit=1000)
    a = borel.remainder_sector_incgamma(z, 5, policy)
    b = borel.remainder_sector_quad(z, 5, policy)
    assert matching_digits(a, b) > 28


@pytest.mark.parametrize("z,N,want_im", [
    (PolarArg(3, Fraction(1, 2)), 6, "-1.8907874105339892863379255e-8"),
    (PolarArg(Fraction(1, 10), Fraction(-1, 2)), 3, "-3.09864851659634765254576003084"),
])
def test_line_remainder_printed(z, N, want_im):
    got = borel.remainder_line(z, N, PrecisionPolicy(35, 20, series_limit=100_000))
    assert got.re == 0 or abs(got.re) < mpmath.mpf(10) ** -40
    assert matching_digits(HPComplex(0, got.im, 50), hp("0", want_im)) > min(26, len(want_im) - 6)


def test_remainder_rejects_wrong_region():
    with pytest.raises(DomainError):
        borel.remainder_sector_quad(PolarArg(3, Fraction(1, 2)), 3)
    with pytest.raises(DomainError):
        borel.remainder_line(PolarArg(3, Fraction(1, 3)), 3)
    with pytest.raises(DomainError):
        borel.ln_gamma_borel(PolarArg(3), 0)


# discontinuity terms

def test_sd_values_printed():
    assert borel.sd_sector(PolarArg(3), 0, 1).is_zero()
    v = borel.sd_sector(PolarArg(3, Fraction(2, 3)), 1, 1, P40)
    assert matching_digits(v, hp("-8.13752781094718217957452e-8")) > 23
    v = borel.sd_sector(PolarArg(Fraction(1, 10), Fraction(-3, 4)), 1, -1, P40)
    assert matching_digits(v, hp("0.68679805984095965121150997224", "0.579703018063676729767943942736")) > 28
    assert matching_digits(borel.sd_line(PolarArg(3, Fraction(1, 2)), 0, P40),
                           hp("3.256206078642828367679816468e-9")) > 27
    assert matching_digits(borel.sd_line(PolarArg(Fraction(1, 10), Fraction(1, 2)), 0, P40),
                           hp("0.381235865406433806218304673501")) > 29


def test_sd_line_cubic_middle():
    z = PolarArg(Fraction(9, 10), Fraction(-1, 2), 3)
    with working_precision(60):
        r = mpmath.mpf(729) / 1000
        want = HPComplex.of(-mpmath.log(-mpmath.expm1(-2 * mp.pi * r)) / 2 - 2 * mp.pi * r, 60)
    assert matching_digits(borel.sd_line(z, 1, P40), want) > 45


# totals

def test_total_z3_N10():
    r = evaluate(PolarArg(3), 10, Method.BOREL, PrecisionPolicy(30, 15, series_limit=2000))
    assert matching_digits(r.total, hp("0.69314718055994530941723212145817656807550013436025")) > 28


@settings(max_examples=8, deadline=None)
@given(st.fractions(min_value=-1, max_value=1, max_denominator=24),
       st.sampled_from([Fraction(2), Fraction(5, 2), Fraction(4)]),
       st.integers(2, 7))
def test_total_matches_loggamma_oracle(theta, modz, N):
    z = PolarArg(modz, theta)
    r = evaluate(z, N, Method.BOREL, PrecisionPolicy(20, 10, series_limit=None))
    assert matching_digits(r.total, oracle_loggamma(z)) > 18


@settings(max_examples=6, deadline=None)
@given(st.fractions(min_value=-1, max_value=1, max_denominator=20).filter(lambda t: t.denominator != 2),
       st.integers(2, 6))
def test_conjugate_symmetry(theta, N):
    z = PolarArg(Fraction(5, 2), theta)
    policy = PrecisionPolicy(20, 10, series_limit=500)
    a = borel.ln_gamma_borel(z, N, policy).total
    b = borel.ln_gamma_borel(z.conjugate(), N, policy).total
    assert matching_digits(a.conjugate(), b) > 25


@settings(max_examples=8, deadline=None)
@given(st.fractions(min_value=Fraction(-12, 25), max_value=Fraction(12, 25), max_denominator=25))
def test_primary_sector_sd_is_zero(theta):
    terms = borel.ln_gamma_borel(PolarArg(3, theta), 3, PrecisionPolicy(20, 5, series_limit=200))
    assert terms.SD.is_zero()


@pytest.mark.parametrize("z", [PolarArg(3), PolarArg(Fraction(1, 10)), PolarArg(3, Fraction(1, 5))])
@pytest.mark.parametrize("N", [2, 7])
def test_n_collapse(z, N):
    policy = PrecisionPolicy(25, 15, series_limit=1000)
    r1 = borel.remainder_sector_quad(z, 1, policy, limit=10_000)
    rN = borel.remainder_sector_quad(z, N, policy, limit=10_000)
    ts = borel.truncated_sum(z, N, policy)
    # same cutoff on both sides, so only the N-dependence of the tail remains
    tail = borel.tail_bound_mp(z, 1, 10_000)
    err = abs((ts + rN) - r1)
    assert err <= 2 * tail + mpmath.mpf(10) ** -30 * (1 + abs(ts))


@pytest.mark.parametrize("modz", [3, Fraction(1, 10)])
@pytest.mark.parametrize("sign", [1, -1])
def test_line_phase_split(modz, sign):
    z = PolarArg(modz, Fraction(sign, 2))
    t = borel.ln_gamma_borel(z, 5, PrecisionPolicy(30, 15, series_limit=None))
    assert abs((t.TS + t.remainder).re) < mpmath.mpf(10) ** -28
    assert abs(t.SD.im) < mpmath.mpf(10) ** -28
    assert matching_digits(t.total, oracle_loggamma(z)) > 28


def test_coth_form_matches_quadrature():
    z = PolarArg(3)
    a = borel.remainder_coth_check(z, P40)
    b = borel.remainder_sector_quad(z, 1, P40, limit=None)
    assert matching_digits(a, b) > 38


def test_coth_form_at_one():
    # R_1(1) = ln Gamma(1) - F(1) = 1 - ln(2 pi)/2
    with working_precision(60):
        want = HPComplex.of(1 - mpmath.log(2 * mp.pi) / 2, 60)
    assert matching_digits(borel.remainder_coth_check(PolarArg(1), P40), want) > 38


def test_coth_form_on_line():
    z = PolarArg(2, Fraction(1, 2))
    got = borel.remainder_coth_check(z, PrecisionPolicy(30, 15))
    want = borel.remainder_line(z, 1, PrecisionPolicy(30, 15), limit=None)
    assert matching_digits(got, want) > 27


# digamma

def test_digamma_at_one_is_minus_gamma():
    t = borel.digamma_borel(PolarArg(1), 3, PrecisionPolicy(30, 15, series_limit=None))
    with working_precision(50):
        assert matching_digits(t.total, HPComplex.of(-mp.euler, 50)) > 29


@pytest.mark.parametrize("N", [2, 6, 12])
def test_digamma_matches_difference_of_ln_gamma(N):
    h = Fraction(1, 10 ** 10)
    policy = PrecisionPolicy(40, 20, series_limit=None)
    plus = borel.ln_gamma_borel(PolarArg(3 + h), N, policy).total
    minus = borel.ln_gamma_borel(PolarArg(3 - h), N, policy).total
    diff = (plus - minus) / HPComplex.of(2 * h.numerator / mpmath.mpf(h.denominator), 60)
    psi = borel.digamma_borel(PolarArg(3), N, PrecisionPolicy(25, 15, series_limit=None)).total
    assert matching_digits(psi, diff) >= 8


@pytest.mark.parametrize("theta", [Fraction(2, 3), Fraction(1, 2), Fraction(-5, 6), Fraction(-1, 2)])
def test_digamma_against_oracle(theta):
    z = PolarArg(Fraction(5, 2), theta)
    t = borel.digamma_borel(z, 4, PrecisionPolicy(25, 15, series_limit=None))
    with working_precision(50):
        want = HPComplex.of(mpmath.digamma(z.z_mp()), 50)
    assert matching_digits(t.total, want) > 23


def test_digamma_primary_sd_zero():
    t = borel.digamma_borel(PolarArg(3, Fraction(1, 4)), 3, PrecisionPolicy(20, 10, series_limit=200))
    assert t.SD.is_zero()
