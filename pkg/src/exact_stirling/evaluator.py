"""Method dispatch, an independent reference for ln Gamma, and the experiments built on them."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import mpmath
from mpmath import mp, mpc, mpf

from . import borel, mb
from .basis import erf_multiplier, hurst_gamma_partial as _hurst_exact
from .errors import DomainError, PoleAtNonPositiveInteger
from .precision import (HPComplex, PrecisionPolicy, magnitude_decimal_digits, matching_digits,
                        to_mpf, working_precision)
from .quadrature import DEFAULT_SCHEME, integrate_mp, tanh_sinh
from .sectors import PolarArg, classify_borel, classify_mb


class Method(enum.Enum):
    BOREL = "Borel"
    MB = "MB"
    INCGAMMA = "IncGamma"
    REFERENCE = "Reference"

    @classmethod
    def parse(cls, text: str) -> "Method":
        for m in cls:
            if m.value.lower() == text.lower() or m.name.lower() == text.lower():
                return m
        raise DomainError(f"unknown method {text!r}")


@dataclass(frozen=True)
class EvalBreakdown:
    method: Method
    terms: object
    total: HPComplex
    tail_bound: mpf
    precision_used: int
    N: int
    limit: int | None
    raw_totals: tuple = ()
    line_valued: bool = False
    extras: dict = field(default_factory=dict, compare=False)


def _hp(v, digits) -> HPComplex:
    v = mpc(v)
    return HPComplex(v.real, v.imag, digits)


# ---------------------------------------------------------------------------
# reference: Binet's arctan integral plus upward recurrence


def _binet_tail_mp(z):
    """2 ∫_0^∞ arctan(t/z) / (e^{2 pi t} - 1) dt for Re z > 0."""
    two_pi = 2 * mp.pi

    def f(t):
        if t == 0:
            return mpc(0)
        return mpmath.atan(t / z) / mpmath.expm1(two_pi * t)

    tol = mpf(10) ** (-mp.dps)
    return 2 * integrate_mp(f, DEFAULT_SCHEME, abs_tol=tol, rel_tol=tol * 1000)


def ln_gamma_reference_mp(z) -> mpc:
    """Principal ln Gamma(z) for any complex z off the poles."""
    z = mpc(z)
    if z.imag == 0 and z.real <= 0 and z.real == int(z.real):
        raise PoleAtNonPositiveInteger(f"Gamma has a pole at {z.real}")
    # keep the arctan branch points t = ±iz well away from the real t-axis
    target = max(2, mp.dps // 10)
    shift = max(0, int(math.ceil(target - float(z.real))))
    u = z + shift
    value = (u - mpf(1) / 2) * mpmath.log(u) - u + mpmath.log(2 * mp.pi) / 2 + _binet_tail_mp(u)
    for j in range(shift):
        value -= mpmath.log(z + j)
    return value


def ln_gamma_reference(z: PolarArg, policy: PrecisionPolicy | None = None) -> HPComplex:
    """Principal-branch ln Gamma(z^p) by Binet's second formula; independent of both engines."""
    policy = policy or PrecisionPolicy()
    with working_precision(policy.working_digits):
        return _hp(ln_gamma_reference_mp(z.w_mp()), policy.working_digits)


# ---------------------------------------------------------------------------
# dispatch


def cancellation_digits(z: PolarArg, N: int) -> int:
    """Digits lost when TS_N (and the remainder cancelling it) exceed the total."""
    with working_precision(20):
        ts = borel.truncated_sum_mp(z, N)
        return magnitude_decimal_digits(ts)


def _with_cancellation(policy: PrecisionPolicy, z: PolarArg, N: int) -> PrecisionPolicy:
    return policy.with_extra_digits(cancellation_digits(z, N))


def _mb_breakdown(z: PolarArg, N: int, policy: PrecisionPolicy) -> EvalBreakdown:
    forms = mb.ln_gamma_mb(z, N, policy)
    digits = policy.working_digits
    line = any(f.on_line for f in forms)
    total = forms[0].total
    extras = {"M": tuple(f.M for f in forms), "totals": tuple(f.total for f in forms)}
    if not line:
        raw = tuple(f.total for f in forms)
    else:
        # raw values: each domain's off-line form taken onto the line, i.e. the
        # one-sided limits; the line forms themselves give the Zwaan-Dingle value
        raw = tuple(f.one_sided_total for f in forms)
        if len(raw) == 2:
            with working_precision(digits):
                a, b = raw[0].to_mpc(), raw[1].to_mpc()
                k = int(mpmath.nint((b - a).imag / (2 * mp.pi)))
                extras["jump_multiple"] = k
                if k != 0:
                    mid = _hp((a + b) / 2, digits)
                    extras["midpoint"] = mid
                    total = mid
    tail = max(f.tail_bound for f in forms)
    return EvalBreakdown(Method.MB, forms, total, tail, digits, N, None, raw, line, extras)


def evaluate(z: PolarArg, N: int, method: Method | str = Method.BOREL,
             policy: PrecisionPolicy | None = None) -> EvalBreakdown:
    """ln Gamma(z^p) by the chosen route, with guard digits raised for the TS/remainder cancellation."""
    policy = policy or PrecisionPolicy()
    if isinstance(method, str):
        method = Method.parse(method)
    if N < 1:
        raise DomainError("N must be at least 1")
    if method is Method.REFERENCE:
        val = ln_gamma_reference(z, policy)
        return EvalBreakdown(method, None, val, mpf(0), policy.working_digits, N, None)
    if method is Method.INCGAMMA and (classify_borel(z).M != 0 or classify_borel(z).on_line):
        raise DomainError("the incomplete-gamma route applies only for |p theta| < pi/2")
    work = _with_cancellation(policy, z, N)
    if method is Method.MB:
        return _mb_breakdown(z, N, work)
    route = borel.Route.INCGAMMA if method is Method.INCGAMMA else borel.Route.AUTO
    terms = borel.ln_gamma_borel(z, N, work, route=route)
    return EvalBreakdown(method, terms, terms.total, terms.tail_bound, work.working_digits, N,
                         terms.limit, (terms.total,), terms.sector.on_line, {"route": terms.route})


def digamma(z: PolarArg, N: int, policy: PrecisionPolicy | None = None,
            compare: bool = False) -> EvalBreakdown:
    """psi(z) from its Borel-summed form; ``compare`` adds a central difference of the reference."""
    policy = policy or PrecisionPolicy()
    work = _with_cancellation(policy, z, N)
    terms = borel.digamma_borel(z, N, work)
    extras = {}
    if compare:
        extras["finite_difference"] = reference_digamma_difference(z, policy)
    return EvalBreakdown(Method.BOREL, terms, terms.total, terms.tail_bound, work.working_digits,
                         N, terms.limit, (terms.total,), terms.sector.on_line, extras)


def reference_digamma_difference(z: PolarArg, policy: PrecisionPolicy | None = None,
                                 step: Fraction = Fraction(1, 10 ** 12)) -> HPComplex:
    """(ln Gamma(z+h) - ln Gamma(z-h)) / 2h from the reference, error O(h^2)."""
    policy = policy or PrecisionPolicy()
    digits = policy.working_digits + 2 * len(str(step.denominator))
    with working_precision(digits):
        w = z.w_mp()
        h = mpf(step.numerator) / step.denominator
        val = (ln_gamma_reference_mp(w + h) - ln_gamma_reference_mp(w - h)) / (2 * h)
        return _hp(val, policy.working_digits)


# ---------------------------------------------------------------------------
# small helpers and experiments


def n_opt_estimate(modulus_effective) -> int:
    """Advisory optimal truncation round(pi |z^p|), never below 1."""
    return max(1, _raw_n_opt(modulus_effective))


def has_optimal_truncation(modulus_effective) -> bool:
    """False when round(pi |z^p|) is 0: the terms grow from the start."""
    return _raw_n_opt(modulus_effective) >= 1


def _raw_n_opt(modulus_effective) -> int:
    with working_precision(30):
        r = to_mpf(modulus_effective)
        if r <= 0:
            raise DomainError("modulus must be positive")
        return int(mpmath.nint(mp.pi * r))


def hurst_gamma_partial(K: int, policy: PrecisionPolicy | None = None) -> HPComplex:
    """sum_{k<=K} (-1)^(k+1) A_k / k, A_k the reciprocal-logarithm numbers."""
    policy = policy or PrecisionPolicy()
    exact = _hurst_exact(K)
    with working_precision(policy.working_digits):
        return HPComplex(mpf(exact.numerator) / exact.denominator, mpf(0), policy.working_digits)


def _gregory_tail_mp(K: int):
    """sum_{k>K} |A_k| / k through |A_k| = ∫_0^∞ dx / ((1+x)^k (ln^2 x + pi^2)).

    Summing under the integral leaves T_K(y) = -ln(1-y) - sum_{k<=K} y^k/k at
    y = 1/(1+x); the half x > 1 is folded onto (0, 1] by x -> 1/x.
    """
    eps = mpf(10) ** (-mp.dps)
    pi2 = mp.pi ** 2

    def series_tail(y, x):
        # x = (1 - y) / y, passed along so -ln(1-y) = ln(1 + 1/x) keeps its digits as y -> 1
        if y == 0:
            return mpf(0)
        if y > mpf(1) / 2:
            return mpmath.log1p(1 / x) - sum(y ** k / k for k in range(1, K + 1))
        term_power = y ** (K + 1)
        total, k = mpf(0), K + 1
        while True:
            term = term_power / k
            total += term
            if term <= eps * total:
                return total
            term_power *= y
            k += 1

    def near(x):
        if x == 0:
            return mpf(0)
        return series_tail(1 / (1 + x), x) / (mpmath.log(x) ** 2 + pi2)

    def far(u):
        if u == 0:
            return mpf(0)
        return series_tail(u / (1 + u), 1 / u) / (mpmath.log(u) ** 2 + pi2) / (u * u)

    one = mpf(1)
    a, _ = tanh_sinh(near, mpf(0), one, eps, eps * 100)
    b, _ = tanh_sinh(far, mpf(0), one, eps, eps * 100)
    return (a + b).real


def hurst_gamma_accelerated(K: int = 40, policy: PrecisionPolicy | None = None) -> HPComplex:
    """Euler's constant from K exact terms of Hurst's series plus the integral form of the rest.

    The terms decay only like 1/(k ln^2 k), so the partial sum alone is
    useless; the remainder is evaluated exactly as a single integral.
    """
    policy = policy or PrecisionPolicy()
    if K < 1:
        raise DomainError("K must be positive")
    exact = _hurst_exact(K)
    digits = policy.working_digits
    with working_precision(digits):
        val = mpf(exact.numerator) / exact.denominator + _gregory_tail_mp(K)
        return HPComplex(val, mpf(0), digits)


@dataclass(frozen=True)
class StepRecord:
    delta: Fraction
    theta: Fraction
    sector_M: int
    sector_total: HPComplex
    reference: HPComplex
    digits: float
    erf_multiplier: mpf
    erf_total: HPComplex
    erf_digits: float
    passed: bool


def stokes_step_experiment(modz, deltas: Sequence, N: int = 10,
                           policy: PrecisionPolicy | None = None,
                           required_digits: float = 22) -> list[StepRecord]:
    """Step-function versus erf-smoothed Stokes multiplier either side of theta = pi/2.

    At theta = (1/2 + delta) pi the sector form (full discontinuity term for
    delta > 0, none for delta < 0) is compared with the reference, and so is
    the same form with its discontinuity term scaled by the erf profile.
    """
    policy = policy or PrecisionPolicy()
    records = []
    for d in deltas:
        delta = Fraction(d)
        if delta == 0:
            raise DomainError("delta = 0 is the Stokes line itself; use the line form")
        theta = Fraction(1, 2) + delta
        arg = PolarArg(Fraction(modz) if not isinstance(modz, Fraction) else modz, theta)
        info = classify_borel(arg)
        result = evaluate(arg, N, Method.BOREL, policy)
        ref = ln_gamma_reference(arg, policy)
        digits = result.precision_used
        with working_precision(digits):
            terms = result.terms
            smooth = terms.F.to_mpc() + terms.TS.to_mpc() + terms.remainder.to_mpc()
            full_sd = borel.sd_sector_mp(arg, 1, 1)
            mult = erf_multiplier(arg, arg.modulus_mp(), 1)
            erf_total = _hp(smooth + mult * full_sd, digits)
        got = matching_digits(result.total, ref)
        records.append(StepRecord(delta, theta, info.M, result.total, ref, got, mult, erf_total,
                                  matching_digits(erf_total, ref), got >= required_digits))
    return records
