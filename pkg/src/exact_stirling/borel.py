"""Borel-summed forms of ln Gamma(z^p) and psi(z).

Every piece is computed from the value ``w = z**p``; only the sector index M
and the choice of Stokes-discontinuity term depend on the accumulated phase
``p * theta``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
from mpmath import mp, mpc, mpf

from . import remainder_sums
from .basis import cosecant_one, coth_minus_reciprocal_mp, scaled_upper_gamma_mp
from .errors import DomainError, LogSingularity
from .precision import HPComplex, PrecisionPolicy, working_precision
from .quadrature import DEFAULT_SCHEME, integrate_mp, principal_value_mp
from .sectors import PolarArg, SectorInfo, classify_borel


class Branch(enum.Enum):
    """How ln w is formed inside F: principal arg of w, or the accumulated p*theta."""

    PRINCIPAL = "principal"
    ACCUMULATED = "accumulated"


# Beyond this |p theta| (units of pi) the arguments 2 pi i n w crowd the
# negative real axis, where the continued fraction for Gamma(a, x) stalls.
INCGAMMA_PHASE_MARGIN = Fraction(3, 8)
# the incomplete-gamma route costs one continued fraction per n; above this
# many terms AUTO switches to the near/far split, which is much cheaper
INCGAMMA_MAX_TERMS = 20_000


class Route(enum.Enum):
    AUTO = "auto"
    QUADRATURE = "quadrature"
    INCGAMMA = "incgamma"


def _hp(v, digits) -> HPComplex:
    v = mpc(v)
    return HPComplex(v.real, v.imag, digits)


def effective_limit(N: int, limit: int | None) -> int | None:
    """Series cutoff actually used: ten times larger for N <= 2, whose sums converge slowly."""
    if limit is None:
        return None
    return limit * 10 if N <= 2 else limit


@dataclass(frozen=True)
class BorelTerms:
    F: HPComplex
    TS: HPComplex
    remainder: HPComplex
    SD: HPComplex
    N: int
    limit: int | None
    tail_bound: mpf
    sector: SectorInfo
    route: str
    extras: dict = field(default_factory=dict, compare=False)

    @property
    def total(self) -> HPComplex:
        return ((self.F + self.TS) + self.remainder) + self.SD


# ---------------------------------------------------------------------------
# leading terms and truncated series


def log_w_mp(arg: PolarArg, branch: Branch = Branch.PRINCIPAL) -> mpc:
    ph = arg.principal_phase if branch is Branch.PRINCIPAL else arg.phase
    return mpc(mpmath.log(arg.effective_modulus_mp()), mp.pi * ph.numerator / ph.denominator)


def stirling_F_mp(arg: PolarArg, branch: Branch = Branch.PRINCIPAL) -> mpc:
    w = arg.w_mp()
    return (w - mpf(1) / 2) * log_w_mp(arg, branch) - w + mpmath.log(2 * mp.pi) / 2


def stirling_F(arg: PolarArg, policy: PrecisionPolicy | None = None,
               branch: Branch = Branch.PRINCIPAL) -> HPComplex:
    """(w - 1/2) ln w - w + ln(2 pi)/2 with w = z^p."""
    policy = policy or PrecisionPolicy()
    with working_precision(policy.working_digits):
        return _hp(stirling_F_mp(arg, branch), policy.working_digits)


def stirling_coefficient(k: int) -> Fraction:
    """(-1)^k Gamma(2k-1) c_k(1) / 2^(2k), so TS_N = sum_k coeff_k w^(1-2k)."""
    return (-1) ** k * math.factorial(2 * k - 2) * cosecant_one(k) / 4 ** k


def truncated_sum_mp(arg: PolarArg, N: int) -> mpc:
    if N < 1:
        raise DomainError("N must be at least 1")
    w = arg.w_mp()
    inv_w2 = 1 / (w * w)
    power = 1 / w
    total = mpc(0)
    for k in range(1, N):
        c = stirling_coefficient(k)
        total += mpf(c.numerator) / c.denominator * power
        power *= inv_w2
    return total


def truncated_sum(arg: PolarArg, N: int, policy: PrecisionPolicy | None = None) -> HPComplex:
    policy = policy or PrecisionPolicy()
    with working_precision(policy.working_digits):
        return _hp(truncated_sum_mp(arg, N), policy.working_digits)


# ---------------------------------------------------------------------------
# remainders


def tail_bound_mp(arg: PolarArg, N: int, limit: int | None) -> mpf:
    """Size of the omitted n > L part of the remainder sum.

    For large n the n-th integral behaves like Gamma(2N-1) / (2 pi n |w|)^2,
    so the tail is |2 w / (2 pi w)^(2N-2)| * Gamma(2N-1) / (2 pi |w|)^2 * zeta(2N, L+1).
    """
    if limit is None:
        return mpf(0)
    m = 2 * N - 2
    b = 2 * mp.pi * arg.effective_modulus_mp()
    pref = 2 * arg.effective_modulus_mp() / b ** m
    return pref * mpmath.factorial(m) / (b * b) * remainder_sums.hurwitz_zeta_mp(2 * N, limit + 1)


def _sector_prefactor(w, N):
    return 2 * (-1) ** (N + 1) * w / (2 * mp.pi * w) ** (2 * N - 2)


def remainder_sector_quad_mp(arg: PolarArg, N: int, limit: int | None):
    w = arg.w_mp()
    a = 2 * mp.pi * w
    m = 2 * N - 2
    pieces = remainder_sums.sector_sum(m, m, 1, a, limit)
    return _sector_prefactor(w, N) * pieces.total, pieces


def remainder_sector_quad(arg: PolarArg, N: int, policy: PrecisionPolicy | None = None,
                          limit: int | None = ...) -> HPComplex:
    """Sector remainder by quadrature of each n-term (n <= limit)."""
    policy = policy or PrecisionPolicy()
    if classify_borel(arg).on_line:
        raise DomainError("sector remainder requested on a Stokes line")
    lim = effective_limit(N, policy.series_limit if limit is ... else limit)
    with working_precision(policy.working_digits):
        val, _ = remainder_sector_quad_mp(arg, N, lim)
        return _hp(val, policy.working_digits)


def remainder_sector_incgamma_mp(arg: PolarArg, N: int, limit: int | None):
    """Gamma(2N-1)/(2 pi i) sum_n [e^{-x_n} G(-x_n) - e^{x_n} G(x_n)] / n, x_n = 2 pi i n w."""
    if limit is None:
        raise DomainError("the incomplete-gamma route sums term by term and needs a finite limit")
    w = arg.w_mp()
    a = 2 - 2 * N
    x1 = 2j * mp.pi * w
    total = mpc(0)
    for n in range(1, limit + 1):
        x = n * x1
        total += (scaled_upper_gamma_mp(a, -x) - scaled_upper_gamma_mp(a, x)) / n
    return mpmath.factorial(2 * N - 2) / (2j * mp.pi) * total


def remainder_sector_incgamma(arg: PolarArg, N: int, policy: PrecisionPolicy | None = None,
                              limit: int | None = ...) -> HPComplex:
    """Primary-sector remainder through upper incomplete gamma functions."""
    policy = policy or PrecisionPolicy()
    if not abs(arg.phase) < Fraction(1, 2):
        raise DomainError("the incomplete-gamma form holds only for |p theta| < pi/2")
    lim = effective_limit(N, policy.series_limit if limit is ... else limit)
    with working_precision(policy.working_digits):
        return _hp(remainder_sector_incgamma_mp(arg, N, lim), policy.working_digits)


def remainder_line_mp(arg: PolarArg, N: int, limit: int | None):
    w = arg.w_mp()
    r = arg.effective_modulus_mp()
    b = 2 * mp.pi * r
    m = 2 * N - 2
    pieces = remainder_sums.line_sum(m, m, 1, b, limit)
    return 2 * w / b ** m * pieces.total, pieces


def remainder_line(arg: PolarArg, N: int, policy: PrecisionPolicy | None = None,
                   limit: int | None = ...) -> HPComplex:
    """Stokes-line remainder: principal values about the poles y = 2 pi n |w|."""
    policy = policy or PrecisionPolicy()
    if not classify_borel(arg).on_line:
        raise DomainError("line remainder requested off the Stokes lines")
    lim = effective_limit(N, policy.series_limit if limit is ... else limit)
    with working_precision(policy.working_digits):
        val, _ = remainder_line_mp(arg, N, lim)
        return _hp(val, policy.working_digits)


# ---------------------------------------------------------------------------
# Stokes discontinuity terms


def _checked_log(x):
    if x == 0:
        raise LogSingularity("logarithm of zero in a discontinuity term")
    return mpmath.log(x)


def sd_sector_mp(arg: PolarArg, M: int, sign: int):
    if M < 0 or sign not in (1, -1):
        raise DomainError("M must be non-negative and sign ±1")
    if M == 0:
        return mpc(0)
    w = arg.w_mp()
    e = mpmath.exp(sign * 2j * mp.pi * w)
    total = mpc(0)
    if M // 2:
        total -= (M // 2) * mpmath.log(-e)
    if M % 2:
        total -= _checked_log(1 - e)
    return total


def sd_sector(arg: PolarArg, M: int, sign: int, policy: PrecisionPolicy | None = None) -> HPComplex:
    """-floor(M/2) ln(-e^{±2 pi i w}) - [(1-(-1)^M)/2] ln(1 - e^{±2 pi i w})."""
    policy = policy or PrecisionPolicy()
    with working_precision(policy.working_digits):
        return _hp(sd_sector_mp(arg, M, sign), policy.working_digits)


def sd_line_mp(arg: PolarArg, M: int):
    if M < 0:
        raise DomainError("M must be non-negative")
    r = arg.effective_modulus_mp()
    odd = M % 2
    coeff = (-1) ** M * (M // 2 + odd)
    return mpc(coeff * 2 * mp.pi * r - mpmath.log(-mpmath.expm1(-2 * mp.pi * r)) / 2)


def sd_line(arg: PolarArg, M: int, policy: PrecisionPolicy | None = None) -> HPComplex:
    """(-1)^M (floor(M/2) + (1-(-1)^M)/2) 2 pi |w| - ln(1 - e^{-2 pi |w|}) / 2."""
    policy = policy or PrecisionPolicy()
    with working_precision(policy.working_digits):
        return _hp(sd_line_mp(arg, M), policy.working_digits)


# ---------------------------------------------------------------------------
# full evaluation


def ln_gamma_borel(arg: PolarArg, N: int, policy: PrecisionPolicy | None = None,
                   route: Route = Route.AUTO, branch: Branch = Branch.PRINCIPAL) -> BorelTerms:
    """F + TS_N + remainder + SD for ln Gamma(z^p), dispatched on the Stokes sector."""
    policy = policy or PrecisionPolicy()
    if N < 1:
        raise DomainError("N must be at least 1")
    info = classify_borel(arg)
    limit = effective_limit(N, policy.series_limit)
    digits = policy.working_digits
    with working_precision(digits):
        F = stirling_F_mp(arg, branch)
        TS = truncated_sum_mp(arg, N)
        extras = {}
        if info.on_line:
            R, pieces = remainder_line_mp(arg, N, limit)
            SD = sd_line_mp(arg, info.M)
            used = "line-quadrature"
            extras["near_terms"] = pieces.n0
        else:
            chosen = route
            if chosen is Route.AUTO:
                near_line = abs(arg.phase) > INCGAMMA_PHASE_MARGIN
                cheap = limit is not None and limit <= INCGAMMA_MAX_TERMS
                chosen = (Route.INCGAMMA if (info.M == 0 and cheap and not near_line)
                          else Route.QUADRATURE)
            if chosen is Route.INCGAMMA:
                if info.M != 0:
                    raise DomainError("the incomplete-gamma form holds only for |p theta| < pi/2")
                R = remainder_sector_incgamma_mp(arg, N, limit)
                used = "incgamma"
            else:
                R, pieces = remainder_sector_quad_mp(arg, N, limit)
                used = "quadrature"
                extras["near_terms"] = pieces.n0
            SD = sd_sector_mp(arg, info.M, info.sign)
        tail = tail_bound_mp(arg, N, limit)
        return BorelTerms(_hp(F, digits), _hp(TS, digits), _hp(R, digits), _hp(SD, digits),
                          N, limit, tail, info, used, extras)


# ---------------------------------------------------------------------------
# integral cross-checks for R_1


def _coth_integrand(z):
    two_z = 2 * z

    def f(y):
        return mpmath.exp(-y) / y * coth_minus_reciprocal_mp(y / two_z) / 2
    return f


def remainder_coth_check_mp(arg: PolarArg):
    """R_1 as a single integral: coth kernel off the lines, cot kernel (principal value) on them."""
    info = classify_borel(arg)
    w = arg.w_mp()
    if not info.on_line:
        tol = mpf(10) ** (-mp.dps)
        return integrate_mp(_coth_integrand(w), abs_tol=tol, rel_tol=tol * 1000)
    r = arg.effective_modulus_mp()
    two_r = 2 * r
    b = mp.pi * two_r
    # e^-y / y below eps beyond y_end; poles of cot(y / 2|w|) sit at k b
    y_end = mp.prec * math.log(2) + 20
    kmax = int(mpmath.floor(y_end / b)) + 1
    poles = [k * b for k in range(1, kmax + 1)]

    def g(y):
        return mpmath.exp(-y) / y

    def F(y):
        x = y / two_r
        # cot x - 1/x = i (coth(ix) - 1/(ix)), stable as x -> 0
        return g(y) * (mpc(0, 1) * coth_minus_reciprocal_mp(mpc(0, x))).real

    def mirrored(p, u):
        # cot((p ± u)/2|w|) = ±cot(u/2|w|) because p/2|w| is a multiple of pi
        c = mpmath.cot(u / two_r)
        gp, gm = g(p + u), g(p - u)
        return c * (gp - gm) - two_r * (gp / (p + u) + gm / (p - u))

    tol = mpf(10) ** (-mp.dps)
    pv = principal_value_mp(F, poles, DEFAULT_SCHEME, mirrored=mirrored, abs_tol=tol,
                            rel_tol=tol * 1000)
    # sum_n 1/(y^2 - n^2 b^2) = (cot(y/2|w|) - 2|w|/y) / (4 |w| y)
    return w / (2 * r) * pv


def remainder_coth_check(arg: PolarArg, policy: PrecisionPolicy | None = None) -> HPComplex:
    policy = policy or PrecisionPolicy()
    with working_precision(policy.working_digits):
        return _hp(remainder_coth_check_mp(arg), policy.working_digits)


# ---------------------------------------------------------------------------
# digamma


def _require_plain(arg: PolarArg) -> None:
    if arg.power != 1:
        raise DomainError("the digamma forms are implemented for p = 1 only")


def digamma_sd_mp(arg: PolarArg, info: SectorInfo):
    z = arg.z_mp()
    M = info.M
    if info.on_line:
        r = arg.modulus_mp()
        odd_sign = (-1) ** M
        val = (odd_sign - 1 - 2 * (M // 2) + odd_sign / mpmath.expm1(2 * mp.pi * r))
        return info.sign * val * mpc(0, 1) * mp.pi
    if M == 0:
        return mpc(0)
    s = info.sign
    val = -s * 2 * (M // 2)
    if M % 2:
        denom = 1 - mpmath.exp(-s * 2j * mp.pi * z)
        if denom == 0:
            raise LogSingularity("pole of the digamma discontinuity term")
        val = val - s * 2 / denom
    return val * mpc(0, 1) * mp.pi


def digamma_borel(arg: PolarArg, N: int, policy: PrecisionPolicy | None = None) -> BorelTerms:
    """psi(z) = ln z - 1/2z - sum_k (-1)^k Gamma(2k) c_k / (2z)^2k + R_psi + SD_psi."""
    policy = policy or PrecisionPolicy()
    _require_plain(arg)
    if N < 1:
        raise DomainError("N must be at least 1")
    info = classify_borel(arg)
    limit = effective_limit(N, policy.series_limit)
    digits = policy.working_digits
    with working_precision(digits):
        z = arg.z_mp()
        lead = log_w_mp(arg) - 1 / (2 * z)
        ts = mpc(0)
        for k in range(1, N):
            c = cosecant_one(k)
            ts -= (-1) ** k * math.factorial(2 * k - 1) * (mpf(c.numerator) / c.denominator) / (2 * z) ** (2 * k)
        m = 2 * N - 2
        if info.on_line:
            r = arg.modulus_mp()
            b = 2 * mp.pi * r
            R, _ = remainder_line_mp(arg, N, limit)
            sq = remainder_sums.line_sum(m, m - 2, 2, b, limit)
            extra = 4 / b ** (2 * N - 4) * sq.total
        else:
            R, _ = remainder_sector_quad_mp(arg, N, limit)
            a = 2 * mp.pi * z
            sq = remainder_sums.sector_sum(m, m - 2, 2, a, limit)
            extra = 4 * (-1) ** N / a ** (2 * N - 4) * sq.total
        rem = (3 - 2 * N) / z * R + extra
        sd = digamma_sd_mp(arg, info)
        tail = tail_bound_mp(arg, N, limit)
        return BorelTerms(_hp(lead, digits), _hp(ts, digits), _hp(rem, digits), _hp(sd, digits),
                          N, limit, tail, info, "digamma")
