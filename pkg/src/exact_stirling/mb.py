"""Mellin-Barnes regularized forms of ln Gamma(z^p).

A single contour integral along Re s = c replaces the whole n-sum of the
Borel remainder.  It converges for ``(M - 1) pi < p theta < (M + 1) pi``, so
every phase lies in one or two domains, and the two results must agree after
adding the logarithmic term S_MB of each domain.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath
from mpmath import mp, mpc, mpf

from .basis import log_gamma_mp, zeta_mp
from .borel import Branch, stirling_F_mp, truncated_sum_mp
from .errors import DivergentTail, DomainError, LogSingularity
from .precision import HPComplex, PrecisionPolicy, to_mpc, working_precision
from .quadrature import DEFAULT_SCHEME, integrate_mp, vertical_line_panels_mp
from .sectors import LineCase, PolarArg, classify_mb, mb_line_case


def _hp(v, digits) -> HPComplex:
    v = mpc(v)
    return HPComplex(v.real, v.imag, digits)


def default_abscissa(N: int) -> Fraction:
    return Fraction(4 * N - 1, 4)


def _check_abscissa(N: int, c: Fraction) -> None:
    if not (max(Fraction(N - 1), Fraction(1, 2)) < c < N):
        raise DomainError(f"contour abscissa {c} must satisfy max(N-1, 1/2) < c < N for N = {N}")


@dataclass(frozen=True)
class MBTerms:
    F: HPComplex
    TS: HPComplex
    mb_integral: HPComplex
    s_mb: HPComplex
    M: int
    c: Fraction
    N: int
    line_case: LineCase
    tail_bound: mpf
    one_sided_s_mb: HPComplex | None = None

    @property
    def total(self) -> HPComplex:
        return ((self.F + self.TS) + self.mb_integral) + self.s_mb

    @property
    def one_sided_total(self) -> HPComplex:
        """On a line: the off-line form of S_MB evaluated there (principal logs), i.e. a one-sided limit."""
        extra = self.s_mb if self.one_sided_s_mb is None else self.one_sided_s_mb
        return ((self.F + self.TS) + self.mb_integral) + extra

    @property
    def on_line(self) -> bool:
        return self.line_case is not LineCase.NOT_ON_LINE


def decay_rate(arg: PolarArg, M: int) -> float:
    """Exponential decay rate of the integrand along the contour, per unit Im s."""
    offset = abs(M - arg.phase)
    return float(2 * mp.pi * (1 - offset)) if offset < 1 else 0.0


def _integrand_constants(arg: PolarArg, M: int):
    L = mpmath.log(2 * mp.pi * arg.effective_modulus_mp())
    ph = arg.phase
    offset = mp.pi * (M - mpf(ph.numerator) / ph.denominator)
    return L, offset


def _assemble(s, L, offset, log_gamma, zeta):
    exponent = -2 * s * L + log_gamma + 2j * offset * s
    ipis = mpc(0, 1) * mp.pi * s
    if s.imag >= 0:
        # 1/(e^{-i pi s} - e^{i pi s}) = e^{i pi s} / (1 - e^{2 i pi s})
        exponent += ipis
        denom = -mpmath.expm1(2 * ipis)
    else:
        exponent -= ipis
        denom = mpmath.expm1(-2 * ipis)
    return mpmath.exp(exponent) * zeta / denom


def mb_integrand_mp(arg: PolarArg, s, M: int) -> mpc:
    """(2 pi |w|)^(-2s) zeta(2s) Gamma(2s-1) e^{2i(M pi - p theta)s} / (e^{-i pi s} - e^{i pi s}).

    All exponentials are gathered into a single exponent together with
    ln Gamma(2s-1), so nothing overflows far up the contour.
    """
    s = mpc(s)
    L, offset = _integrand_constants(arg, M)
    return _assemble(s, L, offset, log_gamma_mp(2 * s - 1), zeta_mp(2 * s))


def _integrand_pair(arg: PolarArg, c, M: int):
    """t -> integrand(c + it) + integrand(c - it), sharing zeta and ln Gamma through conjugation."""
    L, offset = _integrand_constants(arg, M)

    def pair(t):
        s = mpc(c, t)
        lg = log_gamma_mp(2 * s - 1)
        z = zeta_mp(2 * s)
        sc = s.conjugate()
        return (_assemble(s, L, offset, lg, z)
                + _assemble(sc, L, offset, lg.conjugate(), z.conjugate()))
    return pair


def mb_integrand(arg: PolarArg, s, M: int, policy: PrecisionPolicy | None = None) -> HPComplex:
    policy = policy or PrecisionPolicy()
    if decay_rate(arg, M) <= 0:
        raise DivergentTail(f"M = {M} is not a domain of convergence for phase {arg.phase} pi")
    with working_precision(policy.working_digits):
        s = to_mpc(s)
        if (2 * s).real <= 1:
            raise DomainError("the integrand needs Re 2s > 1")
        return _hp(mb_integrand_mp(arg, s, M), policy.working_digits)


def mb_remainder_mp(arg: PolarArg, N: int, M: int, c: Fraction | None = None):
    """-2 w ∫ ds along Re s = c; returns (value, tail_bound)."""
    c = default_abscissa(N) if c is None else Fraction(c)
    _check_abscissa(N, c)
    rate = decay_rate(arg, M)
    if rate <= 0:
        raise DivergentTail(f"M = {M} is not a domain of convergence for phase {arg.phase} pi")
    w = arg.w_mp()
    c_mp = mpf(c.numerator) / c.denominator
    eps = mpf(10) ** (-mp.dps)

    def g(s):
        return mb_integrand_mp(arg, s, M)

    factor = -2 * w
    # the result feeds a total of modest size: absolute accuracy is what counts
    value, tail = vertical_line_panels_mp(g, c_mp, abs_tol=eps / abs(factor), rel_tol=eps * 1000,
                                          decay_rate=rate, pair=_integrand_pair(arg, c_mp, M))
    return factor * value, abs(factor) * tail


def mb_remainder(arg: PolarArg, N: int, M: int, policy: PrecisionPolicy | None = None,
                 c: Fraction | None = None) -> HPComplex:
    """The MB integral term for domain M, with contour abscissa c (default N - 1/4)."""
    policy = policy or PrecisionPolicy()
    if N < 1:
        raise DomainError("N must be at least 1")
    mb_line_case(arg, M)
    with working_precision(policy.working_digits):
        value, _ = mb_remainder_mp(arg, N, M, c)
        return _hp(value, policy.working_digits)


def s_mb_mp(arg: PolarArg, M: int, line_case: LineCase) -> mpc:
    if M == 0:
        return mpc(0)
    sign = 1 if M > 0 else -1
    K = abs(M)
    half, odd = K // 2, K % 2
    if line_case is LineCase.NOT_ON_LINE:
        w = arg.w_mp()
        total = mpc(0)
        if half:
            total += sign * half * mpmath.log(-mpmath.exp(-sign * 2j * mp.pi * w))
        if odd:
            # log1p keeps the digits of a tiny exponential that 1 - e would discard
            e = mpmath.exp(sign * 2j * mp.pi * w)
            if e == 1:
                raise LogSingularity("logarithm of zero in S_MB")
            total -= mpmath.log1p(-e)
        return total
    r = arg.effective_modulus_mp()
    two_pi_r = 2 * mp.pi * r
    parity = ((-1) ** K - 1) // 2  # 0 for even K, -1 for odd K
    log_part = parity * mpmath.log(-mpmath.expm1(-two_pi_r))
    if line_case is LineCase.LOWER_LINE:
        return mpc(log_part + 2 * (-1) ** (K + 1) * half * mp.pi * r)
    return mpc(log_part + two_pi_r * ((-1) ** K * half + parity))


def s_mb(arg: PolarArg, M: int, line_case: LineCase | None = None,
         policy: PrecisionPolicy | None = None) -> HPComplex:
    """Logarithmic term of domain M; ``line_case`` defaults to the one implied by the phase."""
    policy = policy or PrecisionPolicy()
    expected = mb_line_case(arg, M)
    if line_case is None:
        line_case = expected
    elif line_case is not expected:
        raise DomainError(f"phase {arg.phase} pi is {expected.value} for M = {M}, not {line_case.value}")
    with working_precision(policy.working_digits):
        return _hp(s_mb_mp(arg, M, line_case), policy.working_digits)


def ln_gamma_mb(arg: PolarArg, N: int, policy: PrecisionPolicy | None = None,
                c: Fraction | None = None, branch: Branch = Branch.PRINCIPAL) -> list[MBTerms]:
    """F + TS_N + MB integral + S_MB for each admissible domain (one or two)."""
    policy = policy or PrecisionPolicy()
    if N < 1:
        raise DomainError("N must be at least 1")
    info = classify_mb(arg)
    cc = default_abscissa(N) if c is None else Fraction(c)
    digits = policy.working_digits
    results = []
    with working_precision(digits):
        F = _hp(stirling_F_mp(arg, branch), digits)
        TS = _hp(truncated_sum_mp(arg, N), digits)
        for M in info.admissible():
            case = mb_line_case(arg, M)
            integral, tail = mb_remainder_mp(arg, N, M, cc)
            extra = s_mb_mp(arg, M, case)
            one_sided = None
            if case is not LineCase.NOT_ON_LINE:
                one_sided = _hp(s_mb_mp(arg, M, LineCase.NOT_ON_LINE), digits)
            results.append(MBTerms(F, TS, _hp(integral, digits), _hp(extra, digits), M, cc, N,
                                   case, tail, one_sided))
    return results


def mellin_pair_check(s, policy: PrecisionPolicy | None = None) -> tuple[HPComplex, HPComplex]:
    """(∫_0^∞ x^(s-3/2) ln(1/(1 - e^{-sqrt x})) dx, 2 zeta(2s) Gamma(2s-1)).

    The integral is taken as 2 ∫_0^∞ u^(2s-2) (-ln(1 - e^{-u})) du after x = u^2.
    """
    policy = policy or PrecisionPolicy()
    digits = policy.working_digits
    with working_precision(digits):
        s = to_mpc(s)
        if s.real <= mpf(1) / 2:
            raise DomainError("the Mellin pair needs Re s > 1/2")
        power = 2 * s - 2

        def f(u):
            return u ** power * -mpmath.log(-mpmath.expm1(-u))

        tol = mpf(10) ** (-digits)
        lhs = 2 * integrate_mp(f, DEFAULT_SCHEME, abs_tol=tol, rel_tol=tol * 1000)
        rhs = 2 * zeta_mp(2 * s) * mpmath.exp(log_gamma_mp(2 * s - 1))
        return _hp(lhs, digits), _hp(rhs, digits)
