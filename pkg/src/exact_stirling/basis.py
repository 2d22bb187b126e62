"""Special functions and exact coefficient tables.

Functions ending in ``_mp`` work on mpmath values at whatever precision is
current; the others take and return :class:`HPComplex` under a
:class:`PrecisionPolicy`.
"""

from __future__ import annotations

import math
import threading
from fractions import Fraction
from functools import lru_cache

import mpmath
from mpmath import mp, mpc, mpf

from .errors import NonConvergence, PoleAtNonPositiveInteger, PoleAtOne
from .precision import HPComplex, PrecisionPolicy, to_mpc, to_mpf, working_precision

# ---------------------------------------------------------------------------
# Bernoulli numbers via tangent numbers (integer arithmetic only)

_tangent_lock = threading.Lock()
_tangent: list[int] = [0]  # _tangent[k] = T_k, index 0 unused


def _extend_tangent(n: int) -> None:
    with _tangent_lock:
        if len(_tangent) > n:
            return
        size = max(n, 2 * (len(_tangent) - 1), 16)
        t = [0] * (size + 1)
        t[1] = 1
        for k in range(2, size + 1):
            t[k] = (k - 1) * t[k - 1]
        for k in range(2, size + 1):
            for j in range(k, size + 1):
                t[j] = (j - k) * t[j - 1] + (j - k + 2) * t[j]
        _tangent[:] = t


def tangent_number(k: int) -> int:
    """T_k, the coefficients of tan x = sum T_k x^(2k-1) / (2k-1)!."""
    if k < 1:
        raise ValueError("k must be positive")
    if len(_tangent) <= k:
        _extend_tangent(k)
    return _tangent[k]


@lru_cache(maxsize=None)
def bernoulli(two_k: int) -> Fraction:
    """Exact B_{2k} for even ``two_k >= 2``."""
    if two_k < 2 or two_k % 2:
        raise ValueError("bernoulli() takes an even index >= 2")
    k = two_k // 2
    sign = 1 if k % 2 else -1
    four_k = 4 ** k
    return Fraction(sign * 2 * k * tangent_number(k), four_k * (four_k - 1))


@lru_cache(maxsize=None)
def cosecant_one(k: int) -> Fraction:
    """c_k(1) = (-1)^k 2^(2k) B_2k / (2k)!, the Stirling-series coefficients."""
    if k < 1:
        raise ValueError("k must be positive")
    return (-1) ** k * 4 ** k * bernoulli(2 * k) / math.factorial(2 * k)


_reciprocal_log_lock = threading.Lock()
_reciprocal_log: list[Fraction] = [Fraction(1)]


def reciprocal_log(k: int) -> Fraction:
    """A_k of Hurst's series for Euler's constant, by the linear recurrence."""
    if k < 0:
        raise ValueError("k must be non-negative")
    with _reciprocal_log_lock:
        table = _reciprocal_log
        while len(table) <= k:
            n = len(table)
            table.append(sum(((-1) ** (n - j + 1)) * table[j] / (n - j + 1) for j in range(n)))
        return table[k]


def hurst_gamma_partial(K: int) -> Fraction:
    """Partial sum sum_{k=1..K} (-1)^(k+1) A_k / k (exact)."""
    if K < 1:
        raise ValueError("K must be positive")
    return sum(((-1) ** (k + 1)) * reciprocal_log(k) / k for k in range(1, K + 1))


def _bernoulli_mpf(two_k: int) -> mpf:
    b = bernoulli(two_k)
    return mpf(b.numerator) / b.denominator


_EM_COEFFS: dict[int, list] = {}


def _em_coefficient(j: int) -> mpf:
    """B_2j / (2j)! at the current precision (cached per precision)."""
    table = _EM_COEFFS.setdefault(mp.prec, [None])
    while len(table) <= j:
        k = len(table)
        b = bernoulli(2 * k)
        table.append(mpf(b.numerator) / (b.denominator * math.factorial(2 * k)))
    return table[j]


_STIRLING_COEFFS: dict[int, list] = {}


def _stirling_coefficient(k: int) -> mpf:
    """B_2k / (2k (2k-1)) at the current precision (cached per precision)."""
    table = _STIRLING_COEFFS.setdefault(mp.prec, [None])
    while len(table) <= k:
        j = len(table)
        b = bernoulli(2 * j)
        table.append(mpf(b.numerator) / (b.denominator * 2 * j * (2 * j - 1)))
    return table[k]


def _size(x) -> mpf:
    """Cheap magnitude, within a factor sqrt(2) of |x|."""
    if isinstance(x, mpc):
        return max(abs(x.real), abs(x.imag))
    return abs(x)


# ---------------------------------------------------------------------------
# Hurwitz and Riemann zeta by Euler-Maclaurin


def hurwitz_zeta_mp(s, q, *, max_terms: int = 400):
    """zeta(s, q) = sum_{n>=0} (q + n)^(-s), continued to every s != 1 (Re q > 0).

    N direct terms are summed and the rest comes from the Euler-Maclaurin
    formula at q + N.  If its Bernoulli terms start growing before reaching
    the working epsilon, N is doubled and the evaluation restarts.
    """
    s = mpmath.mpmathify(s)
    q = mpmath.mpmathify(q)
    if s == 1:
        raise PoleAtOne("zeta has a pole at s = 1")
    digits = mp.dps
    size = abs(s)
    # Bernoulli terms shrink roughly like (|s| + 2j)^2 / (2 pi (q+N))^2; the
    # split below (tuned empirically) lets them reach epsilon before turning
    target = mpf("1.15") * (size + mpf("2.3") * digits) / (2 * mp.pi) + 2
    N = max(0, int(mpmath.ceil(target - q.real)))
    for _ in range(12):
        value = _euler_maclaurin(s, q, N, max_terms)
        if value is not None:
            return value
        N = max(2 * N, 8)
    raise NonConvergence("Euler-Maclaurin tail did not settle")


def _euler_maclaurin(s, q, N, max_terms):
    eps = mpf(2) ** (-mp.prec)
    total = mpc(0) if isinstance(s, mpc) or isinstance(q, mpc) else mpf(0)
    if q == int(q) and isinstance(s, mpc):
        # integer bases: n^-s = exp(-s ln n) with cached logarithms
        start = int(q)
        for n in range(start, start + N):
            total += mpmath.exp(-s * _log_int(n))
    else:
        for n in range(N):
            total += (q + n) ** (-s)
    a = q + N
    a_pow = a ** (-s)
    total += a * a_pow / (s - 1) + a_pow / 2
    # term_j = B_2j / (2j)! * s(s+1)...(s+2j-2) * a^(-s-2j+1)
    rising = s
    inv_a2 = 1 / (a * a)
    power = a_pow / a
    prev = None
    for j in range(1, max_terms + 1):
        term = _em_coefficient(j) * rising * power
        total += term
        size = _size(term)
        if size <= eps * _size(total):
            return total
        if prev is not None and size > prev:
            return None
        prev = size
        rising *= (s + 2 * j - 1) * (s + 2 * j)
        power *= inv_a2
    return None


_LOG_INT: dict[int, list] = {}


def _log_int(n: int) -> mpf:
    table = _LOG_INT.setdefault(mp.prec, [None, mpf(0)])
    while len(table) <= n:
        table.append(mpmath.log(len(table)))
    return table[n]


def zeta_mp(s):
    return hurwitz_zeta_mp(s, 1)


def hurwitz_zeta(s, q, policy: PrecisionPolicy | None = None) -> HPComplex:
    policy = policy or PrecisionPolicy()
    with working_precision(policy.working_digits):
        v = mpc(hurwitz_zeta_mp(to_mpc(s) if _is_complex(s) else to_mpf(s), to_mpf(q)))
        return HPComplex(v.real, v.imag, policy.working_digits)


def _is_complex(x) -> bool:
    if isinstance(x, HPComplex):
        return x.im != 0
    return isinstance(x, (complex, mpc, str))


def zeta_complex(s, policy: PrecisionPolicy | None = None) -> HPComplex:
    """Riemann zeta for Re s > 1/2 away from s = 1."""
    policy = policy or PrecisionPolicy()
    with working_precision(policy.working_digits):
        z = to_mpc(s)
        if z == 1:
            raise PoleAtOne("zeta has a pole at s = 1")
        if z.real <= mpf(1) / 2:
            raise ValueError("zeta_complex requires Re s > 1/2")
        v = mpc(zeta_mp(z))
        return HPComplex(v.real, v.imag, policy.working_digits)


# ---------------------------------------------------------------------------
# log-gamma by Stirling's series with upward shifting


def _stirling_radius() -> mpf:
    return mpf(mp.dps) * mpf("0.4") + 10


def log_gamma_mp(s, shift: int | None = None):
    """Principal-branch ln Gamma(s) (continuous from above across the negative axis).

    ``shift`` forces the recurrence depth; by default the argument is shifted
    until Stirling's series reaches full working precision.
    """
    s = mpc(s)
    if s.imag == 0 and s.real <= 0 and s.real == int(s.real):
        raise PoleAtNonPositiveInteger(f"Gamma has a pole at {s.real}")
    radius = _stirling_radius()
    if shift is None:
        shift = 0
        while abs(s + shift) < radius or (s + shift).real < 1:
            shift += 1
    w = s + shift
    eps = mpf(2) ** (-mp.prec)
    result = (w - mpf(1) / 2) * mpmath.log(w) - w + mpmath.log(2 * mp.pi) / 2
    inv_w = 1 / w
    inv_w2 = inv_w * inv_w
    power = inv_w
    for k in range(1, 2000):
        term = _stirling_coefficient(k) * power
        result += term
        if _size(term) <= eps * _size(result):
            break
        power *= inv_w2
    else:
        raise NonConvergence("Stirling series did not settle")
    if shift:
        # sum of principal logs of s + j: one log of the product, with the
        # multiple of 2 pi i restored from the argument sum in double precision
        product = mpc(1)
        arg_sum = 0.0
        for j in range(shift):
            factor = s + j
            product *= factor
            arg_sum += math.atan2(float(factor.imag), float(factor.real))
        correction = mpmath.log(product)
        turns = round((arg_sum - float(correction.imag)) / (2 * math.pi))
        result -= correction + mpc(0, 2 * turns) * mp.pi
    return result


def gamma_mp(s, shift: int | None = None):
    return mpmath.exp(log_gamma_mp(s, shift))


def log_gamma_complex(s, policy: PrecisionPolicy | None = None, shift: int | None = None) -> HPComplex:
    policy = policy or PrecisionPolicy()
    with working_precision(policy.working_digits):
        v = log_gamma_mp(to_mpc(s), shift)
        return HPComplex(v.real, v.imag, policy.working_digits)


def gamma_complex(s, policy: PrecisionPolicy | None = None, shift: int | None = None) -> HPComplex:
    """Gamma(s) via recurrence into the Stirling region; ``shift`` fixes the recurrence depth."""
    policy = policy or PrecisionPolicy()
    with working_precision(policy.working_digits):
        v = gamma_mp(to_mpc(s), shift)
        return HPComplex(v.real, v.imag, policy.working_digits)


# ---------------------------------------------------------------------------
# Upper incomplete gamma

CF_MAX_ITER = 20000


def _legendre_cf_mp(a, x):
    """x^(-a) e^x Gamma(a, x) by Legendre's continued fraction (modified Lentz).

    e^x Gamma(a,x) = x^a / (x + 1 - a - 1(1-a) / (x + 3 - a - 2(2-a) / ...)).
    Returns the reciprocal of the fraction, i.e. the factor multiplying x^a.
    """
    tiny = mpf(2) ** (-4 * mp.prec)
    eps = mpf(2) ** (-mp.prec)
    b = x + 1 - a
    f = b if b != 0 else tiny
    C = f
    D = mpc(0)
    for n in range(1, CF_MAX_ITER):
        an = -n * (n - a)
        b = b + 2
        D = b + an * D
        if D == 0:
            D = tiny
        C = b + an / C
        if C == 0:
            C = tiny
        D = 1 / D
        delta = C * D
        f *= delta
        if abs(delta - 1) <= eps:
            return 1 / f, n
    raise NonConvergence("incomplete-gamma continued fraction did not converge")


def exp_integral_e1_mp(x):
    """E1(x) for x off the negative real axis."""
    x = mpc(x)
    if x == 0:
        raise ValueError("E1 has a logarithmic singularity at 0")
    if abs(x) <= 12:
        return _e1_series_mp(x)
    g, _ = _legendre_cf_mp(mpf(0), x)
    return mpmath.exp(-x) * g


def _e1_series_mp(x):
    # E1(x) = -gamma - ln x - sum_{k>=1} (-x)^k / (k k!); terms peak near |x|^|x|/|x|!
    extra = int(abs(x) / math.log(10)) + 10
    with mp.extradps(extra):
        x = mpc(x)
        eps = mpf(2) ** (-mp.prec)
        total = mpc(0)
        term = mpc(1)
        k = 1
        while True:
            term *= -x / k
            add = term / k
            total += add
            if abs(add) <= eps * max(abs(total), eps) and k > abs(x):
                break
            k += 1
        res = -mp.euler - mpmath.log(x) - total
    return +res


def scaled_upper_gamma_mp(a, x, *, force: str | None = None):
    """e^x Gamma(a, x) with principal branches, x off the negative real axis.

    Non-positive integer orders use the closed form through E1 when |x| is not
    large compared with the order (the continued fraction would crawl there);
    everything else goes through the continued fraction or, for small |x| and
    non-integer a, through the lower series.
    """
    x = mpc(x)
    a = mpmath.mpmathify(a)
    if x == 0:
        raise ValueError("incomplete gamma needs x != 0")
    a_is_int = (mpc(a).imag == 0 and mpc(a).real == int(mpc(a).real))
    order = -int(mpc(a).real) if a_is_int and mpc(a).real <= 0 else None
    method = force
    if method is None:
        if abs(x) >= max(mpf(mp.dps) / 2, 1.5 * abs(a) if order is not None else 0, 8):
            method = "cf"
        elif order is not None:
            method = "closed"
        else:
            method = "series" if abs(x) < 25 else "cf"
    if method == "cf":
        g, _ = _legendre_cf_mp(a, x)
        return x ** a * g
    if method == "closed":
        if order is None:
            raise ValueError("closed form needs a non-positive integer order")
        return _scaled_gamma_negative_int_mp(order, x)
    return _scaled_gamma_series_mp(a, x)


def _scaled_gamma_negative_int_mp(m: int, x):
    """e^x Gamma(-m, x) = ((-1)^m / m!) [e^x E1(x) - sum_{k<m} (-1)^k k! / x^(k+1)]."""
    # digits lost to cancellation grow like log10(|x|^m / m!)
    loss = 0.0
    ax = float(abs(x))
    if m > 0 and ax > 0:
        loss = max(0.0, m * math.log10(ax) - math.lgamma(m + 1) / math.log(10))
    with mp.extradps(int(loss) + 10):
        x = mpc(x)
        e1 = mpmath.exp(x) * exp_integral_e1_mp(x) if abs(x) <= 12 else _legendre_cf_mp(mpf(0), x)[0]
        total = mpc(0)
        fact = mpf(1)
        inv_x = 1 / x
        power = inv_x
        for k in range(m):
            total += (-1) ** k * fact * power
            fact *= k + 1
            power *= inv_x
        res = (-1) ** m * (e1 - total) / mpmath.factorial(m)
    return +res


def _scaled_gamma_series_mp(a, x):
    # Gamma(a, x) = Gamma(a) - gamma(a, x); gamma(a, x) = x^a e^-x sum x^k / (a)_(k+1)
    extra = int(abs(x) / math.log(10)) + 10
    with mp.extradps(extra):
        x = mpc(x)
        a = mpc(a)
        eps = mpf(2) ** (-mp.prec)
        term = 1 / a
        total = term
        k = 0
        while True:
            k += 1
            term *= x / (a + k)
            total += term
            if abs(term) <= eps * abs(total) and k > abs(x):
                break
        lower = x ** a * total
        res = mpmath.exp(x) * gamma_mp(a) - lower
    return +res


def upper_incomplete_gamma(a, x, policy: PrecisionPolicy | None = None) -> HPComplex:
    """Gamma(a, x), principal branch."""
    policy = policy or PrecisionPolicy()
    with working_precision(policy.working_digits):
        xv = to_mpc(x)
        av = to_mpc(a)
        if av.imag == 0:
            av = av.real
        v = mpmath.exp(-xv) * scaled_upper_gamma_mp(av, xv)
        return HPComplex(v.real, v.imag, policy.working_digits)


# ---------------------------------------------------------------------------
# Smooth kernels with removable singularities at 0


def coth_minus_reciprocal_mp(x):
    """coth(x) - 1/x, accurate near x = 0 (odd, ~ x/3)."""
    if abs(x) < mpf(1) / 4:
        eps = mpf(2) ** (-mp.prec)
        x2 = x * x
        total = 0
        power = x
        four_k = mpf(1)
        fact = mpf(1)
        for k in range(1, 500):
            four_k *= 4
            fact *= (2 * k - 1) * (2 * k)
            term = four_k * _bernoulli_mpf(2 * k) / fact * power
            total += term
            if abs(term) <= eps * abs(total):
                return total
            power *= x2
        raise NonConvergence("coth series did not settle")
    return 1 / mpmath.tanh(x) - 1 / x


def euler_gamma_integrand_mp(y):
    """e^-y (coth(y/2)/2 - 1/y); the bracket tends to 0 at y = 0."""
    return mpmath.exp(-y) * (coth_minus_reciprocal_mp(y / 2) / 2)


def euler_gamma_integral(policy: PrecisionPolicy | None = None) -> HPComplex:
    """Euler's constant from 1/2 + ∫_0^∞ e^-y (coth(y/2)/2 - 1/y) dy."""
    from .quadrature import integrate

    policy = policy or PrecisionPolicy()
    val = integrate(euler_gamma_integrand_mp, policy=policy)
    with working_precision(policy.working_digits):
        return HPComplex(val.re + mpf(1) / 2, mpf(0), policy.working_digits)


def erf_multiplier(theta, modz, sign: int) -> mpf:
    """Error-function profile of a Stokes multiplier across the line at ±pi/2.

    sign +1 rises from 0 to 1 across theta = pi/2; sign -1 falls from 1 to 0
    across theta = -pi/2.
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    th = theta.theta_mp() if hasattr(theta, "theta_mp") else to_mpf(theta)
    r = to_mpf(modz)
    arg = (th - sign * mp.pi / 2) * mpmath.sqrt(mp.pi * r)
    return mpf(1) / 2 + sign * mpmath.erf(arg) / 2
