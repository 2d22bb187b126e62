"""n-sums of Stieltjes-type integrals shared by the Borel remainders.

The quantity needed everywhere is

    S = sum_{n=1}^{L} n^(-weight) * ∫_0^∞ y^m e^(-y) / (y^2 + n^2 a^2)^q dy

for q = 1 or 2 (q = 2 appears in the digamma remainder), with ``a = 2 pi w``
off the lines and ``a^2 = -b^2`` (principal value / finite part) on them.

Terms with ``n |a|`` below a crossover ``B`` are integrated numerically.  For
the rest, ``1/(y^2 + c^2)^q`` is expanded in powers of ``y^2 / c^2`` and the
n-sum of each power is a difference of Hurwitz zeta values, so the block
``n0 < n <= L`` costs a handful of zeta evaluations whatever L is.  ``B`` is
chosen so the optimally truncated expansion is exact to working precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from math import comb

import mpmath
from mpmath import mp, mpc, mpf

from .basis import hurwitz_zeta_mp
from .errors import NonConvergence
from .quadrature import DEFAULT_SCHEME, PanelScheme, integrate_mp, principal_value_mp


@dataclass
class SumPieces:
    near: object
    far: object
    n0: int
    limit: int | None

    @property
    def total(self):
        return self.near + self.far


def _log_eps() -> float:
    return -mp.prec * math.log(2)


def crossover(m: int, amod: float, weight: int, q: int, pole_sine: float = 1.0,
              margin_digits: int = 6) -> float:
    """Smallest B = n0 |a| making the far-block expansion error negligible.

    The smallest term of the expansion at c = B is about
    sqrt(2 pi B) e^-B B^(m-2q) / n0^weight, and it must sit ``margin`` digits
    below the size of the n = 1 integral, roughly Gamma(m+1) / (|a|^2 + m^2 + 1)^q.
    ``pole_sine`` accounts for poles close to the integration path.
    """
    target = (_log_eps() - margin_digits * math.log(10) + math.lgamma(m + 1)
              - q * math.log(amod * amod + m * m + 1) + math.log(max(pole_sine, 1e-300)))
    B = max(10.0, m + 2.0 * q + 2.0)
    while True:
        n0 = max(B / amod, 1.0)
        err = (0.5 * math.log(2 * math.pi * B) - B + (m - 2 * q) * math.log(B)
               - weight * math.log(n0))
        if err <= target:
            return B
        B *= 1.05


def _near_limit(B: float, amod: float, limit: int | None) -> int:
    n0 = max(1, int(math.ceil(B / amod)))
    if limit is not None:
        n0 = min(n0, limit)
    return n0


def _far_block(m: int, weight: int, q: int, a2, n0: int, limit: int | None, scale):
    """sum_{n0<n<=L} n^-weight * [asymptotic expansion of the n-th integral].

    ``a2`` is a^2 (complex) or -b^2 on lines; ``scale`` is a magnitude used in
    the stopping test.
    """
    if limit is not None and n0 >= limit:
        return mpf(0)
    eps = mpf(2) ** (-mp.prec)
    total = 0
    prev = None
    inv_a2 = 1 / a2
    # 1/(y^2 + c^2)^q = sum_k (-1)^k C(k+q-1, q-1) y^(2k) / c^(2k+2q)
    factor = inv_a2 ** q
    gamma = mpmath.factorial(m)  # Gamma(m + 2k + 1) at k = 0
    for k in range(0, 4000):
        s = weight + 2 * k + 2 * q
        zeta = hurwitz_zeta_mp(s, n0 + 1)
        if limit is not None:
            zeta -= hurwitz_zeta_mp(s, limit + 1)
        term = (-1) ** k * comb(k + q - 1, q - 1) * gamma * factor * zeta
        total += term
        size = abs(term)
        if size <= eps * max(abs(total), scale):
            return total
        if prev is not None and size > prev and k > 2:
            raise NonConvergence("far-block expansion diverged before reaching working precision")
        prev = size
        gamma *= (m + 2 * k + 1) * (m + 2 * k + 2)
        factor *= inv_a2
    raise NonConvergence("far-block expansion did not settle")


def _rel_tol():
    return mpf(10) ** (-(mp.dps - 3))


def sector_sum(m: int, weight: int, q: int, a, limit: int | None,
               scheme: PanelScheme = DEFAULT_SCHEME) -> SumPieces:
    """The n-sum for complex ``a`` (no pole on the positive real axis)."""
    a = mpc(a)
    a2 = a * a
    amod = float(abs(a))
    # poles at y = ±i n a; the one nearest the positive real axis governs accuracy
    poles = [mpc(0, 1) * a, mpc(0, -1) * a]
    right = [p for p in poles if p.real > 0]
    pole_sine = 1.0
    unit_pole = None
    if right:
        unit_pole = right[0]
        pole_sine = float(min(1, abs(unit_pole.imag) / abs(unit_pole)))
    B = crossover(m, amod, weight, q, pole_sine)
    n0 = _near_limit(B, amod, limit)

    coeffs = [(mpf(n) ** (-weight), n * n * a2) for n in range(1, n0 + 1)]
    breakpoints = []
    if unit_pole is not None and abs(unit_pole.imag) < unit_pole.real:
        breakpoints = [n * unit_pole.real for n in range(1, n0 + 1)]

    if q == 1:
        def kernel(y2):
            return sum(c / (y2 + d) for c, d in coeffs)
    else:
        def kernel(y2):
            acc = 0
            for c, d in coeffs:
                den = y2 + d
                acc += c / (den * den)
            return acc

    def integrand(y):
        return y ** m * mpmath.exp(-y) * kernel(y * y)

    scale = _magnitude_guess(m, weight, q, amod, n0)
    near = integrate_mp(integrand, scheme, abs_tol=scale * mpf(10) ** (-mp.dps),
                        rel_tol=_rel_tol(), extra_breakpoints=breakpoints)
    far = _far_block(m, weight, q, a2, n0, limit, scale)
    return SumPieces(near, far, n0, limit)


def _magnitude_guess(m, weight, q, amod, n0):
    total = mpf(0)
    for n in range(1, min(n0, 50) + 1):
        total += mpf(n) ** (-weight) * mpmath.factorial(m) / (mpf(m + 1) ** 2 + (n * amod) ** 2) ** q
    return total


def line_sum(m: int, weight: int, q: int, b, limit: int | None,
             scheme: PanelScheme = DEFAULT_SCHEME) -> SumPieces:
    """The n-sum with a pole at y = n b on the path: PV for q = 1, finite part for q = 2."""
    b = mpf(b)
    B = crossover(m, float(b), weight, q)
    n0 = _near_limit(B, float(b), limit)
    scale = _magnitude_guess(m, weight, q, float(b), n0)
    abs_tol = scale * mpf(10) ** (-mp.dps) / n0
    near = mpf(0)
    for n in range(1, n0 + 1):
        c = n * b
        near += mpf(n) ** (-weight) * _line_integral(m, q, c, scheme, abs_tol)
    far = _far_block(m, weight, q, -(b * b), n0, limit, scale)
    return SumPieces(near, far, n0, limit)


def _line_integral(m: int, q: int, c, scheme, abs_tol):
    """PV ∫ y^m e^-y / (y^2 - c^2) dy, or the Hadamard finite part of the square."""
    if q == 1:
        def regular(y):
            return y ** m * mpmath.exp(-y) / (y + c)
    else:
        # FP ∫ h/(y-c)^2 = -h(0)/c + PV ∫ h'/(y-c), with h = y^m e^-y / (y+c)^2
        def regular(y):
            base = mpmath.exp(-y) / (y + c) ** 2
            lead = y ** (m - 1) if m >= 1 else 1 / y
            return lead * base * (m - y - 2 * y / (y + c))

    def F(y):
        return regular(y) / (y - c)

    def mirrored(p, u):
        return (regular(p + u) - regular(p - u)) / u

    radius = max(mpf(1), c / 4)
    val = principal_value_mp(F, [c], scheme, mirrored=mirrored, abs_tol=abs_tol,
                             rel_tol=_rel_tol(), max_radius=radius)
    if q == 2 and m == 0:
        val += -(1 / (c * c)) / c  # -h(0)/c with h(0) = 1/c^2
    return mpc(val).real
