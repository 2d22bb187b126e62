"""Arbitrary-precision numeric contract.

Decimal digits are the public unit of precision.  Internally mpmath works in
bits, ``ceil(digits * log2(10)) + 8`` of them.  mpmath keeps its precision in
process-global state, so every entry point that computes wraps its work in
:func:`working_precision`, and values leave the library as immutable
:class:`HPComplex` records.
"""

from __future__ import annotations

import math
from contextlib import contextmanager
from dataclasses import dataclass, field
from decimal import Decimal
from fractions import Fraction
from typing import Iterator, Union

import mpmath
from mpmath import mp, mpc, mpf

MIN_PRECISION = 20
DEFAULT_DIGITS = 30
DEFAULT_GUARD = 20
DEFAULT_SERIES_LIMIT = 10_000

_LOG2_10 = math.log2(10)


def bits_for_digits(digits: int) -> int:
    return math.ceil(digits * _LOG2_10) + 8


@contextmanager
def working_precision(digits: int) -> Iterator[None]:
    """Run a block at ``digits`` decimal digits (restored afterwards)."""
    with mp.workprec(bits_for_digits(digits)):
        yield


def to_mpf(value) -> mpf:
    """Exact-as-possible conversion at the current working precision."""
    if isinstance(value, Fraction):
        return mpf(value.numerator) / value.denominator
    if isinstance(value, Decimal):
        return mpf(str(value))
    if isinstance(value, HPComplex):
        if value.im != 0:
            raise ValueError("value has a non-zero imaginary part")
        return +value.re
    return mpf(value)


def to_mpc(value) -> mpc:
    if isinstance(value, HPComplex):
        return mpc(value.re, value.im)
    if isinstance(value, (Fraction, Decimal)):
        return mpc(to_mpf(value))
    if isinstance(value, str):
        return mpc(mpmath.mpmathify(value.replace(" ", "").replace("i", "j")))
    return mpc(value)


Numeric = Union["HPComplex", int, float, str, Fraction, mpf, mpc]


@dataclass(frozen=True)
class HPComplex:
    """A complex number together with the decimal precision it was computed at.

    Binary operations run at the larger of the two precisions, and the result
    carries that precision.
    """

    re: mpf
    im: mpf
    precision: int = field(default=DEFAULT_DIGITS + DEFAULT_GUARD)

    def __post_init__(self) -> None:
        if int(self.precision) < MIN_PRECISION:
            raise ValueError(f"precision must be at least {MIN_PRECISION} digits")
        object.__setattr__(self, "precision", int(self.precision))
        with working_precision(self.precision):
            object.__setattr__(self, "re", to_mpf(self.re) if not isinstance(self.re, mpf) else self.re)
            object.__setattr__(self, "im", to_mpf(self.im) if not isinstance(self.im, mpf) else self.im)

    @classmethod
    def of(cls, value: Numeric, precision: int = DEFAULT_DIGITS + DEFAULT_GUARD) -> "HPComplex":
        if isinstance(value, HPComplex):
            return cls(value.re, value.im, max(precision, value.precision))
        with working_precision(precision):
            z = to_mpc(value)
            return cls(z.real, z.imag, precision)

    @classmethod
    def from_strings(cls, re: str, im: str = "0", precision: int | None = None) -> "HPComplex":
        """Parse decimal strings; precision defaults to enough for every digit given."""
        if precision is None:
            given = max(_significant_digits(re), _significant_digits(im))
            precision = max(MIN_PRECISION, given + 5)
        with working_precision(precision):
            return cls(mpf(re), mpf(im), precision)

    def to_mpc(self) -> mpc:
        return mpc(self.re, self.im)

    def _binary(self, other: Numeric, op) -> "HPComplex":
        other_prec = other.precision if isinstance(other, HPComplex) else self.precision
        prec = max(self.precision, other_prec)
        with working_precision(prec):
            z = op(self.to_mpc(), to_mpc(other))
            return HPComplex(z.real, z.imag, prec)

    def __add__(self, other):
        return self._binary(other, lambda a, b: a + b)

    def __radd__(self, other):
        return self._binary(other, lambda a, b: b + a)

    def __sub__(self, other):
        return self._binary(other, lambda a, b: a - b)

    def __rsub__(self, other):
        return self._binary(other, lambda a, b: b - a)

    def __mul__(self, other):
        return self._binary(other, lambda a, b: a * b)

    def __rmul__(self, other):
        return self._binary(other, lambda a, b: b * a)

    def __truediv__(self, other):
        return self._binary(other, lambda a, b: a / b)

    def __rtruediv__(self, other):
        return self._binary(other, lambda a, b: b / a)

    def __neg__(self):
        # unary minus on an mpf rounds to the ambient precision
        with working_precision(self.precision):
            return HPComplex(-self.re, -self.im, self.precision)

    def __abs__(self) -> mpf:
        with working_precision(self.precision):
            return abs(self.to_mpc())

    def conjugate(self) -> "HPComplex":
        with working_precision(self.precision):
            return HPComplex(self.re, -self.im, self.precision)

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def format(self, digits: int | None = None) -> tuple[str, str]:
        """Decimal strings for the real and imaginary parts."""
        digits = self.precision if digits is None else digits
        return format_decimal(self.re, digits), format_decimal(self.im, digits)

    def __str__(self) -> str:
        re, im = self.format(min(self.precision, 30))
        sign = "-" if im.startswith("-") else "+"
        return f"{re} {sign} {im.lstrip('-')}i"


def _significant_digits(text: str) -> int:
    mantissa = text.strip().lower().split("e")[0]
    digits = "".join(ch for ch in mantissa if ch.isdigit()).lstrip("0")
    return len(digits)


def format_decimal(x: mpf, digits: int) -> str:
    """``digits`` significant figures, plain or exponential notation as mpmath chooses."""
    prec = max(MIN_PRECISION, digits + 5)
    with working_precision(prec):
        return mpmath.nstr(mpf(x), digits, strip_zeros=False, min_fixed=-5, max_fixed=digits + 1)


@dataclass(frozen=True)
class PrecisionPolicy:
    """Target digits, guard digits, quadrature tolerance and series cutoff."""

    target_digits: int = DEFAULT_DIGITS
    guard_digits: int = DEFAULT_GUARD
    quad_abs_tol: mpf | None = None
    series_limit: int | None = DEFAULT_SERIES_LIMIT

    def __post_init__(self) -> None:
        if self.target_digits <= 0:
            raise ValueError("target_digits must be positive")
        if self.guard_digits < 0:
            raise ValueError("guard_digits must be non-negative")
        if self.series_limit is not None and self.series_limit < 100:
            raise ValueError("series_limit must be at least 100 (or None for no cutoff)")
        if self.quad_abs_tol is None:
            with working_precision(self.working_digits):
                object.__setattr__(self, "quad_abs_tol", mpf(10) ** (-self.working_digits))

    @property
    def working_digits(self) -> int:
        return self.target_digits + self.guard_digits

    def with_extra_digits(self, extra: int) -> "PrecisionPolicy":
        """Same target, more guard digits; the tolerance tracks the new precision."""
        return PrecisionPolicy(self.target_digits, self.guard_digits + max(0, extra),
                               None, self.series_limit)

    def with_limit(self, limit: int | None) -> "PrecisionPolicy":
        return PrecisionPolicy(self.target_digits, self.guard_digits, self.quad_abs_tol, limit)


def working_precision_for(policy: PrecisionPolicy, expected_cancellation: int) -> int:
    if expected_cancellation < 0:
        raise ValueError("expected_cancellation must be non-negative")
    return policy.target_digits + policy.guard_digits + expected_cancellation


def magnitude_decimal_digits(x: Numeric) -> int:
    """Number of decimal digits before the point: 0 when |x| < 1."""
    prec = x.precision if isinstance(x, HPComplex) else DEFAULT_DIGITS
    with working_precision(prec):
        r = abs(to_mpc(x))
        if not mpmath.isfinite(r):
            raise ValueError("magnitude of a non-finite value")
        if r < 1:
            return 0
        return int(mpmath.floor(mpmath.log10(r))) + 1


def matching_digits(computed: Numeric, expected: Numeric, digits: int = 60) -> float:
    """Relative agreement in decimal digits; ``inf`` for an exact match.

    Below unit magnitude the error is measured relative to ``|expected|``, so
    small remainders are compared by significant figures.
    """
    with working_precision(digits):
        a, b = to_mpc(computed), to_mpc(expected)
        err = abs(a - b)
        if err == 0:
            return math.inf
        scale = abs(b) if b != 0 else mpf(1)
        return float(-mpmath.log10(err / scale))


def absolute_digits(computed: Numeric, expected: Numeric, digits: int = 60) -> float:
    with working_precision(digits):
        err = abs(to_mpc(computed) - to_mpc(expected))
        return math.inf if err == 0 else float(-mpmath.log10(err))
