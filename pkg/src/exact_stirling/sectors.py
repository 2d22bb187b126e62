"""Exact classification of arg z into Stokes sectors, Stokes lines and MB domains.

Phases are rational multiples of pi, so every comparison with a line
``(M + 1/2) pi`` is an exact rational comparison.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import mpmath
from mpmath import mp, mpc, mpf

from .errors import DomainError


def _to_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, float):
        raise DomainError("floating-point inputs are ambiguous; pass a decimal string or Fraction")
    raise DomainError(f"cannot interpret {value!r} as an exact rational")


@dataclass(frozen=True)
class PolarArg:
    """z = modulus * exp(i pi theta), evaluated as z**power.

    ``theta`` is the phase in units of pi with |theta| <= 1; the effective
    phase ``power * theta`` may go beyond that.
    """

    modulus: Fraction
    theta: Fraction = Fraction(0)
    power: int = 1

    def __post_init__(self) -> None:
        mod = _to_fraction(self.modulus)
        th = _to_fraction(self.theta)
        if mod <= 0:
            raise DomainError("modulus must be positive")
        if abs(th) > 1:
            raise DomainError("theta must lie in [-1, 1] (units of pi)")
        if not isinstance(self.power, int) or self.power < 1:
            raise DomainError("power must be a positive integer")
        object.__setattr__(self, "modulus", mod)
        object.__setattr__(self, "theta", th)

    @classmethod
    def from_parts(cls, modulus, theta_num: int, theta_den: int = 1, power: int = 1) -> "PolarArg":
        if theta_den <= 0:
            raise DomainError("theta denominator must be positive")
        return cls(_to_fraction(modulus), Fraction(theta_num, theta_den), power)

    @property
    def theta_num(self) -> int:
        return self.theta.numerator

    @property
    def theta_den(self) -> int:
        return self.theta.denominator

    @property
    def phase(self) -> Fraction:
        """Accumulated phase of z**power in units of pi."""
        return self.power * self.theta

    @property
    def principal_phase(self) -> Fraction:
        """Phase of z**power folded into (-1, 1]."""
        ph = self.phase
        k = math.floor((ph + 1) / 2)
        ph = ph - 2 * k
        if ph == -1:
            ph = Fraction(1)
        return ph

    @property
    def effective_modulus(self) -> Fraction:
        return self.modulus ** self.power

    def conjugate(self) -> "PolarArg":
        return PolarArg(self.modulus, -self.theta, self.power)

    def with_theta(self, theta) -> "PolarArg":
        return PolarArg(self.modulus, _to_fraction(theta), self.power)

    # mpmath values at the current working precision

    def modulus_mp(self) -> mpf:
        return mpf(self.modulus.numerator) / self.modulus.denominator

    def theta_mp(self) -> mpf:
        return mp.pi * self.theta.numerator / self.theta.denominator

    def effective_modulus_mp(self) -> mpf:
        m = self.effective_modulus
        return mpf(m.numerator) / m.denominator

    def z_mp(self) -> mpc:
        r = self.modulus_mp()
        t = mpf(self.theta.numerator) / self.theta.denominator
        return mpc(r * mpmath.cospi(t), r * mpmath.sinpi(t))

    def w_mp(self) -> mpc:
        """The value of z**power (single-valued)."""
        r = self.effective_modulus_mp()
        t = mpf(self.phase.numerator) / self.phase.denominator
        return mpc(r * mpmath.cospi(t), r * mpmath.sinpi(t))

    def label(self) -> str:
        th = "0" if self.theta == 0 else f"{self.theta}pi"
        base = f"|z|={self.modulus}, theta={th}"
        return base if self.power == 1 else base + f", p={self.power}"


class Engine(enum.Enum):
    BOREL = "Borel"
    MB = "MB"


class LineCase(enum.Enum):
    NOT_ON_LINE = "NotOnLine"
    LOWER_LINE = "LowerLine"
    UPPER_LINE = "UpperLine"


@dataclass(frozen=True)
class SectorInfo:
    engine: Engine
    M: int
    sign: int
    on_line: bool
    secondary_M: Optional[int] = None

    @property
    def signed_M(self) -> int:
        return self.sign * self.M

    def admissible(self) -> tuple[int, ...]:
        """Signed domain indices, first the primary one."""
        if self.secondary_M is None:
            return (self.signed_M,)
        return (self.signed_M, self.secondary_M)


def classify_borel(arg: PolarArg) -> SectorInfo:
    """Stokes sector ``(M - 1/2) pi < |p theta| < (M + 1/2) pi`` or line ``|p theta| = (M + 1/2) pi``."""
    ph = arg.phase
    sign = -1 if ph < 0 else 1
    mag = abs(ph)
    twice = 2 * mag
    if twice.denominator == 1 and twice.numerator % 2 == 1:
        return SectorInfo(Engine.BOREL, int(mag - Fraction(1, 2)), sign, True)
    M = math.floor(mag + Fraction(1, 2))
    return SectorInfo(Engine.BOREL, M, sign, False)


def classify_mb(arg: PolarArg) -> SectorInfo:
    """MB domains ``(M - 1) pi < p theta < (M + 1) pi`` containing the phase.

    Between consecutive multiples of pi two domains overlap; the one with the
    smaller |M| is reported first.  At an exact multiple of pi only one applies.
    """
    ph = arg.phase
    if ph.denominator == 1:
        M = int(ph)
        sign = -1 if M < 0 else 1
        return SectorInfo(Engine.MB, abs(M), sign, False)
    lo = math.floor(ph)
    candidates = sorted((lo, lo + 1), key=lambda m: (abs(m), m))
    first, second = candidates
    sign = -1 if (first < 0 or (first == 0 and ph < 0)) else 1
    on_line = (2 * ph).denominator == 1
    return SectorInfo(Engine.MB, abs(first), sign, on_line, second)


def mb_line_case(arg: PolarArg, M: int) -> LineCase:
    """Which half-integer line of domain M the phase sits on, if any."""
    ph = arg.phase
    if not (M - 1 < ph < M + 1):
        raise DomainError(f"M = {M} is not a domain of convergence for phase {ph} pi")
    if (2 * ph).denominator != 1 or ph.denominator == 1:
        return LineCase.NOT_ON_LINE
    if abs(ph) == abs(M) - Fraction(1, 2):
        return LineCase.LOWER_LINE
    return LineCase.UPPER_LINE
