"""Exact rationals, p-adic valuations and precision-tracked p-adic balls.

Also hosts the three transcendental primitives used by the hypergeometric
coefficients: the binomial power ``c**alpha``, the Iwasawa logarithm on
``1 + pZ_p`` and the digamma combination ``Psi = psi_p + gamma_p``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Union

from . import kernels

Rational = Fraction
RationalLike = Union[int, Fraction, str]

__all__ = [
    "Rational", "PadicError", "NotIntegralError", "PrecisionError",
    "FrobeniusConstantError", "PadicBall", "BranchConstants",
    "parse_rational", "as_rational", "is_prime", "valuation",
    "is_p_integral", "reduce", "ball_combine", "branch_constants",
    "frobenius_modulus", "pow_binomial", "iwasawa_log_unit",
    "log_over_p", "psi_gamma", "harmonic_guard",
]


class PadicError(ValueError):
    """Base class for every arithmetic failure raised by this package."""


class NotIntegralError(PadicError):
    pass


class PrecisionError(PadicError):
    """Raised when a computation cannot certify the requested digits."""


class FrobeniusConstantError(PadicError):
    pass


_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$")


def parse_rational(text: str) -> Fraction:
    """Parse ``"n"`` or ``"n/d"`` into a canonical :class:`Fraction`."""
    m = _RATIONAL_RE.match(text)
    if m is None:
        raise ValueError(f"not a rational number: {text!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return Fraction(num, den)


def as_rational(x: RationalLike) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return parse_rational(x)
    raise TypeError(f"cannot interpret {type(x).__name__} as a rational")


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


def _vp_int(n: int, p: int) -> int:
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def valuation(x: RationalLike, p: int) -> int:
    """p-adic valuation of a nonzero rational."""
    x = as_rational(x)
    if x == 0:
        raise PadicError("infinite valuation: x = 0")
    return _vp_int(x.numerator, p) - _vp_int(x.denominator, p)


def is_p_integral(x: RationalLike, p: int) -> bool:
    return as_rational(x).denominator % p != 0


@dataclass(frozen=True)
class PadicBall:
    """An element of Z_p known modulo ``p**precision``.

    ``residue`` is always normalised into ``[0, p**precision)``.
    """

    p: int
    residue: int
    precision: int

    def __post_init__(self):
        if self.precision < 0:
            raise PadicError("negative precision")
        object.__setattr__(self, "residue", self.residue % self.modulus)

    @property
    def modulus(self) -> int:
        return self.p ** self.precision

    @classmethod
    def exact_int(cls, value: int, p: int, precision: int) -> "PadicBall":
        return cls(p, value, precision)

    def valuation(self) -> int:
        """Valuation of the residue, capped at ``precision`` when it reads 0."""
        if self.residue == 0:
            return self.precision
        return _vp_int(self.residue, self.p)

    def is_zero(self) -> bool:
        return self.residue == 0

    def with_precision(self, precision: int) -> "PadicBall":
        if precision > self.precision:
            raise PrecisionError(
                f"cannot raise precision from {self.precision} to {precision}")
        return PadicBall(self.p, self.residue, precision)

    def digits(self) -> list[int]:
        """Base-p digits, least significant first, one per known digit."""
        r = self.residue
        out = []
        for _ in range(self.precision):
            r, d = divmod(r, self.p)
            out.append(d)
        return out

    def congruent(self, other: "PadicBall | int | Fraction", n: int) -> bool:
        """True if self and other agree modulo p**n (n must be covered)."""
        if isinstance(other, PadicBall):
            if n > min(self.precision, other.precision):
                raise PrecisionError(f"congruence mod p^{n} not covered")
            other_res = other.residue
        else:
            if n > self.precision:
                raise PrecisionError(f"congruence mod p^{n} not covered")
            other_res = reduce(other, self.p, n).residue
        return (self.residue - other_res) % self.p ** n == 0

    def _coerce(self, other) -> "PadicBall":
        if isinstance(other, PadicBall):
            if other.p != self.p:
                raise PadicError(f"prime mismatch: {self.p} vs {other.p}")
            return other
        if isinstance(other, (int, Fraction)):
            return reduce(other, self.p, self.precision)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return ball_combine("add", self, other)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return ball_combine("sub", self, other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return ball_combine("sub", other, self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return ball_combine("mul", self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return ball_combine("div", self, other)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return ball_combine("div", other, self)

    def __neg__(self):
        return PadicBall(self.p, -self.residue, self.precision)

    def __repr__(self):
        return f"PadicBall({self.residue} mod {self.p}^{self.precision})"


def reduce(x: RationalLike, p: int, N: int) -> PadicBall:
    """Reduce a p-integral rational modulo ``p**N``."""
    x = as_rational(x)
    if x.denominator % p == 0:
        raise NotIntegralError(f"{x} is not {p}-integral")
    mod = p ** N
    if mod == 1:
        return PadicBall(p, 0, N)
    res = x.numerator % mod * pow(x.denominator % mod, -1, mod)
    return PadicBall(p, res, N)


def ball_combine(op: str, x: PadicBall, y: PadicBall) -> PadicBall:
    """Combine two balls; precision follows the pessimistic min rule."""
    if x.p != y.p:
        raise PadicError(f"prime mismatch: {x.p} vs {y.p}")
    p = x.p
    prec = min(x.precision, y.precision)
    if op == "add":
        return PadicBall(p, x.residue + y.residue, prec)
    if op == "sub":
        return PadicBall(p, x.residue - y.residue, prec)
    if op == "mul":
        return PadicBall(p, x.residue * y.residue, prec)
    if op != "div":
        raise ValueError(f"unknown operation {op!r}")
    v = y.valuation()
    if v >= y.precision:
        raise PrecisionError("insufficient precision: divisor is 0 to its known precision")
    prec -= v
    if prec < 0:
        raise PrecisionError("insufficient precision in dividend")
    pv = p ** v
    # dividend known mod p^min(...), so only its low v digits must vanish
    if x.residue % pv != 0:
        raise NotIntegralError("quotient is not p-integral")
    mod = p ** prec
    unit = (y.residue // pv) % mod
    res = (x.residue // pv) * pow(unit, -1, mod) % mod if mod > 1 else 0
    return PadicBall(p, res, prec)


@dataclass(frozen=True)
class BranchConstants:
    l: int
    q: int
    l_prime: int
    e: int


def _residue_mod(x: Fraction, m: int) -> int:
    return x.numerator * pow(x.denominator, -1, m) % m


def branch_constants(a: RationalLike, p: int) -> BranchConstants:
    """l, q, l' and e for a p-integral parameter ``a``."""
    a = as_rational(a)
    if not is_p_integral(a, p):
        raise NotIntegralError(f"{a} is not {p}-integral")
    q = 4 if p == 2 else p
    l = -_residue_mod(a, p) % p
    l_prime = -_residue_mod(a, q) % q
    return BranchConstants(l=l, q=q, l_prime=l_prime, e=l_prime - l_prime // p)


def frobenius_modulus(p: int) -> int:
    """Minimal valuation of ``c - 1`` for a Frobenius constant c."""
    return 2 if p == 2 else 1


def _check_frobenius_constant(c: Fraction, p: int) -> int:
    if not is_p_integral(c, p):
        raise FrobeniusConstantError(f"c = {c} is not {p}-integral")
    x = c - 1
    v = valuation(x, p) if x != 0 else None
    if v is not None and v < frobenius_modulus(p):
        q = 4 if p == 2 else p
        raise FrobeniusConstantError(f"invalid Frobenius constant: c = {c} is not 1 mod {q}")
    return v


@lru_cache(maxsize=65536)
def _pow_binomial_cached(c: Fraction, alpha: Fraction, p: int, N: int) -> int:
    x = c - 1
    v = valuation(x, p)
    total = Fraction(1)
    term = Fraction(1)
    i = 0
    # binom(alpha, i) is p-integral, so term i has valuation >= i*v
    while (i + 1) * v < N:
        term = term * (alpha - i) / (i + 1) * x
        total += term
        i += 1
    return reduce(total, p, N).residue


def pow_binomial(c: RationalLike, alpha: RationalLike, p: int, N: int) -> PadicBall:
    """``c**alpha`` through the binomial series in ``c - 1``."""
    c, alpha = as_rational(c), as_rational(alpha)
    v = _check_frobenius_constant(c, p)
    if not is_p_integral(alpha, p):
        raise NotIntegralError(f"exponent {alpha} is not {p}-integral")
    if v is None or N == 0:
        return PadicBall(p, 1, N)
    return PadicBall(p, _pow_binomial_cached(c, alpha, p, N), N)


@lru_cache(maxsize=4096)
def _log_sum(c: Fraction, p: int, target: int) -> Fraction:
    x = c - 1
    v = valuation(x, p)
    total = Fraction(0)
    power = Fraction(1)
    i = 1
    # i*v - floor(log_p i) is non-decreasing, so the first index reaching
    # the target bounds every later term as well
    while True:
        power *= x
        total += power / i if i % 2 else -power / i
        i += 1
        if i * v - (len(_digits(i, p)) - 1) >= target:
            return total


def _digits(n: int, p: int) -> list[int]:
    out = []
    while n:
        n, d = divmod(n, p)
        out.append(d)
    return out


def iwasawa_log_unit(c: RationalLike, p: int, N: int) -> PadicBall:
    """log(c) for c in 1 + qZ_p, known to ``N + 1`` digits."""
    c = as_rational(c)
    v = _check_frobenius_constant(c, p)
    if v is None:
        return PadicBall(p, 0, N + 1)
    return reduce(_log_sum(c, p, N + 1), p, N + 1)


def log_over_p(c: RationalLike, p: int, N: int) -> PadicBall:
    """``log(c) / p`` to N digits (log c is divisible by p)."""
    c = as_rational(c)
    v = _check_frobenius_constant(c, p)
    if v is None:
        return PadicBall(p, 0, N)
    return reduce(_log_sum(c, p, N + 1) / p, p, N)


def harmonic_guard(p: int) -> int:
    return 2 if p == 2 else 1


@lru_cache(maxsize=4096)
def _psi_residue(a: Fraction, p: int, N: int) -> int:
    K = N + harmonic_guard(p)
    mod_k = p ** K
    m = _residue_mod(a - 1, mod_k)
    return kernels.harmonic_mod(m, p, p ** N)


def psi_gamma(a: RationalLike, p: int, N: int) -> PadicBall:
    """``psi_p(a) + gamma_p`` as the p-adic limit of prime-to-p harmonic sums.

    Uses ``H(m) = sum(1/k for 1 <= k <= m, p not dividing k)`` at the
    representative ``0 <= m < p**(N+g)`` of ``a - 1``.
    """
    a = as_rational(a)
    if not is_p_integral(a, p):
        raise NotIntegralError(f"{a} is not {p}-integral")
    if N == 0:
        return PadicBall(p, 0, 0)
    return PadicBall(p, _psi_residue(a, p, N), N)
