"""Coefficient families and the four hypergeometric functions as truncated series.

* ``F``      -- sum ((a)_k / k!)^s t^k
* ``F_dw``   -- Dwork's quotient F_a(t) / F_{a'}(t^p)
* ``F_log``  -- logarithmic type, numerator G with G_0 = s Psi(a) - log(c)/p
* ``F_hat``  -- numerator with coefficients B_k, built from t^a F and the
  Frobenius-twisted t^{a'} F_{a'}
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import lru_cache

from .padic_core import (
    NotIntegralError, PadicBall, PadicError, PrecisionError, RationalLike,
    _check_frobenius_constant, as_rational, branch_constants, is_p_integral,
    is_prime, log_over_p, pow_binomial, psi_gamma, reduce, valuation,
)
from .series import PowerSeries, frobenius_substitute, ps_invert, ps_mul

__all__ = [
    "HGParams", "CoeffTable", "dwork_prime", "dwork_orbit", "coeff_A",
    "a_table", "coeff_B", "coeff_G", "series_F", "series_F_prime_frobenius",
    "series_G_hat", "series_G_log", "fn_dwork", "fn_log", "fn_hat",
    "coeff_table", "default_length", "working_precision",
]


def default_length(p: int, n: int) -> int:
    return 2 * p ** n + 2 * p


def _ceil_log(x: int, p: int) -> int:
    k, pk = 0, 1
    while pk < x:
        pk *= p
        k += 1
    return k


def working_precision(p: int, n: int, a: Fraction, M: int) -> int:
    """n plus the worst valuation of any divisor k + a (k < M), plus 2 guard digits."""
    return n + _ceil_log(a.denominator * M + abs(a.numerator), p) + 2


@dataclass(frozen=True)
class HGParams:
    p: int
    a: Fraction
    s: int = 1
    c: Fraction = Fraction(1)
    n: int = 1
    M: int | None = None
    N_w: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "a", as_rational(self.a))
        object.__setattr__(self, "c", as_rational(self.c))
        if not is_prime(self.p):
            raise PadicError(f"p = {self.p} is not prime")
        if not is_p_integral(self.a, self.p):
            raise NotIntegralError(f"a = {self.a} is not {self.p}-integral")
        if self.a.denominator == 1 and self.a <= 0:
            raise PadicError(f"a = {self.a} is a non-positive integer")
        if self.s < 1:
            raise PadicError("s must be a positive integer")
        if self.n < 0:
            raise PadicError("n must be non-negative")
        _check_frobenius_constant(self.c, self.p)
        if self.M is None:
            object.__setattr__(self, "M", default_length(self.p, self.n))
        if self.M < 1:
            raise PadicError("series length M must be positive")
        if self.N_w is None:
            object.__setattr__(self, "N_w", working_precision(self.p, self.n, self.a, self.M))
        if self.N_w < self.n:
            raise PadicError("working precision must be at least n")

    @property
    def branch(self):
        return branch_constants(self.a, self.p)

    @property
    def a_prime(self) -> Fraction:
        return dwork_prime(self.a, self.p)

    @property
    def sign(self) -> int:
        """(-1)^{s e}."""
        return -1 if (self.s * self.branch.e) % 2 else 1

    def to_json(self) -> dict:
        return {"p": self.p, "a": str(self.a), "s": self.s, "c": str(self.c),
                "n": self.n, "M": self.M, "N_w": self.N_w}

    def replace(self, **changes) -> "HGParams":
        if "n" in changes or "M" in changes:
            changes.setdefault("N_w", None)
        if "n" in changes:
            changes.setdefault("M", None)
        return replace(self, **changes)


@dataclass
class CoeffTable:
    A: list[Fraction]
    A1: list[Fraction]
    B: list[PadicBall]
    G: list[PadicBall] = field(default_factory=list)


def dwork_prime(a: RationalLike, p: int) -> Fraction:
    a = as_rational(a)
    return (a + branch_constants(a, p).l) / p


def dwork_orbit(a: RationalLike, p: int, max_steps: int = 1000) -> tuple[list[Fraction], int | None]:
    """Iterate the Dwork prime; returns (orbit, period) with period None if not found."""
    a = as_rational(a)
    orbit = [a]
    x = a
    for step in range(1, max_steps + 1):
        x = dwork_prime(x, p)
        if x == a:
            return orbit, step
        orbit.append(x)
    return orbit, None


class _ATable:
    """Growable exact table of ((a)_k/k!)^s, shared per (a, s)."""

    def __init__(self, a: Fraction, s: int):
        self.a, self.s = a, s
        self.base = [Fraction(1)]
        self.values = [Fraction(1)]

    def extend(self, length: int) -> None:
        a, s = self.a, self.s
        while len(self.values) < length:
            k = len(self.values)
            nxt = self.base[-1] * (a + k - 1) / k
            self.base.append(nxt)
            self.values.append(nxt ** s)


_A_TABLES: dict[tuple[Fraction, int], _ATable] = {}


def a_table(a: RationalLike, s: int, length: int) -> list[Fraction]:
    """A_0 .. A_{length-1} as exact rationals."""
    a = as_rational(a)
    key = (a, s)
    table = _A_TABLES.get(key)
    if table is None:
        table = _A_TABLES[key] = _ATable(a, s)
    table.extend(length)
    return table.values[:length]


def coeff_A(a: RationalLike, s: int, k: int) -> Fraction:
    if k < 0:
        raise ValueError("k must be non-negative")
    return a_table(a, s, k + 1)[k]


@lru_cache(maxsize=512)
def _a_residues(a: Fraction, s: int, p: int, N: int, length: int) -> tuple[int, ...]:
    mod = p ** N
    out = []
    for k, x in enumerate(a_table(a, s, length)):
        if x.denominator % p == 0:
            raise NotIntegralError(f"A_{k} = {x} is not {p}-integral")
        out.append(x.numerator % mod * pow(x.denominator % mod, -1, mod) % mod if mod > 1 else 0)
    return tuple(out)


def _frob_power(c: Fraction, alpha: Fraction, p: int, N: int) -> PadicBall:
    if c == 1:
        return PadicBall(p, 1, N)
    return pow_binomial(c, alpha, p, N)


def coeff_B(a: RationalLike, s: int, c: RationalLike, p: int, k: int, N: int) -> PadicBall:
    """B_k computed at working precision N; result precision is N - v_p(k + a)."""
    a, c = as_rational(a), as_rational(c)
    br = branch_constants(a, p)
    sign = -1 if (s * br.e) % 2 else 1
    A_k = coeff_A(a, s, k)
    if (k - br.l) % p != 0:
        return reduce(A_k / (k + a), p, N)
    j = (k - br.l) // p
    alpha = (k + a) / p
    if not is_p_integral(alpha, p):
        raise NotIntegralError(f"exponent (k+a)/p = {alpha} is not {p}-integral")
    A1_j = coeff_A(dwork_prime(a, p), s, j)
    num = reduce(A_k, p, N) - _frob_power(c, alpha, p, N) * reduce(sign * A1_j, p, N)
    div = k + a
    try:
        return num / reduce(div, p, N + valuation(div, p))
    except NotIntegralError as exc:
        raise NotIntegralError(f"B_{k} is not p-integral") from exc


def coeff_G(a: RationalLike, s: int, c: RationalLike, p: int, k: int, N: int,
            psi_precision: int | None = None) -> PadicBall:
    """Coefficient of the logarithmic-type numerator G."""
    a, c = as_rational(a), as_rational(c)
    if k == 0:
        n0 = N if psi_precision is None else min(N, psi_precision)
        return psi_gamma(a, p, n0) * s - log_over_p(c, p, n0)
    A_k = reduce(coeff_A(a, s, k), p, N)
    if k % p == 0:
        j = k // p
        A1_j = coeff_A(dwork_prime(a, p), s, j)
        num_ = c.numerator ** j
        den_ = c.denominator ** j
        A_k = A_k - reduce(Fraction(num_, den_) * A1_j, p, N)
    return A_k / reduce(k, p, N + valuation(k, p))


def series_F(params: HGParams, a: RationalLike | None = None, length: int | None = None) -> PowerSeries:
    """F_{a,...,a}(t) to ``length`` (default M) coefficients at precision N_w."""
    a = params.a if a is None else as_rational(a)
    length = params.M if length is None else length
    res = _a_residues(a, params.s, params.p, params.N_w, length)
    return PowerSeries(params.p, res, (params.N_w,) * length)


def series_F_prime_frobenius(params: HGParams, length: int | None = None) -> PowerSeries:
    """F_{a'}(t^p) (Frobenius substitution with c = 1)."""
    length = params.M if length is None else length
    inner = series_F(params, params.a_prime, -(-length // params.p))
    return frobenius_substitute(inner, 1, length)


def _check_precision(coeffs: list[PadicBall], n: int, what: str) -> None:
    for k, b in enumerate(coeffs):
        if b.precision < n:
            raise PrecisionError(
                f"insufficient precision: {what}_{k} known to {b.precision} digits, need {n}; "
                "raise the working precision")


def series_G_hat(params: HGParams, length: int | None = None) -> PowerSeries:
    length = params.M if length is None else length
    coeffs = [coeff_B(params.a, params.s, params.c, params.p, k, params.N_w)
              for k in range(length)]
    _check_precision(coeffs, params.n, "B")
    return PowerSeries.from_balls(coeffs)


def series_G_log(params: HGParams, length: int | None = None,
                 psi_precision: int | None = None) -> PowerSeries:
    """Numerator of the logarithmic-type function.

    The constant term needs Psi(a), whose cost grows like p**(digits+1);
    it is computed to ``psi_precision`` digits (default n) instead of N_w.
    """
    length = params.M if length is None else length
    psi_n = params.n if psi_precision is None else psi_precision
    coeffs = [coeff_G(params.a, params.s, params.c, params.p, k, params.N_w, psi_n)
              for k in range(length)]
    _check_precision(coeffs, params.n, "G")
    return PowerSeries.from_balls(coeffs)


def fn_dwork(params: HGParams) -> PowerSeries:
    F = series_F(params)
    return ps_mul(F, ps_invert(series_F_prime_frobenius(params)))


def fn_log(params: HGParams) -> PowerSeries:
    return ps_mul(series_G_log(params), ps_invert(series_F(params)))


def fn_hat(params: HGParams) -> PowerSeries:
    return ps_mul(series_G_hat(params), ps_invert(series_F(params)))


def coeff_table(params: HGParams, with_log: bool = False) -> CoeffTable:
    M = params.M
    A = a_table(params.a, params.s, M)
    A1 = a_table(params.a_prime, params.s, M)
    B = list(series_G_hat(params).coeffs)
    G = list(series_G_log(params).coeffs) if with_log else []
    return CoeffTable(A=list(A), A1=list(A1), B=B, G=G)
