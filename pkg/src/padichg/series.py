"""Truncated power series and finite Laurent polynomials over p-adic balls.

A :class:`PowerSeries` stores residues and per-coefficient precisions.
Coefficients at degrees ``>= len(f)`` are *unknown* unless the series is
flagged as a polynomial, in which case they are exactly zero.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import accumulate
from typing import Iterable, Mapping, Sequence

from . import kernels
from .padic_core import (
    NotIntegralError, PadicBall, PadicError, PrecisionError, RationalLike,
    _check_frobenius_constant, as_rational, reduce, valuation,
)

__all__ = [
    "PowerSeries", "LaurentPoly", "ps_mul", "ps_add", "ps_sub", "ps_invert",
    "truncate_below", "frobenius_substitute", "integrate_dlog",
    "omega_invert", "laurent_mul", "laurent_add",
]


def _prefix_min(precs: Sequence[int]) -> list[int]:
    return list(accumulate(precs, min))


@dataclass(frozen=True)
class PowerSeries:
    p: int
    residues: tuple[int, ...]
    precisions: tuple[int, ...]
    polynomial: bool = False

    def __post_init__(self):
        if len(self.residues) != len(self.precisions):
            raise ValueError("residues and precisions differ in length")
        if not self.residues:
            raise ValueError("a power series needs at least one coefficient")
        norm = tuple(r % self.p ** n for r, n in zip(self.residues, self.precisions))
        object.__setattr__(self, "residues", norm)

    @classmethod
    def from_balls(cls, balls: Iterable[PadicBall], polynomial: bool = False) -> "PowerSeries":
        balls = list(balls)
        if not balls:
            raise ValueError("a power series needs at least one coefficient")
        p = balls[0].p
        if any(b.p != p for b in balls):
            raise PadicError("prime mismatch among coefficients")
        return cls(p, tuple(b.residue for b in balls),
                   tuple(b.precision for b in balls), polynomial)

    @classmethod
    def from_rationals(cls, values: Iterable[RationalLike], p: int, N: int,
                       polynomial: bool = False) -> "PowerSeries":
        return cls.from_balls((reduce(v, p, N) for v in values), polynomial)

    @classmethod
    def from_residues(cls, residues: Iterable[int], p: int, N: int,
                      polynomial: bool = False) -> "PowerSeries":
        residues = tuple(residues)
        return cls(p, residues, (N,) * len(residues), polynomial)

    def __len__(self) -> int:
        return len(self.residues)

    def __getitem__(self, k: int) -> PadicBall:
        if k < 0:
            raise IndexError(k)
        if k >= len(self):
            if self.polynomial:
                return PadicBall(self.p, 0, self.precision)
            raise PrecisionError(f"coefficient of t^{k} is unknown (length {len(self)})")
        return PadicBall(self.p, self.residues[k], self.precisions[k])

    @property
    def coeffs(self) -> list[PadicBall]:
        return [self[k] for k in range(len(self))]

    @property
    def precision(self) -> int:
        return min(self.precisions)

    @property
    def modulus(self) -> int:
        return self.p ** max(self.precisions)

    def extended(self, length: int) -> "PowerSeries":
        """Pad a polynomial with exact zeros (or cut any series) to ``length``."""
        if length <= len(self):
            return PowerSeries(self.p, self.residues[:length], self.precisions[:length],
                               self.polynomial and length == len(self))
        if not self.polynomial:
            raise PrecisionError(f"insufficient coefficients: have {len(self)}, need {length}")
        pad = length - len(self)
        return PowerSeries(self.p, self.residues + (0,) * pad,
                           self.precisions + (self.precision,) * pad, True)

    def with_precision(self, n: int) -> "PowerSeries":
        if n > self.precision:
            raise PrecisionError(f"series only known to {self.precision} digits, {n} requested")
        return PowerSeries(self.p, self.residues, (n,) * len(self), self.polynomial)

    def perturbed(self, k: int, delta: int) -> "PowerSeries":
        if not 0 <= k < len(self):
            raise PadicError(f"fault index {k} lies outside the series (length {len(self)})")
        res = list(self.residues)
        res[k] += delta
        return PowerSeries(self.p, tuple(res), self.precisions, self.polynomial)

    def to_json(self) -> dict:
        return {"p": self.p, "precision": self.precision,
                "polynomial": self.polynomial, "coeffs": list(self.residues)}


def _check_same_prime(f, g):
    if f.p != g.p:
        raise PadicError(f"prime mismatch: {f.p} vs {g.p}")


def _result_length(f: PowerSeries, g: PowerSeries) -> tuple[int, bool]:
    if f.polynomial and g.polynomial:
        return len(f) + len(g) - 1, True
    if f.polynomial:
        return len(g), False
    if g.polynomial:
        return len(f), False
    return min(len(f), len(g)), False


def _precisions_for(f: PowerSeries, length: int) -> list[int]:
    pm = _prefix_min(f.precisions)
    return [pm[min(k, len(pm) - 1)] for k in range(length)]


def ps_mul(f: PowerSeries, g: PowerSeries, length: int | None = None) -> PowerSeries:
    """Cauchy product, truncated to the length both operands support."""
    _check_same_prime(f, g)
    out_len, poly = _result_length(f, g)
    if length is not None:
        if length > out_len and not poly:
            raise PrecisionError(f"insufficient coefficients for length {length}")
        poly = poly and length >= out_len
        out_len = length
    mod = max(f.modulus, g.modulus)
    res = kernels.mul_trunc(list(f.residues), list(g.residues), out_len, mod)
    pf, pg = _precisions_for(f, out_len), _precisions_for(g, out_len)
    precs = tuple(min(a, b) for a, b in zip(pf, pg))
    return PowerSeries(f.p, tuple(res), precs, poly)


def _elementwise(f: PowerSeries, g: PowerSeries, sign: int) -> PowerSeries:
    _check_same_prime(f, g)
    out_len, poly = (max(len(f), len(g)), True) if f.polynomial and g.polynomial else \
        (min(len(x) for x in (f, g) if not x.polynomial), False)
    fe, ge = f.extended(out_len), g.extended(out_len)
    res = tuple(a + sign * b for a, b in zip(fe.residues, ge.residues))
    precs = tuple(min(a, b) for a, b in zip(fe.precisions, ge.precisions))
    return PowerSeries(f.p, res, precs, poly)


def ps_add(f: PowerSeries, g: PowerSeries) -> PowerSeries:
    return _elementwise(f, g, 1)


def ps_sub(f: PowerSeries, g: PowerSeries) -> PowerSeries:
    return _elementwise(f, g, -1)


def ps_invert(f: PowerSeries, length: int | None = None) -> PowerSeries:
    """Multiplicative inverse; a polynomial argument needs an explicit length."""
    if f.residues[0] % f.p == 0 or f.precisions[0] == 0:
        raise PadicError("not invertible: constant term is not a unit")
    if length is None:
        if f.polynomial:
            raise ValueError("inverting a polynomial needs an explicit output length")
        length = len(f)
    elif length > len(f) and not f.polynomial:
        raise PrecisionError(f"insufficient coefficients: have {len(f)}, need {length}")
    res = kernels.inv_trunc(list(f.residues[:length]), length, f.modulus)
    return PowerSeries(f.p, tuple(res), tuple(_precisions_for(f, length)), False)


def truncate_below(f: PowerSeries, m: int) -> PowerSeries:
    """The polynomial ``f(t)_{<m}``: coefficients below m, exact zeros above."""
    if m > len(f):
        raise PrecisionError(f"insufficient coefficients: have {len(f)}, need {m}")
    if m <= 0:
        raise ValueError("truncation order must be positive")
    return PowerSeries(f.p, f.residues[:m], f.precisions[:m], True)


def frobenius_substitute(f: PowerSeries, c: RationalLike, length: int | None = None) -> PowerSeries:
    """``f(t) -> f(c t^p)`` for coefficients in Z_p (Frobenius acts trivially)."""
    c = as_rational(c)
    p = f.p
    _check_frobenius_constant(c, p)
    full = p * (len(f) - 1) + 1 if f.polynomial else p * len(f)
    out_len = full if length is None else length
    if out_len > full and not f.polynomial:
        raise PrecisionError(f"f^sigma known only to length {full}")
    poly = f.polynomial and out_len >= full
    res = [0] * out_len
    precs = [f.precision if f.polynomial else 0] * out_len
    zero_prec = _prefix_min(f.precisions)
    ci_num = 1
    ci_den = 1
    for i in range((out_len + p - 1) // p):
        if i >= len(f):
            break
        N = f.precisions[i]
        mod = p ** N
        ci = ci_num * pow(ci_den, -1, mod) if mod > 1 else 0
        res[i * p] = f.residues[i] * ci
        precs[i * p] = N
        for j in range(i * p + 1, min(i * p + p, out_len)):
            precs[j] = zero_prec[i]
        ci_num *= c.numerator
        ci_den *= c.denominator
    return PowerSeries(p, tuple(res), tuple(precs), poly)


def integrate_dlog(f: PowerSeries) -> PowerSeries:
    """Termwise ``t^k -> t^k / k``; the constant term must vanish."""
    if f.residues[0] != 0:
        raise PadicError("dlog integral undefined: nonzero constant term")
    balls = [PadicBall(f.p, 0, f.precisions[0])]
    for k in range(1, len(f)):
        try:
            balls.append(f[k] / reduce(k, f.p, f.precisions[k] + valuation(k, f.p)))
        except NotIntegralError as exc:
            raise NotIntegralError(f"coefficient of t^{k} divided by {k} is not p-integral") from exc
    return PowerSeries.from_balls(balls, f.polynomial)


@dataclass(frozen=True)
class LaurentPoly:
    """Finitely supported Laurent polynomial; absent degrees are exact zeros."""

    p: int
    coeffs: Mapping[int, PadicBall]

    def __post_init__(self):
        if any(b.p != self.p for b in self.coeffs.values()):
            raise PadicError("prime mismatch among coefficients")
        object.__setattr__(self, "coeffs", dict(sorted(self.coeffs.items())))

    @classmethod
    def from_series(cls, f: PowerSeries, shift: int = 0) -> "LaurentPoly":
        if not f.polynomial:
            raise PrecisionError("only polynomial series embed exactly into Laurent polynomials")
        return cls(f.p, {k + shift: f[k] for k in range(len(f))})

    @classmethod
    def monomial(cls, p: int, degree: int, coeff: int, precision: int) -> "LaurentPoly":
        return cls(p, {degree: PadicBall(p, coeff, precision)})

    def __getitem__(self, d: int) -> PadicBall | None:
        return self.coeffs.get(d)

    @property
    def degrees(self) -> list[int]:
        return list(self.coeffs)

    @property
    def precision(self) -> int | None:
        return min((b.precision for b in self.coeffs.values()), default=None)

    def support(self) -> list[int]:
        return [d for d, b in self.coeffs.items() if b.residue != 0]

    def scaled(self, k: int) -> "LaurentPoly":
        return LaurentPoly(self.p, {d: PadicBall(self.p, b.residue * k, b.precision)
                                    for d, b in self.coeffs.items()})

    def reduced(self, n: int) -> "LaurentPoly":
        return LaurentPoly(self.p, {d: b.with_precision(n) for d, b in self.coeffs.items()})

    def to_json(self) -> dict:
        lo = min(self.coeffs, default=0)
        hi = max(self.coeffs, default=-1)
        dense = [self.coeffs[d].residue if d in self.coeffs else 0 for d in range(lo, hi + 1)]
        return {"p": self.p, "precision": self.precision, "offset": lo, "coeffs": dense}


def omega_invert(f: LaurentPoly) -> LaurentPoly:
    """The involution t -> 1/t."""
    return LaurentPoly(f.p, {-d: b for d, b in f.coeffs.items()})


def laurent_add(f: LaurentPoly, g: LaurentPoly) -> LaurentPoly:
    _check_same_prime(f, g)
    out = dict(f.coeffs)
    for d, b in g.coeffs.items():
        out[d] = out[d] + b if d in out else b
    return LaurentPoly(f.p, out)


def laurent_mul(f: LaurentPoly, g: LaurentPoly) -> LaurentPoly:
    """Exact product over the finite supports."""
    _check_same_prime(f, g)
    if not f.coeffs or not g.coeffs:
        return LaurentPoly(f.p, {})
    flo, fhi = min(f.coeffs), max(f.coeffs)
    glo, ghi = min(g.coeffs), max(g.coeffs)
    fd = [f.coeffs[d].residue if d in f.coeffs else 0 for d in range(flo, fhi + 1)]
    gd = [g.coeffs[d].residue if d in g.coeffs else 0 for d in range(glo, ghi + 1)]
    prec = min(f.precision, g.precision)
    length = len(fd) + len(gd) - 1
    res = kernels.mul_trunc(fd, gd, length, f.p ** prec)
    return LaurentPoly(f.p, {flo + glo + k: PadicBall(f.p, r, prec) for k, r in enumerate(res)})
