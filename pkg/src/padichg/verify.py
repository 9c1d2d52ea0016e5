"""Residue-level checkers for the congruence relations, lemmas and transformations.

Every checker returns a :class:`VerifyReport`.  A :class:`Fault` injects a
perturbation of ``multiple * p**(n-1)`` into one input on the left-hand
path only; a sound checker must then fail.
"""
from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .hypergeom import (
    HGParams, a_table, coeff_A, coeff_B, dwork_orbit, series_F,
    series_F_prime_frobenius, series_G_hat, series_G_log,
)
from .padic_core import (
    PadicBall, PadicError, as_rational, branch_constants, psi_gamma, reduce,
    valuation,
)
from .series import (
    LaurentPoly, PowerSeries, laurent_add, laurent_mul, omega_invert,
    ps_invert, ps_mul, truncate_below,
)

__all__ = [
    "Fault", "VerifyReport", "CHECKS", "run_check", "is_theorem_instance",
    "check_congruence_hat", "check_congruence_dwork", "check_congruence_log",
    "check_trunc_factorization", "check_lipschitz", "check_blal", "check_sm",
    "check_reflection_unit", "check_transform_log", "check_transform_dwork",
    "example_mod_p_residual", "lipschitz_pairs",
]


@dataclass(frozen=True)
class Fault:
    """Perturb the ``index``-th tested input by ``multiple * p**(n-1)``."""

    index: int = 0
    multiple: int = 1


@dataclass
class VerifyReport:
    check: str
    params: dict
    passed: bool
    modulus: int
    degrees_checked: object
    first_failure: dict | None = None
    conjectural: bool = False
    elapsed_ms: float = 0.0
    details: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.passed != (self.first_failure is None):
            raise ValueError("pass must hold exactly when there is no failure")

    def to_json(self, with_timing: bool = True) -> dict:
        out = {
            "check": self.check,
            "params": self.params,
            "pass": self.passed,
            "conjectural": self.conjectural,
            "modulus": self.modulus,
            "degrees_checked": self.degrees_checked,
            "first_failure": self.first_failure,
        }
        if self.details:
            out["details"] = self.details
        if with_timing:
            out["elapsed_ms"] = round(self.elapsed_ms, 3)
        return out


def _timed(fn: Callable[..., VerifyReport]) -> Callable[..., VerifyReport]:
    def wrapper(*args, **kwargs):
        t0 = time.perf_counter()
        report = fn(*args, **kwargs)
        report.elapsed_ms = (time.perf_counter() - t0) * 1000.0
        return report
    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    wrapper.__wrapped__ = fn
    return wrapper


def _fault_delta(fault: Fault | None, p: int, n: int) -> int:
    if fault is None:
        return 0
    if n < 1:
        raise PadicError("fault injection needs n >= 1")
    return fault.multiple * p ** (n - 1)


def _first_series_mismatch(lhs: PowerSeries, rhs: PowerSeries, n: int, length: int) -> dict | None:
    mod = lhs.p ** n
    for k in range(length):
        x, y = lhs[k], rhs[k]
        if min(x.precision, y.precision) < n:
            raise PadicError(f"coefficient {k} known only to {min(x.precision, y.precision)} digits")
        if (x.residue - y.residue) % mod:
            return {"degree": k, "lhs": x.residue % mod, "rhs": y.residue % mod}
    return None


def _congruence(name: str, params: HGParams, numerator: PowerSeries,
                denominator: PowerSeries, full_numerator: PowerSeries,
                full_denominator: PowerSeries) -> VerifyReport:
    p, n, M = params.p, params.n, params.M
    pn = p ** n
    if M < pn:
        raise PadicError(f"series length M = {M} is below p^n = {pn}")
    lhs = ps_mul(full_numerator, ps_invert(full_denominator))
    rhs = ps_mul(truncate_below(numerator, pn),
                 ps_invert(truncate_below(denominator, pn), M), M)
    failure = _first_series_mismatch(lhs, rhs, n, M)
    return VerifyReport(name, params.to_json(), failure is None, pn, [0, M - 1], failure)


@_timed
def check_congruence_hat(params: HGParams, fault: Fault | None = None) -> VerifyReport:
    """F_hat against G_hat(t)_{<p^n} / F(t)_{<p^n} mod p^n; faults hit B_index."""
    G = series_G_hat(params)
    F = series_F(params)
    full = G.perturbed(fault.index, _fault_delta(fault, params.p, params.n)) if fault else G
    return _congruence("hat", params, G, F, full, F)


@_timed
def check_congruence_dwork(params: HGParams, fault: Fault | None = None) -> VerifyReport:
    """Dwork's congruence; faults hit the denominator F_{a'}(t^p) at degree index."""
    F = series_F(params)
    D = series_F_prime_frobenius(params)
    full = D.perturbed(fault.index, _fault_delta(fault, params.p, params.n)) if fault else D
    return _congruence("dwork", params, F, D, F, full)


@_timed
def check_congruence_log(params: HGParams, fault: Fault | None = None) -> VerifyReport:
    """Logarithmic-type congruence; faults hit G_index."""
    G = series_G_log(params)
    F = series_F(params)
    full = G.perturbed(fault.index, _fault_delta(fault, params.p, params.n)) if fault else G
    return _congruence("log", params, G, F, full, F)


def _poly_pow(f: PowerSeries, e: int) -> PowerSeries:
    result = PowerSeries(f.p, (1,), (f.precision,), True)
    base = f
    while e:
        if e & 1:
            result = ps_mul(result, base)
        e >>= 1
        if e:
            base = ps_mul(base, base)
    return result


@_timed
def check_trunc_factorization(a, s: int, p: int, n: int, fault: Fault | None = None) -> VerifyReport:
    """F(t)_{<p^n} == prod_i [F_{a^(i)}(t)_{<p}]^{p^i} mod p, as polynomials."""
    params = HGParams(p, as_rational(a), s, 1, max(n, 1), M=p ** n)
    pn = p ** n
    lhs = truncate_below(series_F(params, length=pn).with_precision(1), pn)
    if fault is not None:
        lhs = lhs.perturbed(fault.index, fault.multiple)
    rhs = PowerSeries(p, (1,), (1,), True)
    x = params.a
    for i in range(n):
        factor = truncate_below(series_F(params, a=x, length=p).with_precision(1), p)
        rhs = ps_mul(rhs, _poly_pow(factor, p ** i))
        x = (x + branch_constants(x, p).l) / p
    length = max(len(lhs), len(rhs))
    failure = _first_series_mismatch(lhs.extended(length), rhs.extended(length), 1, length)
    echo = params.to_json()
    echo["n"] = n
    return VerifyReport("factor", echo, failure is None, p, [0, length - 1], failure)


def _ratio_BA(params: HGParams, k: int, m: int) -> PadicBall:
    """B_k / A_k to m digits."""
    a, s, c, p = params.a, params.s, params.c, params.p
    A_k = coeff_A(a, s, k)
    vA = valuation(A_k, p)
    N = m + valuation(k + a, p) + vA
    B_k = coeff_B(a, s, c, p, k, N)
    return B_k / reduce(A_k, p, B_k.precision)


def lipschitz_pairs(p: int, m: int, count: int, seed: int = 0, k_max: int | None = None) -> list[tuple[int, int]]:
    rng = random.Random(seed)
    k_max = k_max if k_max is not None else 2 * p ** m + 2 * p
    pairs = []
    for _ in range(count):
        k = rng.randrange(k_max)
        pairs.append((k, k + rng.randrange(0, 4) * p ** m))
    return pairs


@_timed
def check_lipschitz(params: HGParams, m: int | None = None, pairs=None, count: int = 100,
                    seed: int = 0, fault: Fault | None = None) -> VerifyReport:
    """v_p(B_k/A_k - B_k'/A_k') >= m whenever k = k' mod p^m."""
    p = params.p
    m = params.n if m is None else m
    if pairs is None:
        pairs = lipschitz_pairs(p, m, count, seed)
    pm = p ** m
    failure = None
    for idx, (k, k2) in enumerate(pairs):
        if (k - k2) % pm:
            raise PadicError(f"pair ({k}, {k2}) is not congruent mod p^{m}")
        r1, r2 = _ratio_BA(params, k, m), _ratio_BA(params, k2, m)
        x = r1.residue
        if fault is not None and idx == fault.index:
            x += _fault_delta(fault, p, m)
        if (x - r2.residue) % pm:
            failure = {"index": [k, k2], "lhs": x % pm, "rhs": r2.residue % pm}
            break
    echo = params.to_json()
    echo["m"] = m
    return VerifyReport("lipschitz", echo, failure is None, pm,
                        {"pairs": len(pairs)}, failure)


@_timed
def check_blal(p: int, n: int, l: int, d: int = 1, fault: Fault | None = None) -> VerifyReport:
    """B_l/A_l against psi_p(a+l) - psi_p(1+l) mod p^n for a = d p^n - l."""
    if d % p == 0:
        raise PadicError("d must be prime to p")
    if not 0 <= l < p:
        raise PadicError("l must lie in [0, p)")
    a = Fraction(d * p ** n - l)
    params = HGParams(p, a, 1, 1, n)
    ratio = _ratio_BA(params, l, n)
    lhs = ratio.residue
    if fault is not None:
        lhs += _fault_delta(fault, p, n)
    psi_diff = psi_gamma(a + l, p, n) - psi_gamma(1 + l, p, n)
    minus_psi = -psi_gamma(1 + l, p, n)
    pn = p ** n
    failure = None
    if (lhs - psi_diff.residue) % pn:
        failure = {"index": l, "lhs": lhs % pn, "rhs": psi_diff.residue}
    details = {"minus_psi_1_plus_l": minus_psi.residue,
               "matches_minus_psi": (lhs - minus_psi.residue) % pn == 0}
    echo = params.to_json()
    echo.update(l=l, d=d)
    return VerifyReport("blal", echo, failure is None, pn, [l, l], failure, details=details)


@_timed
def check_sm(params: HGParams, m_max: int = 30, fault: Fault | None = None) -> VerifyReport:
    """S_m = sum_{i+j=m} A_{i+p^n} B_j - A_i B_{j+p^n} = 0 mod p^n for m <= m_max."""
    p, n = params.p, params.n
    pn = p ** n
    length = m_max + pn + 1
    work = params if params.M >= length else params.replace(M=length)
    B = list(series_G_hat(work, length).residues)
    if fault is not None:
        B[fault.index + pn] += _fault_delta(fault, p, n)
    A = [reduce(x, p, n).residue for x in a_table(params.a, params.s, length)]
    failure = None
    for m in range(m_max + 1):
        S = sum(A[i + pn] * B[m - i] - A[i] * B[m - i + pn] for i in range(m + 1)) % pn
        if S:
            failure = {"index": m, "lhs": S, "rhs": 0}
            break
    return VerifyReport("sm", work.to_json(), failure is None, pn, [0, m_max], failure)


@_timed
def check_reflection_unit(a, s: int, p: int, fault: Fault | None = None) -> VerifyReport:
    """F(t)_{<p} mod p has degree l and satisfies F(t) = (-1)^{ls} t^l F(1/t)."""
    params = HGParams(p, as_rational(a), s, 1, 1, M=p)
    l = params.branch.l
    F = truncate_below(series_F(params, length=p).with_precision(1), p)
    lhs = LaurentPoly.from_series(F)
    if fault is not None:
        lhs = laurent_add(lhs, LaurentPoly.monomial(p, fault.index, fault.multiple, 1))
    sign = -1 if (l * s) % 2 else 1
    rhs = laurent_mul(LaurentPoly.monomial(p, l, sign, 1), omega_invert(LaurentPoly.from_series(F)))
    echo = params.to_json()
    echo.pop("n")
    degree = max((k for k in range(p) if F.residues[k] % p), default=-1)
    failure = None
    if degree != l:
        failure = {"degree": "deg F_{<p}", "lhs": degree, "rhs": l}
    else:
        failure = _first_laurent_mismatch(lhs, rhs, p)
    return VerifyReport("reflect", echo, failure is None, p, [0, p - 1], failure,
                        details={"l": l, "sign": sign})


def _first_laurent_mismatch(lhs: LaurentPoly, rhs: LaurentPoly, mod: int) -> dict | None:
    zero = PadicBall(lhs.p, 0, 0)
    for d in sorted(set(lhs.degrees) | set(rhs.degrees)):
        x = (lhs[d] or zero).residue % mod
        y = (rhs[d] or zero).residue % mod
        if x != y:
            return {"degree": d, "lhs": x, "rhs": y}
    return None


def is_theorem_instance(params: HGParams) -> bool:
    """s = 2, a in (1/N)Z with 0 < a < 1 and p > N: the proved transformation cases."""
    a = params.a
    return params.s == 2 and 0 < a < 1 and params.p > a.denominator


def _certify_units(params: HGParams) -> list[Fraction]:
    orbit, period = dwork_orbit(params.a, params.p)
    if period is None:
        raise PadicError(f"a = {params.a} has no periodic Dwork orbit; "
                         "transformation checks need a^(r) = a")
    for x in orbit:
        rep = check_reflection_unit(x, params.s, params.p)
        if not rep.passed:
            raise PadicError(f"F_{{<p}} for a = {x} is not certified as a unit: {rep.first_failure}")
    return orbit


def _dense(poly: LaurentPoly, lo: int, hi: int, mod: int) -> list[int]:
    return [(poly[d].residue % mod if poly[d] is not None else 0) for d in range(lo, hi + 1)]


def example_mod_p_residual(params: HGParams) -> list[int]:
    """Closed-form residues of G(t) + (-1)^{ls} t^l G_hat(1/t) mod p, degrees 0..l.

    Uses B_k = A_k/k and B_hat_{l-k} = A_{l-k}/(a+l-k) for 1 <= k <= l, and
    for k = 0 the reduction s Psi(a) + (-1)^{ls}(A_l - (-1)^{se})/(a+l), in
    which the log(c) and c-power terms have already cancelled mod p.
    """
    p, s, a = params.p, params.s, params.a
    br = params.branch
    l = br.l
    eps = -1 if (l * s) % 2 else 1
    A = a_table(a, s, l + 1)
    out = []
    sign_se = -1 if (s * br.e) % 2 else 1
    k0 = psi_gamma(a, p, 1) * s + reduce(eps * (A[l] - sign_se) / (a + l), p, 1)
    out.append(k0.residue)
    for k in range(1, l + 1):
        out.append(reduce(A[k] / k + eps * A[l - k] / (a + l - k), p, 1).residue)
    return out


@_timed
def check_transform_log(params: HGParams, fault: Fault | None = None) -> VerifyReport:
    """G(t) w(F) + w(G_hat) F(t) = 0 mod p^n, all truncations at p^n.

    G is the log-type numerator for sigma(t) = c t^p, G_hat the hat
    numerator for sigma_hat(t) = t^p / c and w the involution t -> 1/t.
    """
    p, n = params.p, params.n
    pn = p ** n
    orbit = _certify_units(params)
    hat_params = params.replace(c=1 / params.c)
    G = truncate_below(series_G_log(params, pn), pn).with_precision(n)
    if fault is not None:
        G = G.perturbed(fault.index, _fault_delta(fault, p, n))
    Gh = truncate_below(series_G_hat(hat_params, pn), pn).with_precision(n)
    F = truncate_below(series_F(params, length=pn), pn).with_precision(n)
    LG, LGh, LF = (LaurentPoly.from_series(x) for x in (G, Gh, F))
    cross = laurent_add(laurent_mul(LG, omega_invert(LF)), laurent_mul(omega_invert(LGh), LF))
    lo, hi = -(pn - 1), pn - 1
    residues = _dense(cross, lo, hi, pn)
    failure = None
    for d, r in zip(range(lo, hi + 1), residues):
        if r:
            failure = {"degree": d, "lhs": r, "rhs": 0}
            break
    details = {"orbit": [str(x) for x in orbit], "residue_offset": lo, "residues": residues}
    if n == 1:
        l = params.branch.l
        eps = -1 if (l * params.s) % 2 else 1
        direct = laurent_add(LG, laurent_mul(LaurentPoly.monomial(p, l, eps, 1), omega_invert(LGh)))
        dlo, dhi = l - (p - 1), p - 1
        direct_res = _dense(direct, dlo, dhi, p)
        details["example_offset"] = dlo
        details["example_residues"] = direct_res
        if failure is None:
            for d, r in zip(range(dlo, dhi + 1), direct_res):
                if r:
                    failure = {"degree": d, "lhs": r, "rhs": 0, "form": "example"}
                    break
    return VerifyReport("transform-log", params.to_json(), failure is None, pn, [lo, hi],
                        failure, conjectural=not is_theorem_instance(params), details=details)


@_timed
def check_transform_dwork(params: HGParams, fault: Fault | None = None) -> VerifyReport:
    """F(t) w(D) = ((-1)^s t)^l w(F) D mod p^n with D = [F_{a'}(t^p)]_{<p^n}."""
    p, n, s = params.p, params.n, params.s
    pn = p ** n
    orbit = _certify_units(params)
    F = truncate_below(series_F(params, length=pn), pn).with_precision(n)
    D = truncate_below(series_F_prime_frobenius(params, pn), pn).with_precision(n)
    F_lhs = F.perturbed(fault.index, _fault_delta(fault, p, n)) if fault else F
    LF, LD = LaurentPoly.from_series(F), LaurentPoly.from_series(D)
    lhs = laurent_mul(LaurentPoly.from_series(F_lhs), omega_invert(LD))
    l = params.branch.l
    sign = -1 if (s * l) % 2 else 1
    rhs = laurent_mul(laurent_mul(LaurentPoly.monomial(p, l, sign, n), omega_invert(LF)), LD)
    failure = _first_laurent_mismatch(lhs, rhs, pn)
    degs = sorted(set(lhs.degrees) | set(rhs.degrees))
    return VerifyReport("transform-dwork", params.to_json(), failure is None, pn,
                        [degs[0], degs[-1]], failure,
                        conjectural=not is_theorem_instance(params),
                        details={"orbit": [str(x) for x in orbit], "l": l, "sign": sign})


CHECKS: dict[str, Callable[..., VerifyReport]] = {
    "hat": check_congruence_hat,
    "dwork": check_congruence_dwork,
    "log": check_congruence_log,
    "factor": check_trunc_factorization,
    "lipschitz": check_lipschitz,
    "blal": check_blal,
    "sm": check_sm,
    "reflect": check_reflection_unit,
    "transform-log": check_transform_log,
    "transform-dwork": check_transform_dwork,
}


def run_check(name: str, params: HGParams, fault: Fault | None = None, **options) -> VerifyReport:
    """Dispatch a checker by CLI name, mapping HGParams onto its signature."""
    if name not in CHECKS:
        raise KeyError(f"unknown check {name!r}")
    if name == "factor":
        return check_trunc_factorization(params.a, params.s, params.p, params.n, fault=fault)
    if name == "reflect":
        return check_reflection_unit(params.a, params.s, params.p, fault=fault)
    if name == "blal":
        return check_blal(params.p, params.n, options.get("l", 0), options.get("d", 1), fault=fault)
    if name == "lipschitz":
        return check_lipschitz(params, options.get("m"), count=options.get("count", 100),
                               seed=options.get("seed", 0), fault=fault)
    if name == "sm":
        return check_sm(params, options.get("m_max", 30), fault=fault)
    return CHECKS[name](params, fault=fault)
