"""Pure-Python versions of the modular kernels.

Polynomial products use Kronecker substitution: both operands are packed
into one big integer each and CPython's bignum multiply does the work.
"""
from __future__ import annotations


def _pack(coeffs, slot_bytes):
    return int.from_bytes(
        b"".join(c.to_bytes(slot_bytes, "little") for c in coeffs), "little")


def mul_trunc(f, g, length, modulus):
    """First ``length`` coefficients of f*g, reduced mod ``modulus``."""
    f = [x % modulus for x in f[:length]]
    g = [x % modulus for x in g[:length]]
    if not f or not g or length <= 0:
        return [0] * max(length, 0)
    terms = min(len(f), len(g))
    bound = (modulus - 1) ** 2 * terms
    slot_bytes = max(1, (bound.bit_length() + 8) // 8)
    prod = _pack(f, slot_bytes) * _pack(g, slot_bytes)
    raw = prod.to_bytes(slot_bytes * (len(f) + len(g)), "little")
    out = []
    for k in range(min(length, len(f) + len(g) - 1)):
        chunk = raw[k * slot_bytes:(k + 1) * slot_bytes]
        out.append(int.from_bytes(chunk, "little") % modulus)
    out.extend([0] * (length - len(out)))
    return out


def inv_trunc(f, length, modulus, f0_inverse):
    """First ``length`` coefficients of 1/f mod ``modulus`` (Newton iteration)."""
    if length <= 0:
        return []
    g = [f0_inverse % modulus]
    prec = 1
    while prec < length:
        prec = min(2 * prec, length)
        fg = mul_trunc(f, g, prec, modulus)
        # g <- g * (2 - f*g)
        corr = [(-x) % modulus for x in fg]
        corr[0] = (corr[0] + 2) % modulus
        g = mul_trunc(g, corr, prec, modulus)
    return g


def harmonic_mod(m, p, modulus):
    """sum of 1/k for 1 <= k <= m with p not dividing k, mod ``modulus``."""
    if modulus == 1:
        return 0
    total = 0
    for k in range(1, m + 1):
        if k % p:
            total += pow(k, -1, modulus)
    return total % modulus
