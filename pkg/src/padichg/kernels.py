"""Kernel dispatch: compiled core when importable, pure Python otherwise.

Set ``PADICHG_PURE=1`` to force the fallback.
"""
from __future__ import annotations

import os

from . import _kernels_py

try:
    if os.environ.get("PADICHG_PURE"):
        raise ImportError("pure-Python kernels forced")
    from . import _kernels as _native
except ImportError:
    _native = None

BACKEND = "native" if _native is not None else "python"
_NATIVE_LIMIT = 1 << 62


def _use_native(modulus: int) -> bool:
    return _native is not None and modulus < _NATIVE_LIMIT


def mul_trunc(f: list[int], g: list[int], length: int, modulus: int) -> list[int]:
    if _use_native(modulus):
        return _native.mul_trunc(list(f), list(g), length, modulus)
    return _kernels_py.mul_trunc(f, g, length, modulus)


def inv_trunc(f: list[int], length: int, modulus: int) -> list[int]:
    f0_inv = pow(f[0] % modulus, -1, modulus) if modulus > 1 else 0
    if _use_native(modulus):
        return _native.inv_trunc(list(f), length, modulus, f0_inv)
    return _kernels_py.inv_trunc(f, length, modulus, f0_inv)


def harmonic_mod(m: int, p: int, modulus: int) -> int:
    if _use_native(modulus) and m < _NATIVE_LIMIT:
        return _native.harmonic_mod(m, p, modulus)
    return _kernels_py.harmonic_mod(m, p, modulus)
