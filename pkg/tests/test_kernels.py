"""The compiled kernels and the pure-Python fallback must agree bit for bit."""
import pytest
from hypothesis import given, settings, strategies as st

from padichg import _kernels_py, kernels

native = pytest.importorskip("padichg._kernels") if kernels.BACKEND == "native" else None

moduli = st.sampled_from([1, 2, 9, 5 ** 7, 7 ** 12, 2 ** 40, 13 ** 15, (1 << 62) - 57])


@st.composite
def poly_pair(draw):
    mod = draw(moduli)
    L = draw(st.integers(1, 40))
    f = draw(st.lists(st.integers(0, mod - 1), min_size=1, max_size=40))
    g = draw(st.lists(st.integers(0, mod - 1), min_size=1, max_size=40))
    return f, g, L, mod


def schoolbook(f, g, L, mod):
    return [sum(f[i] * g[k - i] for i in range(k + 1) if i < len(f) and k - i < len(g)) % mod
            for k in range(L)]


@settings(max_examples=150, deadline=None)
@given(poly_pair())
def test_python_mul_matches_schoolbook(args):
    f, g, L, mod = args
    assert _kernels_py.mul_trunc(f, g, L, mod) == schoolbook(f, g, L, mod)


@pytest.mark.skipif(native is None, reason="compiled kernels not built")
@settings(max_examples=150, deadline=None)
@given(poly_pair())
def test_native_mul_matches_python(args):
    f, g, L, mod = args
    assert native.mul_trunc(f, g, L, mod) == _kernels_py.mul_trunc(f, g, L, mod)


@st.composite
def unit_series(draw):
    p = draw(st.sampled_from([2, 3, 5, 7, 13]))
    mod = p ** draw(st.integers(1, 14))
    f = draw(st.lists(st.integers(0, mod - 1), min_size=1, max_size=40))
    if f[0] % p == 0:
        f[0] += 1
    return f, draw(st.integers(1, 40)), mod


@settings(max_examples=150, deadline=None)
@given(unit_series())
def test_inverse_round_trip(args):
    f, L, mod = args
    inv = kernels.inv_trunc(f, L, mod)
    assert schoolbook(f, inv, L, mod) == [1 % mod] + [0] * (L - 1)


@pytest.mark.skipif(native is None, reason="compiled kernels not built")
@settings(max_examples=150, deadline=None)
@given(unit_series())
def test_native_inverse_matches_python(args):
    f, L, mod = args
    f0_inv = pow(f[0], -1, mod)
    assert native.inv_trunc(f, L, mod, f0_inv) == _kernels_py.inv_trunc(f, L, mod, f0_inv)


@settings(max_examples=100, deadline=None)
@given(st.sampled_from([2, 3, 5, 7]), st.integers(0, 400), st.integers(1, 6))
def test_harmonic_matches_direct_sum(p, m, e):
    mod = p ** e
    direct = sum(pow(k, -1, mod) for k in range(1, m + 1) if k % p) % mod
    assert _kernels_py.harmonic_mod(m, p, mod) == direct
    assert kernels.harmonic_mod(m, p, mod) == direct


@pytest.mark.skipif(native is None, reason="compiled kernels not built")
def test_large_modulus_falls_back():
    mod = 5 ** 40
    f = [1, 2, 3]
    assert kernels.mul_trunc(f, f, 5, mod) == schoolbook(f, f, 5, mod)
