# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Native modular kernels: truncated products, series inversion, harmonic sums.

Moduli must stay below 2**63; callers fall back to the pure-Python module
above that.
"""
from libc.stdint cimport uint64_t, int64_t
from libc.stdlib cimport malloc, free

cdef extern from *:
    ctypedef unsigned long long u128 "unsigned __int128"

MAX_MODULUS = 1 << 63

cdef uint64_t SMALL_MODULUS = 0xFFFFFFFFULL


cdef uint64_t* _load(list xs, Py_ssize_t n, uint64_t m) except NULL:
    cdef uint64_t* buf = <uint64_t*> malloc((n if n > 0 else 1) * sizeof(uint64_t))
    if buf == NULL:
        raise MemoryError()
    cdef Py_ssize_t i
    for i in range(n):
        buf[i] = <uint64_t> (xs[i] % m)
    return buf


cdef void _conv(uint64_t* f, Py_ssize_t nf, uint64_t* g, Py_ssize_t ng,
                uint64_t* out, Py_ssize_t length, uint64_t m) noexcept nogil:
    cdef Py_ssize_t k, i, lo, hi
    cdef u128 acc
    cdef bint small = m <= SMALL_MODULUS
    for k in range(length):
        lo = k - ng + 1
        if lo < 0:
            lo = 0
        hi = k
        if hi > nf - 1:
            hi = nf - 1
        acc = 0
        if small:
            # products < 2**64, so the 128-bit accumulator cannot overflow
            for i in range(lo, hi + 1):
                acc += <u128> f[i] * g[k - i]
        else:
            for i in range(lo, hi + 1):
                acc += (<u128> f[i] * g[k - i]) % m
        out[k] = <uint64_t> (acc % m)


def mul_trunc(list f, list g, Py_ssize_t length, object modulus):
    cdef uint64_t m = modulus
    cdef Py_ssize_t nf = min(len(f), length), ng = min(len(g), length)
    if length <= 0:
        return []
    if nf == 0 or ng == 0 or m == 1:
        return [0] * length
    cdef uint64_t* fb = _load(f, nf, m)
    cdef uint64_t* gb = _load(g, ng, m)
    cdef uint64_t* ob = <uint64_t*> malloc(length * sizeof(uint64_t))
    cdef Py_ssize_t k
    try:
        with nogil:
            _conv(fb, nf, gb, ng, ob, length, m)
        return [ob[k] for k in range(length)]
    finally:
        free(fb)
        free(gb)
        free(ob)


def inv_trunc(list f, Py_ssize_t length, object modulus, object f0_inverse):
    cdef uint64_t m = modulus
    cdef uint64_t g0 = f0_inverse % modulus
    cdef Py_ssize_t nf = min(len(f), length), k, i, hi
    cdef u128 acc
    if length <= 0:
        return []
    cdef uint64_t* fb = _load(f, nf, m)
    cdef uint64_t* gb = <uint64_t*> malloc(length * sizeof(uint64_t))
    try:
        with nogil:
            gb[0] = g0
            for k in range(1, length):
                hi = k if k < nf - 1 else nf - 1
                acc = 0
                for i in range(1, hi + 1):
                    acc += (<u128> fb[i] * gb[k - i]) % m
                acc = acc % m
                # g_k = -g0 * sum_{i>=1} f_i g_{k-i}
                gb[k] = <uint64_t> ((<u128> g0 * <uint64_t> ((m - <uint64_t> acc) % m)) % m)
        return [gb[k] for k in range(length)]
    finally:
        free(fb)
        free(gb)


cdef int64_t _inv(int64_t a, int64_t m) noexcept nogil:
    cdef int64_t t = 0, newt = 1, r = m, newr = a, q, tmp
    while newr != 0:
        q = r // newr
        tmp = t - q * newt
        t = newt
        newt = tmp
        tmp = r - q * newr
        r = newr
        newr = tmp
    if t < 0:
        t += m
    return t


def harmonic_mod(object m_upper, object p, object modulus):
    cdef int64_t m = modulus
    cdef int64_t pp = p
    cdef int64_t n = m_upper
    cdef int64_t k
    cdef u128 acc = 0
    if m == 1:
        return 0
    with nogil:
        for k in range(1, n + 1):
            if k % pp:
                acc += <u128> _inv(k % m, m)
    return int(acc % <u128> m)
