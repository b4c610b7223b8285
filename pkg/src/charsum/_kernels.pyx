# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: sieves, multiplicative tables, index tables, sum loops.

Same surface as charsum._kernels_py; selected at import by charsum._backend.
The long loops release the GIL so range-partitioned threads actually run in
parallel. Accumulation is per 65536-term block, matching the fallback.
"""

import numpy as np

from libc.math cimport cos, sin
from libc.stdint cimport int64_t, uint8_t, uint32_t, uint64_t

# keyed draws are cheap and numpy-vectorised; share one definition
from ._kernels_py import draw_pm1, draw_u64, draw_unit

BACKEND = "compiled"

BLOCK = 1 << 16

cdef int64_t _BLOCK = 1 << 16


# --- sieves ---------------------------------------------------------------


def spf_sieve(N):
    """spf[n] = smallest prime factor of n for 2 <= n <= N; spf[0]=spf[1]=0."""
    cdef int64_t nn = N
    spf_arr = np.zeros(nn + 1, dtype=np.uint32)
    primes_arr = np.empty(nn // 2 + 2, dtype=np.uint32)
    cdef uint32_t[::1] spf = spf_arr
    cdef uint32_t[::1] primes = primes_arr
    cdef int64_t i, j, cnt = 0
    cdef uint64_t p
    with nogil:
        for i in range(2, nn + 1):
            if spf[i] == 0:
                spf[i] = <uint32_t> i
                primes[cnt] = <uint32_t> i
                cnt += 1
            for j in range(cnt):
                p = primes[j]
                if p > spf[i] or <uint64_t> i * p > <uint64_t> nn:
                    break
                spf[i * p] = <uint32_t> p
    return spf_arr


def primes_from_spf(spf):
    n = np.arange(len(spf), dtype=np.uint32)
    return np.nonzero(spf == n)[0][1:].astype(np.int64)


def mobius_table(spf):
    cdef uint32_t[::1] s = spf
    cdef int64_t N = spf.shape[0] - 1
    out_arr = np.empty(N + 1, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef int64_t n, m
    cdef uint32_t p
    with nogil:
        out[0] = 0.0
        if N >= 1:
            out[1] = 1.0
        for n in range(2, N + 1):
            p = s[n]
            m = n / p
            out[n] = 0.0 if m % p == 0 else -out[m]
    return out_arr


def liouville_table(spf):
    cdef uint32_t[::1] s = spf
    cdef int64_t N = spf.shape[0] - 1
    out_arr = np.empty(N + 1, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef int64_t n
    with nogil:
        out[0] = 0.0
        if N >= 1:
            out[1] = 1.0
        for n in range(2, N + 1):
            out[n] = -out[n / s[n]]
    return out_arr


ctypedef double complex dcomplex

ctypedef fused value_t:
    double
    dcomplex


cdef void _mult_pass(uint32_t[::1] s, value_t[::1] fp, value_t[::1] out,
                     bint squarefree) noexcept nogil:
    cdef int64_t N = s.shape[0] - 1
    cdef int64_t n, m
    cdef uint32_t p
    out[0] = 0
    if N >= 1:
        out[1] = 1
    for n in range(2, N + 1):
        p = s[n]
        m = n / p
        if squarefree and m % p == 0:
            out[n] = 0
        else:
            out[n] = out[m] * fp[p]


def mult_table_from_prime_values(spf, fp, squarefree):
    """Extend prime values fp (indexed by n, read at primes) to f(1..N)."""
    out = np.empty(spf.shape[0], dtype=fp.dtype)
    cdef bint sq = bool(squarefree)
    if fp.dtype == np.complex128:
        _mult_pass[dcomplex](spf, fp, out, sq)
    else:
        _mult_pass[double](spf, fp, out, sq)
    return out


# --- keyed counter draws ----------------------------------------------------


cdef inline uint64_t _splitmix(uint64_t z) noexcept nogil:
    z = z + 0x9E3779B97F4A7C15ULL
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL
    return z ^ (z >> 31)


cdef inline uint64_t _draw(uint64_t seed, uint64_t p, uint64_t k) noexcept nogil:
    return _splitmix(_splitmix(_splitmix(seed) ^ p) ^ k)


cdef double _TWO64 = 18446744073709551616.0
cdef double _TWO_PI = 6.283185307179586476925286766559


cdef inline double complex _unit_of(uint64_t h) noexcept nogil:
    cdef double angle = _TWO_PI * (<double> h / _TWO64)
    return cos(angle) + 1j * sin(angle)


def mult_table_indep(spf, seed, unimodular):
    """Random family with an independent draw per prime power (p, k)."""
    cdef uint32_t[::1] s = spf
    cdef int64_t N = spf.shape[0] - 1
    cdef uint64_t sd = <uint64_t> (int(seed) & 0xFFFFFFFFFFFFFFFF)
    cdef int64_t n, m, rest
    cdef uint32_t p
    # e[n], low[n]: exponent and value of the full spf-power dividing n,
    # so out[n] = out[n / low[n]] * draw(p, e[n])
    e_arr = np.zeros(N + 1, dtype=np.uint8)
    low_arr = np.zeros(N + 1, dtype=np.int64)
    cdef uint8_t[::1] e = e_arr
    cdef int64_t[::1] low = low_arr
    cdef double complex[::1] outc
    cdef double[::1] outd

    if unimodular:
        outc_arr = np.empty(N + 1, dtype=np.complex128)
        outc = outc_arr
        with nogil:
            outc[0] = 0
            if N >= 1:
                outc[1] = 1
            for n in range(2, N + 1):
                p = s[n]
                m = n / p
                if m % p == 0:
                    e[n] = e[m] + 1
                    low[n] = low[m] * p
                else:
                    e[n] = 1
                    low[n] = p
                rest = n / low[n]
                outc[n] = outc[rest] * _unit_of(_draw(sd, p, e[n]))
        return outc_arr

    outd_arr = np.empty(N + 1, dtype=np.float64)
    outd = outd_arr
    with nogil:
        outd[0] = 0
        if N >= 1:
            outd[1] = 1
        for n in range(2, N + 1):
            p = s[n]
            m = n / p
            if m % p == 0:
                e[n] = e[m] + 1
                low[n] = low[m] * p
            else:
                e[n] = 1
                low[n] = p
            rest = n / low[n]
            outd[n] = outd[rest] * (1.0 if (_draw(sd, p, e[n]) >> 63) == 0 else -1.0)
    return outd_arr


# --- discrete index table ---------------------------------------------------


def char_index_table(q, g):
    """index[n] = k with g**k = n (mod q) for 1 <= n < q; index[0] = q - 1."""
    cdef uint64_t qq = q, gg = g
    index_arr = np.empty(qq, dtype=np.uint32)
    cdef uint32_t[::1] index = index_arr
    cdef uint64_t x = 1, k
    with nogil:
        index[0] = <uint32_t> (qq - 1)
        for k in range(qq - 1):
            index[x] = <uint32_t> k
            x = x * gg % qq
    return index_arr


# --- long sums ---------------------------------------------------------------


cdef double complex _sum_single_range(value_t[::1] f, uint32_t[::1] index,
                                      double complex[::1] roots,
                                      uint64_t q, uint64_t m, uint64_t a,
                                      int64_t n0, int64_t n1) noexcept nogil:
    cdef double complex total = 0, block_acc
    cdef int64_t lo, hi, n
    cdef uint64_t t, k, qm1 = q - 1
    lo = n0
    while lo <= n1:
        hi = lo + _BLOCK - 1
        if hi > n1:
            hi = n1
        block_acc = 0
        for n in range(lo, hi + 1):
            t = (<uint64_t> n + a) % q
            if t != 0:
                k = (m * <uint64_t> index[t]) % qm1
                block_acc = block_acc + f[n] * roots[k]
        total = total + block_acc
        lo = hi + 1
    return total


def sum_single(fvals, index, roots, q, m, a, n0, n1):
    """sum of f(n) * chi(n + a) over n0 <= n <= n1, chi = power m of the table."""
    cdef uint64_t aa = int(a) % q
    if fvals.dtype == np.complex128:
        return complex(_sum_single_range[dcomplex](
            fvals, index, roots, q, m, aa, n0, n1))
    return complex(_sum_single_range[double](
        fvals, index, roots, q, m, aa, n0, n1))


cdef double complex _sum_multi_range(value_t[::1] f, uint32_t[::1] index,
                                     double complex[::1] roots,
                                     uint64_t q, uint64_t m, int64_t[::1] shifts,
                                     int64_t n0, int64_t n1) noexcept nogil:
    cdef double complex total = 0, block_acc
    cdef int64_t lo, hi, n, i, t_count = shifts.shape[0]
    cdef uint64_t t, k, ksum, qm1 = q - 1
    cdef bint zero
    lo = n0
    while lo <= n1:
        hi = lo + _BLOCK - 1
        if hi > n1:
            hi = n1
        block_acc = 0
        for n in range(lo, hi + 1):
            ksum = 0
            zero = False
            for i in range(t_count):
                t = (<uint64_t> n + <uint64_t> shifts[i]) % q
                if t == 0:
                    zero = True
                    break
                ksum += index[t]
            if not zero:
                k = (m * (ksum % qm1)) % qm1
                block_acc = block_acc + f[n] * roots[k]
        total = total + block_acc
        lo = hi + 1
    return total


def sum_multi(fvals, index, roots, q, m, shifts, n0, n1):
    """sum of f(n) * prod_i chi(n + a_i); a term is dropped when any factor is 0."""
    sh = np.array([int(a) % q for a in shifts], dtype=np.int64)
    if fvals.dtype == np.complex128:
        return complex(_sum_multi_range[dcomplex](
            fvals, index, roots, q, m, sh, n0, n1))
    return complex(_sum_multi_range[double](
        fvals, index, roots, q, m, sh, n0, n1))
