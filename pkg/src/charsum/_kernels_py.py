"""Numpy fallback for the hot kernels.

Mirrors the surface of the compiled extension `charsum._kernels`: smallest
prime factor sieve, multiplicative function tables, discrete-index character
tables, and the long accumulation loops. Everything here is vectorized in
chunks; the compiled module does the same work in single fused passes.

All sums accumulate per 65536-term block and then add the block totals, so
rounding stays far below the magnitudes being compared against.
"""

import math

import numpy as np

BACKEND = "python"

BLOCK = 1 << 16
_MASK64 = np.uint64(0xFFFFFFFFFFFFFFFF)


def spf_sieve(N: int) -> np.ndarray:
    """spf[n] = smallest prime factor of n for 2 <= n <= N; spf[0]=spf[1]=0."""
    spf = np.zeros(N + 1, dtype=np.uint32)
    for p in range(2, math.isqrt(N) + 1):
        if spf[p] == 0:
            block = spf[p * p :: p]
            block[block == 0] = p
    rest = np.nonzero(spf[2:] == 0)[0] + 2
    spf[rest] = rest
    return spf


def primes_from_spf(spf: np.ndarray) -> np.ndarray:
    n = np.arange(len(spf), dtype=np.uint32)
    return np.nonzero(spf == n)[0][1:].astype(np.int64)  # drop n=0 match


def mobius_table(spf: np.ndarray) -> np.ndarray:
    N = len(spf) - 1
    mu = np.ones(N + 1, dtype=np.float64)
    mu[0] = 0.0
    for p in primes_from_spf(spf):
        p = int(p)
        mu[p::p] *= -1.0
        if p * p <= N:
            mu[p * p :: p * p] = 0.0
    return mu


def liouville_table(spf: np.ndarray) -> np.ndarray:
    N = len(spf) - 1
    lam = np.ones(N + 1, dtype=np.float64)
    lam[0] = 0.0
    for p in primes_from_spf(spf):
        p = int(p)
        pk = p
        while pk <= N:
            lam[pk::pk] *= -1.0
            pk *= p
    return lam


def mult_table_from_prime_values(spf: np.ndarray, fp: np.ndarray, squarefree: bool) -> np.ndarray:
    """Extend f(p) (given at prime indices of fp) to f(1..N).

    Completely multiplicative unless `squarefree`, in which case f vanishes
    on any n divisible by p**2.
    """
    N = len(spf) - 1
    out = np.ones(N + 1, dtype=fp.dtype)
    out[0] = 0
    for p in primes_from_spf(spf):
        p = int(p)
        v = fp[p]
        if squarefree:
            out[p::p] *= v
            if p * p <= N:
                out[p * p :: p * p] = 0
        else:
            pk = p
            while pk <= N:
                out[pk::pk] *= v
                pk *= p
    return out


# --- keyed counter draws -----------------------------------------------------
# splitmix64 chain keyed by (seed, p, k); identical in both backends so that
# random families are reproducible regardless of traversal order.


def _splitmix64(z: np.ndarray) -> np.ndarray:
    # wraparound is the whole point here; keep numpy quiet about it
    with np.errstate(over="ignore"):
        z = (z + np.uint64(0x9E3779B97F4A7C15)) & _MASK64
        z = ((z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)) & _MASK64
        z = ((z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)) & _MASK64
        return z ^ (z >> np.uint64(31))


def draw_u64(seed: int, p, k=1) -> np.ndarray:
    """Deterministic 64-bit draw keyed by (seed, p, k); p and k may be arrays."""
    s = _splitmix64(np.uint64(seed & 0xFFFFFFFFFFFFFFFF))
    h = _splitmix64(s ^ np.asarray(p, dtype=np.uint64))
    return _splitmix64(h ^ np.asarray(k, dtype=np.uint64))


def draw_pm1(seed: int, p, k=1) -> np.ndarray:
    return 1.0 - 2.0 * (draw_u64(seed, p, k) >> np.uint64(63)).astype(np.float64)


def draw_unit(seed: int, p, k=1) -> np.ndarray:
    angle = draw_u64(seed, p, k).astype(np.float64) / 2.0**64
    return np.exp(2j * np.pi * angle)


def mult_table_indep(spf: np.ndarray, seed: int, unimodular: bool) -> np.ndarray:
    """Random family under the independent prime-power rule.

    f(p**k) is an independent draw for every k; built by multiplying the
    p**k-periodic slices by the ratio draw(k)/draw(k-1).
    """
    N = len(spf) - 1
    draw = draw_unit if unimodular else draw_pm1
    out = np.ones(N + 1, dtype=np.complex128 if unimodular else np.float64)
    out[0] = 0
    for p in primes_from_spf(spf):
        p = int(p)
        prev = 1.0
        pk = p
        k = 1
        while pk <= N:
            cur = complex(draw(seed, p, k)) if unimodular else float(draw(seed, p, k))
            out[pk::pk] *= cur / prev
            prev = cur
            pk *= p
            k += 1
    return out


# --- character index table ----------------------------------------------------


def char_index_table(q: int, g: int) -> np.ndarray:
    """index[n] = k with g**k = n (mod q) for 1 <= n < q; index[0] = q-1."""
    index = np.empty(q, dtype=np.uint32)
    index[0] = q - 1  # sentinel, masked by every evaluator
    if q == 2:
        index[1] = 0
        return index
    block = min(BLOCK, q - 1)
    vals = np.empty(block, dtype=np.uint64)
    x = 1
    for i in range(block):
        vals[i] = x
        x = x * g % q
    g_blk = np.uint64(pow(g, block, q))
    qq = np.uint64(q)
    k = 0
    while k < q - 1:
        take = min(block, q - 1 - k)
        index[vals[:take]] = np.arange(k, k + take, dtype=np.uint32)
        if k + take >= q - 1:
            break
        vals = (vals * g_blk) % qq
        k += take
    return index


# --- long sums ---------------------------------------------------------------


def sum_single(fvals, index, roots, q, m, a, n0, n1):
    """sum of f(n) * chi(n+a) for n0 <= n <= n1, chunked accumulation."""
    total = 0j
    qm1 = np.uint64(q - 1)
    mm = np.uint64(m)
    for lo in range(n0, n1 + 1, BLOCK):
        hi = min(lo + BLOCK - 1, n1)
        n = np.arange(lo, hi + 1, dtype=np.int64)
        t = (n + a) % q
        k = (mm * index[t].astype(np.uint64)) % qm1
        terms = roots[k.astype(np.int64)]
        terms = np.where(t == 0, 0j, terms)
        total += np.sum(terms * fvals[lo : hi + 1])
    return complex(total)


def sum_multi(fvals, index, roots, q, m, shifts, n0, n1):
    """sum of f(n) * prod_i chi(n+a_i); one root lookup via summed exponents."""
    total = 0j
    qm1 = np.uint64(q - 1)
    mm = np.uint64(m)
    shifts = [int(a) % q for a in shifts]
    for lo in range(n0, n1 + 1, BLOCK):
        hi = min(lo + BLOCK - 1, n1)
        n = np.arange(lo, hi + 1, dtype=np.int64)
        ksum = np.zeros(len(n), dtype=np.uint64)
        zero = np.zeros(len(n), dtype=bool)
        for a in shifts:
            t = (n + a) % q
            zero |= t == 0
            ksum += index[t].astype(np.uint64)
        k = (mm * (ksum % qm1)) % qm1
        terms = roots[k.astype(np.int64)]
        terms = np.where(zero, 0j, terms)
        total += np.sum(terms * fvals[lo : hi + 1])
    return complex(total)
