"""Shifted character sums, interval rational sums, and complete sums, each
paired with the reference bound it is compared against.

All evaluators are pure given immutable tables. Long loops run in 65536-term
blocks; an optional worker count range-partitions a sum, and the parallel and
sequential results agree to the summation-order tolerance (1e-6).
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
import math

import numpy as np

from ._backend import kernels as K
from .dirichlet import CharTable, DirichletChar
from .errors import CapacityError, HypothesisError
from .multfunc import MultFuncTable

# below this the reference quantity ln(ln q) is too close to 0 to normalize by
LOGLOG_MIN_Q = 16

_CHUNK = 1 << 20

WEIL_Q_CAP = 10**8


def theorem_bound(N: int, q: int) -> float:
    """The comparison quantity N * ln(ln q) / ln q."""
    if q < LOGLOG_MIN_Q:
        raise ValueError(f"bound needs q >= {LOGLOG_MIN_Q}, got {q}")
    if N < 1:
        raise ValueError(f"bound needs N >= 1, got {N}")
    return N * math.log(math.log(q)) / math.log(q)


def _bound_or_nan(N: int, q: int) -> float:
    if q >= LOGLOG_MIN_Q and N >= 1:
        return theorem_bound(N, q)
    return math.nan


@dataclass(frozen=True)
class SumReport:
    q: int
    N: int
    m: int
    shifts: tuple[int, ...]
    f_spec: object
    value: complex
    abs_value: float
    bound: float
    ratio: float


def _report(chi: DirichletChar, f: MultFuncTable, shifts, N: int, value: complex) -> SumReport:
    bound = _bound_or_nan(N, chi.q)
    a = abs(value)
    return SumReport(q=chi.q, N=N, m=chi.m, shifts=tuple(int(s) for s in shifts),
                     f_spec=f.spec, value=value, abs_value=a, bound=bound,
                     ratio=a / bound if bound == bound else math.nan)


def _split_range(n0: int, n1: int, parts: int) -> list[tuple[int, int]]:
    total = n1 - n0 + 1
    parts = max(1, min(parts, total))
    step = -(-total // parts)
    out = []
    lo = n0
    while lo <= n1:
        hi = min(lo + step - 1, n1)
        out.append((lo, hi))
        lo = hi + 1
    return out


def _run_parts(fn, n0: int, n1: int, workers) -> complex:
    if n1 < n0:
        return 0j
    if not workers or workers <= 1:
        return fn(n0, n1)
    chunks = _split_range(n0, n1, workers)
    with ThreadPoolExecutor(max_workers=len(chunks)) as ex:
        return sum(ex.map(lambda c: fn(c[0], c[1]), chunks), start=0j)


def _check_sum_args(f: MultFuncTable, chi: DirichletChar, N: int):
    if N < 0:
        raise ValueError(f"N must be >= 0, got {N}")
    if N > f.N:
        raise ValueError(f"N = {N} exceeds the f table (built to {f.N}); "
                         "rebuild the table rather than extending implicitly")
    if chi.is_principal:
        raise HypothesisError("principal character rejected (the bound assumes chi != chi0)")


def shifted_sum(f: MultFuncTable, chi: DirichletChar, a: int, N: int,
                workers: int | None = None) -> SumReport:
    """sum over n <= N of f(n) chi(n + a), with the reference bound and ratio."""
    _check_sum_args(f, chi, N)
    if a % chi.q == 0:
        raise HypothesisError("shift a must be coprime to q")
    t = chi.table
    value = _run_parts(
        lambda lo, hi: K.sum_single(f.values, t.index, t.roots, t.q, chi.m, a % t.q, lo, hi),
        1, N, workers)
    return _report(chi, f, (a,), N, value)


def multi_shifted_sum(f: MultFuncTable, chi: DirichletChar, shifts, N: int,
                      reduce_zero_shift: bool = True,
                      workers: int | None = None) -> SumReport:
    """sum over n <= N of f(n) chi(n+a_1) ... chi(n+a_t), t >= 2.

    A shift divisible by q is folded into the coefficient (f(n)chi(n) is again
    multiplicative with modulus <= 1), dropping to t - 1 factors; the direct
    path gives the same value and reduce_zero_shift=False forces it.
    """
    shifts = [int(s) for s in shifts]
    if len(shifts) < 2:
        raise HypothesisError(f"need at least 2 shifts, got {len(shifts)}")
    _check_sum_args(f, chi, N)
    q = chi.q
    residues = [s % q for s in shifts]
    if len(set(residues)) != len(residues):
        raise HypothesisError("shifts must be pairwise distinct mod q")
    t = chi.table

    zero_present = any(r == 0 for r in residues)
    if zero_present and reduce_zero_shift:
        rest = [s for s in shifts if s % q != 0]
        fold = f.values * chi.values(np.arange(len(f.values), dtype=np.int64))
        if len(rest) == 1:
            fn = lambda lo, hi: K.sum_single(
                fold, t.index, t.roots, q, chi.m, rest[0] % q, lo, hi)
        else:
            fn = lambda lo, hi: K.sum_multi(
                fold, t.index, t.roots, q, chi.m, rest, lo, hi)
    else:
        fn = lambda lo, hi: K.sum_multi(
            f.values, t.index, t.roots, q, chi.m, shifts, lo, hi)
    value = _run_parts(fn, 1, N, workers)
    return _report(chi, f, shifts, N, value)


@dataclass(frozen=True)
class RationalSumReport:
    q: int
    m: int
    value: complex
    bound: float  # (V - U)/sqrt(q) + sqrt(q) ln q
    terms: int
    checked: bool  # False when hypothesis checks were skipped


def _interval_bound(q: int, U: int, V: int) -> float:
    return (V - U) / math.sqrt(q) + math.sqrt(q) * math.log(q)


def _rational_accumulate(table: CharTable, m: int, p_nums, p_dens, a_nums, a_dens,
                         U: int, V: int) -> complex:
    """sum over U < s <= V of chi(prod(p_num*s + a_num) / prod(p_den*s + a_den)),
    a factor of 0 on either side zeroing the term."""
    q = np.uint64(table.q)
    qm1 = np.uint64(table.q - 1)
    mm = np.uint64(m)
    index = table.index
    total = 0j
    lo = U + 1
    while lo <= V:
        hi = min(lo + _CHUNK - 1, V)
        s = np.arange(lo, hi + 1, dtype=np.int64) % table.q
        s = s.astype(np.uint64)
        ksum = np.zeros(len(s), dtype=np.uint64)
        dead = np.zeros(len(s), dtype=bool)
        for plist, alist, sign in ((p_nums, a_nums, 1), (p_dens, a_dens, -1)):
            for p, a in zip(plist, alist):
                t = (np.uint64(p % table.q) * s + np.uint64(a % table.q)) % q
                dead |= t == 0
                k = index[t.astype(np.int64)].astype(np.uint64)
                if sign < 0:
                    k = (qm1 - k) % qm1
                ksum = (ksum + k) % qm1
        vals = table.roots[((mm * ksum) % qm1).astype(np.int64)]
        vals[dead] = 0
        total += complex(vals.sum())
        lo = hi + 1
    return total


def rational_char_sum(chi: DirichletChar, p1: int, p2: int, a: int,
                      U: int, V: int, checked: bool = True) -> RationalSumReport:
    """sum over U < m <= V of chi((p1 m + a)/(p2 m + a)), inverse of 0 taken
    as 0 termwise."""
    q = chi.q
    if U > V:
        raise ValueError(f"need U <= V, got U={U} > V={V}")
    if checked:
        if p1 % q == 0 or p2 % q == 0:
            raise HypothesisError("p1 p2 must be coprime to q")
        if (p1 - p2) % q == 0:
            raise HypothesisError("p1 = p2 (mod q) is excluded")
        if a % q == 0:
            raise HypothesisError("a must be coprime to q")
    value = _rational_accumulate(chi.table, chi.m, [p1], [p2], [a], [a], U, V)
    return RationalSumReport(q=q, m=chi.m, value=value,
                             bound=_interval_bound(q, U, V), terms=V - U,
                             checked=checked)


def multi_rational_char_sum(chi: DirichletChar, p1: int, p2: int, shifts,
                            U: int, V: int, checked: bool = True) -> RationalSumReport:
    """sum over U < m <= V of chi(prod_i (p1 m + b_i) / prod_i (p2 m + b_i))."""
    q = chi.q
    b = [int(x) for x in shifts]
    if U > V:
        raise ValueError(f"need U <= V, got U={U} > V={V}")
    if len(b) < 2:
        raise HypothesisError(f"need at least 2 shifts, got {len(b)}")
    if checked:
        for i, bi in enumerate(b):
            if bi % q == 0:
                raise HypothesisError(f"b_{i} = {bi} is not coprime to q")
        if len({bi % q for bi in b}) != len(b):
            raise HypothesisError("shifts must be pairwise distinct mod q")
        if p1 % q == 0 or p2 % q == 0:
            raise HypothesisError("p1 p2 must be coprime to q")
        if (p1 - p2) % q == 0:
            raise HypothesisError("p1 = p2 (mod q) is excluded")
        for i, bi in enumerate(b):
            inv_bi = pow(bi % q, q - 2, q)
            for j, bj in enumerate(b):
                if i != j and (p2 - inv_bi * bj * p1) % q == 0:
                    raise HypothesisError(
                        f"p2 = b_{i}^-1 b_{j} p1 (mod q) fails for (i,j)=({i},{j})")
    value = _rational_accumulate(chi.table, chi.m, [p1] * len(b), [p2] * len(b),
                                 b, b, U, V)
    return RationalSumReport(q=q, m=chi.m, value=value,
                             bound=_interval_bound(q, U, V), terms=V - U,
                             checked=checked)


def weil_complete_sum(chars, shifts, poly) -> tuple[complex, float]:
    """Complete sum over x mod q of chi_1(x+c_1)...chi_r(x+c_r) e(f(x)/q).

    poly lists the coefficients of f ascending from the constant term. Returns
    (value, (r + d) sqrt(q)); the inequality |value| <= bound is a theorem, so
    a violation raises rather than being reported.
    """
    chars = list(chars)
    shifts = [int(c) for c in shifts]
    if not chars:
        raise ValueError("need at least one character")
    if len(shifts) != len(chars):
        raise ValueError(f"{len(chars)} characters but {len(shifts)} shifts")
    q = chars[0].q
    if any(c.q != q for c in chars):
        raise ValueError("characters must share one modulus")
    if q > WEIL_Q_CAP:
        raise CapacityError(f"complete sum over q = {q} terms exceeds the 10^8 guard")
    if len({c % q for c in shifts}) != len(shifts):
        raise HypothesisError("shifts must be pairwise distinct mod q")

    coeffs = [int(c) % q for c in (poly if poly else [0])]
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    d = len(coeffs) - 1
    if d == 0 and all(c.is_principal for c in chars):
        raise HypothesisError("all characters principal and the polynomial is "
                              "constant; the bound hypothesis fails")

    table = chars[0].table
    qm1 = np.uint64(q - 1)
    r = len(chars)
    total = 0j
    lo = 0
    while lo < q:
        hi = min(lo + _CHUNK, q)
        x = np.arange(lo, hi, dtype=np.uint64)
        ksum = np.zeros(len(x), dtype=np.uint64)
        dead = np.zeros(len(x), dtype=bool)
        for c, chi_i in zip(shifts, chars):
            t = (x + np.uint64(c % q)) % np.uint64(q)
            dead |= t == 0
            k = (np.uint64(chi_i.m) * table.index[t.astype(np.int64)].astype(np.uint64)) % qm1
            ksum = (ksum + k) % qm1
        vals = table.roots[ksum.astype(np.int64)]
        vals[dead] = 0
        fx = np.zeros(len(x), dtype=np.uint64)
        for c in reversed(coeffs):
            fx = (fx * x + np.uint64(c)) % np.uint64(q)
        vals = vals * np.exp(2j * np.pi * fx.astype(np.float64) / q)
        total += complex(vals.sum())
        lo = hi

    bound = (r + d) * math.sqrt(q)
    if abs(total) > bound + 1e-6:
        raise RuntimeError(
            f"complete sum {abs(total):.6f} exceeds (r+d)sqrt(q) = {bound:.6f}; "
            "this is a theorem and indicates an arithmetic bug")
    return total, bound
