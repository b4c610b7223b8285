#!/usr/bin/env python3
"""Standalone brute-force oracle used to freeze expected test values.

Everything here is deliberately naive: trial-division factoring, dict-based
discrete logs, per-term sums with cmath. No imports from the charsum package,
so these numbers are an independent check on it. Run:

    python tools/prebuild_oracle.py > tools/oracle_values.json

The frozen constants in tests/ were produced by this script; regenerate and
compare if a test's expected value is ever in doubt.
"""

import cmath
import json
import math
import sys

TWO_PI = 2.0 * math.pi
MASK64 = (1 << 64) - 1


# ---------------------------------------------------------------------------
# elementary number theory, trial-division flavor


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def factorize(n: int) -> dict:
    out = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def mobius(n: int) -> int:
    f = factorize(n) if n > 1 else {}
    if any(e > 1 for e in f.values()):
        return 0
    return -1 if len(f) % 2 else 1


def liouville(n: int) -> int:
    f = factorize(n) if n > 1 else {}
    return -1 if sum(f.values()) % 2 else 1


def primitive_root(q: int) -> int:
    phi = q - 1
    ps = list(factorize(phi))
    g = 2
    while True:
        if all(pow(g, phi // p, q) != 1 for p in ps):
            return g
        g += 1


def dlog_table(q: int, g: int) -> dict:
    table = {}
    x = 1
    for k in range(q - 1):
        table[x] = k
        x = (x * g) % q
    return table


def char_value(q: int, m: int, ind: dict, x: int) -> complex:
    x %= q
    if x == 0:
        return 0j
    return cmath.exp(2j * math.pi * m * ind[x] / (q - 1))


# ---------------------------------------------------------------------------
# keyed counter-based draws for the random multiplicative families


def splitmix64(z: int) -> int:
    z = (z + 0x9E3779B97F4A7C15) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def draw64(seed: int, p: int, k: int = 1) -> int:
    return splitmix64(splitmix64(splitmix64(seed & MASK64) ^ p) ^ k)


def draw_pm1(seed: int, p: int, k: int = 1) -> float:
    return 1.0 if (draw64(seed, p, k) >> 63) == 0 else -1.0


def random_pm1_value(seed: int, n: int) -> float:
    # completely multiplicative extension of the prime draws
    v = 1.0
    for p, e in factorize(n).items():
        v *= draw_pm1(seed, p) ** e
    return v


# ---------------------------------------------------------------------------
# sum evaluators, one term at a time


def shifted_sum(q, m, ind, fvals, a, N):
    return sum(fvals[n] * char_value(q, m, ind, n + a) for n in range(1, N + 1))


def multi_shifted_sum(q, m, ind, fvals, shifts, N):
    total = 0j
    for n in range(1, N + 1):
        term = complex(fvals[n])
        for a in shifts:
            term *= char_value(q, m, ind, n + a)
        total += term
    return total


def rational_sum(q, m, ind, p1, p2, a, U, V):
    # chi((p1*x+a)/(p2*x+a)) termwise, with inverse-of-zero treated as zero
    total = 0j
    for x in range(U + 1, V + 1):
        num = (p1 * x + a) % q
        den = (p2 * x + a) % q
        if den == 0 or num == 0:
            continue
        total += char_value(q, m, ind, num * pow(den, q - 2, q))
    return total


def weil_sum(q, ind, chars, shifts, poly):
    total = 0j
    for x in range(1, q + 1):
        term = complex(1.0)
        for m, c in zip(chars, shifts):
            term *= char_value(q, m, ind, x + c)
        fx = 0
        for coeff in reversed(poly):
            fx = (fx * x + coeff) % q
        term *= cmath.exp(2j * math.pi * fx / q)
        total += term
    return total


# ---------------------------------------------------------------------------
# smoothness / partition oracles


def prime_factors(n):
    return sorted(factorize(n)) if n > 1 else []


def classify(n, X, Y):
    f = factorize(n) if n > 1 else {}
    inside = {p: e for p, e in f.items() if X < p <= Y}
    if not inside:
        return ("T", 0)
    if any(e >= 2 for e in inside.values()):
        return ("square_excluded", 0)
    return ("B", len(inside))


def partition_counts(N, X, Y):
    t = sq = 0
    br = {}
    for n in range(1, N + 1):
        kind, r = classify(n, X, Y)
        if kind == "T":
            t += 1
        elif kind == "square_excluded":
            sq += 1
        else:
            br[r] = br.get(r, 0) + 1
    return t, sq, br


def smooth_counts(x, y):
    phi = psi = 0
    for n in range(1, int(x) + 1):
        ps = prime_factors(n)
        if all(p > y for p in ps):
            phi += 1
        if all(p <= y for p in ps):
            psi += 1
    return phi, psi


# ---------------------------------------------------------------------------
# the reference ratio run: max |S| / (N loglog q / log q) per coefficient family


def sweep_char_indices(q, K):
    if K == 1:
        return [1]
    out = []
    for j in range(K):
        mj = 1 + (j * (q - 3)) // (K - 1)
        if mj not in out:
            out.append(mj)
    return out


def reference_ratios(q=10007, thetas=(0.6, 0.8, 1.0), seeds=(1, 2, 3)):
    g = primitive_root(q)
    ind = dlog_table(q, g)
    char_indices = [(q - 1) // 2] + sweep_char_indices(q, 4)
    n_max = max(math.ceil(q**t) for t in thetas)

    tables = {"moebius": [0.0] * (n_max + 1), "liouville": [0.0] * (n_max + 1)}
    for n in range(1, n_max + 1):
        tables["moebius"][n] = float(mobius(n))
        tables["liouville"][n] = float(liouville(n))
    for s in seeds:
        fv = [0.0] * (n_max + 1)
        for n in range(1, n_max + 1):
            fv[n] = random_pm1_value(s, n)
        tables[f"random_pm1:{s}"] = fv

    best = {}
    rows = []
    for theta in thetas:
        N = math.ceil(q**theta)
        bound = N * math.log(math.log(q)) / math.log(q)
        for fam, fv in tables.items():
            family = fam.split(":")[0]
            for m in char_indices:
                S = shifted_sum(q, m, ind, fv, 1, N)
                ratio = abs(S) / bound
                rows.append(
                    {"theta": theta, "family": fam, "m": m, "ratio": ratio}
                )
                best[family] = max(best.get(family, 0.0), ratio)
    return best, rows


# ---------------------------------------------------------------------------


def main():
    out = {}

    # small character tables and evaluations, q = 7, g = 3, legendre m = 3
    q = 7
    g = primitive_root(q)
    ind = dlog_table(q, g)
    out["primitive_root_7"] = g
    out["primitive_root_11"] = primitive_root(11)
    out["primitive_root_3"] = primitive_root(3)
    out["index_table_7"] = [ind.get(n) for n in range(7)]  # None at 0
    out["legendre7_values"] = [
        round(char_value(7, 3, ind, n).real) if n % 7 else 0 for n in range(8)
    ]

    one = [1.0] * 20001
    out["sum_one_leg7_a1_N6"] = c2l(shifted_sum(7, 3, ind, one, 1, 6))
    out["sum_one_leg7_a1_N7"] = c2l(shifted_sum(7, 3, ind, one, 1, 7))
    out["multi_one_leg7_s12_N5"] = c2l(
        multi_shifted_sum(7, 3, ind, one, (1, 2), 5)
    )
    out["rational_leg7_p2_p3_a1_U-1_V6"] = c2l(
        rational_sum(7, 3, ind, 2, 3, 1, -1, 6)
    )
    out["weil_leg7_c01_f0"] = c2l(weil_sum(7, ind, [3, 3], [0, 1], [0]))

    q11 = 11
    ind11 = dlog_table(q11, primitive_root(q11))
    out["rational2_leg11_p2_p3_b12_full"] = c2l(
        sum(
            char_value(
                q11,
                5,
                ind11,
                ((2 * x + 1) * (2 * x + 2))
                * pow(((3 * x + 1) * (3 * x + 2)) % q11, q11 - 2, q11),
            )
            if ((3 * x + 1) * (3 * x + 2)) % q11 != 0
            and ((2 * x + 1) * (2 * x + 2)) % q11 != 0
            else 0j
            for x in range(0, 11)
        )
    )

    out["mod_pow_5_3_7"] = pow(5, 3, 7)
    out["is_prime_1000003"] = is_prime(1000003)
    out["spf_9973_is_prime"] = is_prime(9973)

    out["smooth_20_3"] = smooth_counts(20, 3)
    out["smooth_y_eq_x_20"] = smooth_counts(20, 20)
    out["classify_22_X3_Y10"] = classify(22, 3, 10)
    out["classify_35_X3_Y10"] = classify(35, 3, 10)
    out["classify_25_X3_Y10"] = classify(25, 3, 10)
    t30, sq30, br30 = partition_counts(30, 3, 10)
    out["partition_30_X3_Y10"] = {"t": t30, "sq": sq30, "br": br30}
    t4, sq4, br4 = partition_counts(10000, 10, 100)
    out["partition_10000_X10_Y100"] = {"t": t4, "sq": sq4, "br": br4}

    # dyadic blocks for X=4, Y=30 (hand check: 16 <= 30 < 32)
    X, Y = 4.0, 30.0
    blocks = []
    Q = X
    while Q < Y:
        blocks.append((Q, min(2 * Q, Y)))
        Q *= 2
    out["dyadic_4_30"] = blocks

    out["theorem_bound_10007_N10007"] = 10007 * math.log(math.log(10007)) / math.log(10007)

    best, _rows = reference_ratios()
    out["reference_max_ratio"] = best

    json.dump(out, sys.stdout, indent=2)
    print()


def c2l(z: complex):
    return [z.real, z.imag]


if __name__ == "__main__":
    main()
