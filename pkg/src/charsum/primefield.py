"""Exact arithmetic modulo a prime q < 2**62.

Python integers never overflow, so these are thin, correctness-first
implementations; the compiled kernels carry the hot loops. The one
non-obvious convention: the inverse of 0 is defined to be 0, which is what
the rational character sums rely on termwise.
"""

import math
from dataclasses import dataclass

from .errors import HypothesisError

Q_LIMIT = 1 << 62

# Strong-probable-prime bases that are deterministic for all n < 3.3e24,
# which covers the full 62-bit input range.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic primality test for 0 <= n < 2**62."""
    if not 0 <= n < Q_LIMIT:
        raise HypothesisError(f"is_prime requires 0 <= n < 2**62, got {n}")
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class Modulus:
    """A verified prime modulus, 3 <= q < 2**62. Immutable and shareable."""

    q: int

    def __post_init__(self):
        if not 3 <= self.q < Q_LIMIT:
            raise HypothesisError(f"modulus must satisfy 3 <= q < 2**62, got {self.q}")
        if not is_prime(self.q):
            raise HypothesisError(f"modulus {self.q} is not prime")


def mod_mul(x: int, y: int, m: Modulus) -> int:
    return x * y % m.q


def mod_pow(x: int, e: int, m: Modulus) -> int:
    return pow(x, e, m.q)


def mod_inv(x: int, m: Modulus) -> int:
    """Inverse by Fermat; inv(0) = 0 by convention rather than an error."""
    if x == 0:
        return 0
    return pow(x, m.q - 2, m.q)


def _pollard_rho(n: int) -> int:
    # Brent's cycle variant; n is odd and composite when called.
    if n % 3 == 0:
        return 3
    seed = 1
    while True:
        y, c, m_blk = 2, seed, 128
        g = r = q = 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m_blk, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m_blk
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
        seed += 1


def factorize(n: int) -> dict[int, int]:
    """Complete prime factorization of n >= 1 as {p: exponent}."""
    if n < 1:
        raise HypothesisError(f"factorize requires n >= 1, got {n}")
    out: dict[int, int] = {}
    for p in (2, 3, 5, 7, 11, 13):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    stack = [n] if n > 1 else []
    while stack:
        v = stack.pop()
        if v == 1:
            continue
        if is_prime(v):
            out[v] = out.get(v, 0) + 1
            continue
        d = _pollard_rho(v)
        stack.append(d)
        stack.append(v // d)
    return out


def find_primitive_root(m: Modulus) -> int:
    """Smallest g >= 2 generating (Z/qZ)*, certified via the factors of q-1."""
    q = m.q
    prime_divisors = list(factorize(q - 1))
    g = 2
    while True:
        if all(pow(g, (q - 1) // p, q) != 1 for p in prime_divisors):
            return g
        g += 1
