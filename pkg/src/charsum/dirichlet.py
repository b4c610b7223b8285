"""Dirichlet characters mod an odd prime q, evaluated through a discrete
index table.

Every character mod q is a power of the generator character attached to a
fixed primitive root g: character m sends g**k to exp(2*pi*i*m*k/(q-1)).
Evaluation is two array lookups, which is what keeps the long sums cheap.
"""

from dataclasses import dataclass
from functools import cached_property
import math

import numpy as np

from ._backend import kernels as K
from .errors import CapacityError
from .primefield import Modulus, find_primitive_root

# index arithmetic uses uint64 products m * index[t], so q - 1 must fit in 32 bits
Q_TABLE_LIMIT = 1 << 32


@dataclass(frozen=True)
class CharTable:
    """Shared per-modulus state: index table and the (q-1)-th roots of unity.

    index[n] is the discrete log of n base g for 1 <= n < q. index[0] holds
    the sentinel q - 1, one past the largest real index; every consumer must
    mask n = 0 (mod q) before using it.
    """

    q: int
    g: int
    index: np.ndarray
    roots: np.ndarray

    def char(self, m: int) -> "DirichletChar":
        return DirichletChar(self, m % (self.q - 1))

    @property
    def principal(self) -> "DirichletChar":
        return self.char(0)

    @property
    def legendre(self) -> "DirichletChar":
        """The quadratic character, m = (q - 1) / 2."""
        return self.char((self.q - 1) // 2)


def build_char_table(q) -> CharTable:
    mod = q if isinstance(q, Modulus) else Modulus(q)
    q = mod.q
    if q > Q_TABLE_LIMIT:
        raise CapacityError(f"q = {q} exceeds the 2**32 table limit")
    g = find_primitive_root(mod)
    index = K.char_index_table(q, g)
    roots = np.exp(2j * np.pi * np.arange(q - 1, dtype=np.float64) / (q - 1))
    return CharTable(q=q, g=g, index=index, roots=roots)


@dataclass(frozen=True)
class DirichletChar:
    table: CharTable
    m: int

    def __post_init__(self):
        if not 0 <= self.m < self.table.q - 1:
            raise ValueError(f"character index {self.m} outside [0, q-1)")

    @property
    def q(self) -> int:
        return self.table.q

    @property
    def is_principal(self) -> bool:
        return self.m == 0

    @property
    def conj(self) -> "DirichletChar":
        return DirichletChar(self.table, (-self.m) % (self.q - 1))

    @cached_property
    def order(self) -> int:
        """Smallest r >= 1 with chi**r principal."""
        qm1 = self.q - 1
        return qm1 // math.gcd(self.m, qm1) if self.m else 1

    def eval_exponent(self, n: int) -> int | None:
        """Exact exponent k with chi(n) = e^(2*pi*i*k/(q-1)), None at q | n."""
        t = n % self.q
        if t == 0:
            return None
        return (self.m * int(self.table.index[t])) % (self.q - 1)

    def __call__(self, n: int) -> complex:
        k = self.eval_exponent(n)
        return 0j if k is None else complex(self.table.roots[k])

    def values(self, n) -> np.ndarray:
        """Vectorised evaluation; zeros at multiples of q."""
        t = np.asarray(n, dtype=np.int64) % self.q
        k = (np.uint64(self.m) * self.table.index[t].astype(np.uint64)) % np.uint64(self.q - 1)
        out = self.table.roots[k.astype(np.int64)]
        return np.where(t == 0, 0j, out)

    def eval_ratio(self, n: int, d: int) -> complex:
        """chi(n) * chi(d)**-1 with the convention that a zero factor kills
        the product (inverse of 0 counts as 0)."""
        tn, td = n % self.q, d % self.q
        if tn == 0 or td == 0:
            return 0j
        diff = (int(self.table.index[tn]) - int(self.table.index[td])) % (self.q - 1)
        return complex(self.table.roots[(self.m * diff) % (self.q - 1)])


def char_eval(chi: DirichletChar, n: int) -> complex:
    return chi(n)


def char_eval_ratio(chi: DirichletChar, u: int, v: int) -> complex:
    """chi(u / v) with 1/0 = 0: zero whenever q divides u or v."""
    return chi.eval_ratio(u, v)


def legendre_char(table: CharTable) -> DirichletChar:
    return table.legendre
