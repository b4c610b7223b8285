"""Tables of multiplicative functions f with |f(n)| <= 1 on [1, N].

Families: moebius, liouville, the constant 1, a character twist f = chi', and
two seeded random families (f(p) in {-1, +1} or on the unit circle). Random
draws are keyed by (seed, p, k), so a table is reproducible regardless of how
the sieve happens to traverse the primes.
"""

from dataclasses import dataclass
import math
import random

import numpy as np

from ._backend import kernels as K
from .dirichlet import build_char_table
from .errors import CapacityError

N_CAP = 10**8

FAMILIES = ("moebius", "liouville", "one", "char_twist", "random_pm1", "random_unimodular")
RANDOM_FAMILIES = ("random_pm1", "random_unimodular")
PP_RULES = ("completely_multiplicative", "zero_on_higher_powers", "independent_random")

# CLI spellings
_FAMILY_TOKENS = {
    "moebius": "moebius",
    "liouville": "liouville",
    "one": "one",
    "char-twist": "char_twist",
    "random-pm1": "random_pm1",
    "random-unit": "random_unimodular",
}
_PP_TOKENS = {
    "cm": "completely_multiplicative",
    "squarefree": "zero_on_higher_powers",
    "random": "independent_random",
}


@dataclass(frozen=True)
class MultFuncSpec:
    family: str
    seed: int = 0
    twist_q: int | None = None
    twist_m: int | None = None
    # how f extends to p**k for k >= 2; random families only
    prime_power_rule: str = "completely_multiplicative"

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}; expected one of {FAMILIES}")
        if self.prime_power_rule not in PP_RULES:
            raise ValueError(f"unknown prime_power_rule {self.prime_power_rule!r}")
        if self.family == "char_twist":
            if self.twist_q is None or self.twist_m is None:
                raise ValueError("char_twist needs twist_q and twist_m")
        elif self.twist_q is not None or self.twist_m is not None:
            raise ValueError("twist parameters are only meaningful for char_twist")
        if self.prime_power_rule != "completely_multiplicative" and self.family not in RANDOM_FAMILIES:
            raise ValueError(
                f"prime_power_rule applies to random families only, not {self.family}")

    @classmethod
    def parse(cls, token: str, seed: int = 0, pp_rule: str = "cm") -> "MultFuncSpec":
        """Parse a CLI family token such as 'moebius' or 'char-twist:7,3'."""
        name, _, arg = token.partition(":")
        if name not in _FAMILY_TOKENS:
            raise ValueError(f"unknown family token {token!r}")
        family = _FAMILY_TOKENS[name]
        rule = _PP_TOKENS.get(pp_rule, pp_rule)
        kwargs = {}
        if family == "char_twist":
            try:
                tq, tm = (int(s) for s in arg.split(","))
            except ValueError:
                raise ValueError(f"char-twist takes Q,M, got {token!r}") from None
            kwargs = {"twist_q": tq, "twist_m": tm}
        elif arg:
            raise ValueError(f"family {name!r} takes no argument, got {token!r}")
        if family in RANDOM_FAMILIES:
            kwargs["seed"] = seed
            kwargs["prime_power_rule"] = rule
        elif rule != "completely_multiplicative":
            raise ValueError(
                f"prime_power_rule applies to random families only, not {name!r}")
        return cls(family=family, **kwargs)

    @property
    def label(self) -> str:
        """CSV/CLI spelling of the family."""
        if self.family == "char_twist":
            return f"char-twist:{self.twist_q},{self.twist_m}"
        return {v: k for k, v in _FAMILY_TOKENS.items()}[self.family]

    @property
    def pp_label(self) -> str:
        return {v: k for k, v in _PP_TOKENS.items()}[self.prime_power_rule]


@dataclass(frozen=True)
class MultFuncTable:
    N: int
    values: np.ndarray  # values[n] = f(n) for 1 <= n <= N; values[0] = 0
    spec: MultFuncSpec


def build_spf_sieve(N: int) -> np.ndarray:
    """Smallest-prime-factor table for 2 <= n <= N by linear sieve."""
    if not 2 <= N:
        raise ValueError(f"sieve needs N >= 2, got {N}")
    if N > N_CAP:
        raise CapacityError(f"sieve limit {N} exceeds the 10^8 memory guard")
    return K.spf_sieve(N)


def _random_prime_values(spf: np.ndarray, spec: MultFuncSpec) -> np.ndarray:
    primes = K.primes_from_spf(spf)
    if spec.family == "random_pm1":
        fp = np.zeros(len(spf), dtype=np.float64)
        fp[primes] = K.draw_pm1(spec.seed, primes.astype(np.uint64))
    else:
        fp = np.zeros(len(spf), dtype=np.complex128)
        fp[primes] = K.draw_unit(spec.seed, primes.astype(np.uint64))
    return fp


def build_table(spec: MultFuncSpec, N: int) -> MultFuncTable:
    if N < 1:
        raise ValueError(f"table needs N >= 1, got {N}")
    if N > N_CAP:
        raise CapacityError(f"table size {N} exceeds the 10^8 guard")

    if N == 1:
        dtype = np.complex128 if spec.family in ("char_twist", "random_unimodular") else np.float64
        return MultFuncTable(N=1, values=np.array([0, 1], dtype=dtype), spec=spec)

    if spec.family == "char_twist":
        chi = build_char_table(spec.twist_q).char(spec.twist_m)
        values = chi.values(np.arange(N + 1, dtype=np.int64))
        return MultFuncTable(N=N, values=values, spec=spec)

    spf = build_spf_sieve(N)
    if spec.family == "moebius":
        values = K.mobius_table(spf)
    elif spec.family == "liouville":
        values = K.liouville_table(spf)
    elif spec.family == "one":
        values = np.ones(N + 1, dtype=np.float64)
        values[0] = 0.0
    elif spec.prime_power_rule == "independent_random":
        values = K.mult_table_indep(spf, spec.seed, spec.family == "random_unimodular")
    else:
        fp = _random_prime_values(spf, spec)
        squarefree = spec.prime_power_rule == "zero_on_higher_powers"
        values = K.mult_table_from_prime_values(spf, fp, squarefree)
    return MultFuncTable(N=N, values=values, spec=spec)


def verify_multiplicativity(t: MultFuncTable, trials: int, seed: int = 0,
                            tol: float = 1e-10) -> bool:
    """Check f(ab) = f(a) f(b) on random coprime pairs with ab <= N."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = random.Random(seed)
    v = t.values
    done = 0
    while done < trials:
        a = rng.randint(1, t.N)
        b = rng.randint(1, max(1, t.N // a))
        if math.gcd(a, b) != 1:
            continue
        if abs(v[a * b] - v[a] * v[b]) > tol:
            return False
        done += 1
    return True
