"""Smoothness cut (X, Y], rough/smooth counting, the B_r classes, and the
dyadic-block diagnostics.

Every n <= N falls in exactly one class: T (no prime factor in (X, Y]),
square-excluded (p^2 | n for some p in the window), or B_r (exactly r distinct
window primes, none repeated). Counting runs off one smallest-prime-factor
sieve pass, never per-integer factoring.
"""

from dataclasses import dataclass
import math
import warnings

import numpy as np

from ._backend import kernels as K
from .dirichlet import DirichletChar
from .errors import CapacityError, RegimeError
from .multfunc import MultFuncTable
from .primefield import Modulus, factorize
from .sums import LOGLOG_MIN_Q

N_CAP = 10**8
IDENTITY_CAP = 10**6


@dataclass(frozen=True)
class SmoothnessParams:
    q: int
    epsilon: float
    A: float
    X: float
    Y: float


def _primes_interval(lo: float, hi: float) -> np.ndarray:
    """Primes p with lo < p <= hi."""
    top = int(math.floor(hi))
    if top < 2:
        return np.empty(0, dtype=np.int64)
    primes = K.primes_from_spf(K.spf_sieve(top))
    return primes[primes > lo]


def make_params(q: int, epsilon: float, A: float = 2.0,
                X: float | None = None, Y: float | None = None) -> SmoothnessParams:
    """Parameters of the smoothness cut; defaults X = (ln q)^2, Y = q^(eps/4).

    At desk scale the defaults are usually degenerate (X >= Y); that case is
    rejected with a pointer at the overrides rather than silently producing an
    empty prime window.
    """
    Modulus(q)
    if epsilon <= 0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    if A < 1:
        raise ValueError(f"A must be >= 1, got {A}")
    overridden = X is not None or Y is not None
    if X is None:
        X = math.log(q) ** 2
    if Y is None:
        Y = q ** (epsilon / 4)
    if not overridden and X >= Y:
        raise RegimeError(
            f"default cut is degenerate at this scale: X = (ln q)^2 = {X:.4g} "
            f">= Y = q^(eps/4) = {Y:.4g}; the asymptotic regime is not "
            "reached; pass explicit X and Y overrides to proceed")
    if X < Y <= 10**6:
        ps = _primes_interval(X, Y)
        if len(ps) < 3:
            warnings.warn(
                f"only {len(ps)} primes in ({X:.4g}, {Y:.4g}]: {ps.tolist()}",
                stacklevel=2)
    return SmoothnessParams(q=q, epsilon=epsilon, A=A, X=float(X), Y=float(Y))


@dataclass(frozen=True)
class SmoothCounts:
    x: float
    y: float
    phi: int  # n <= x free of prime divisors <= y
    psi: int  # n <= x free of prime divisors > y
    u: float  # ln x / ln y

    @property
    def mixed(self) -> int:
        """n <= x with prime factors on both sides of y."""
        return int(self.x) + 1 - self.phi - self.psi


def smooth_counts(x: float, y: float) -> SmoothCounts:
    """Exact rough and smooth counts below x by sieve enumeration."""
    if not 2 <= y <= x:
        raise ValueError(f"need 2 <= y <= x, got x={x}, y={y}")
    if x > N_CAP:
        raise CapacityError(f"x = {x} exceeds the 10^8 sieve guard")
    xi = int(math.floor(x))
    primes = K.primes_from_spf(K.spf_sieve(xi))

    rough = np.ones(xi + 1, dtype=bool)
    rough[0] = False
    for p in primes[primes <= y]:
        rough[p::p] = False
    smooth = np.ones(xi + 1, dtype=bool)
    smooth[0] = False
    for p in primes[primes > y]:
        smooth[p::p] = False

    return SmoothCounts(x=float(x), y=float(y), phi=int(rough.sum()),
                        psi=int(smooth.sum()), u=math.log(x) / math.log(y))


@dataclass(frozen=True)
class NClass:
    kind: str  # "T" | "square_excluded" | "B"
    r: int = 0

    def __str__(self):
        return f"B({self.r})" if self.kind == "B" else self.kind


T_CLASS = NClass("T")
SQUARE_EXCLUDED = NClass("square_excluded")


def classify(n: int, params: SmoothnessParams) -> NClass:
    """Class of one integer, by factoring it directly."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    X, Y = params.X, params.Y
    r = 0
    for p, e in factorize(n).items():
        if X < p <= Y:
            if e >= 2:
                return SQUARE_EXCLUDED
            r += 1
    return NClass("B", r) if r else T_CLASS


def _class_arrays(N: int, params: SmoothnessParams) -> tuple[np.ndarray, np.ndarray]:
    """cnt[n] = distinct window primes dividing n; sq[n] = some window p^2 | n."""
    cnt = np.zeros(N + 1, dtype=np.uint8)
    sq = np.zeros(N + 1, dtype=bool)
    if N >= 2:
        for p in _primes_interval(params.X, min(params.Y, N)):
            p = int(p)
            cnt[p::p] += 1
            if p * p <= N:
                sq[p * p :: p * p] = True
    return cnt, sq


@dataclass(frozen=True)
class BrPartition:
    N: int
    params: SmoothnessParams
    t_set_size: int
    square_excluded: int
    br_sizes: dict[int, int]  # r -> |B_r|, only attained r

    @property
    def total(self) -> int:
        return self.t_set_size + self.square_excluded + sum(self.br_sizes.values())


def partition(N: int, params: SmoothnessParams) -> BrPartition:
    """Classify every n <= N in one sieve pass."""
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    if N > N_CAP:
        raise CapacityError(f"N = {N} exceeds the 10^8 sieve guard")
    cnt, sq = _class_arrays(N, params)
    cnt, sq = cnt[1:], sq[1:]
    t_size = int((cnt == 0).sum())
    sq_size = int(sq.sum())
    br = {}
    for r in range(1, int(cnt.max()) + 1):
        size = int(((cnt == r) & ~sq).sum())
        if size:
            br[r] = size
    return BrPartition(N=N, params=params, t_set_size=t_size,
                       square_excluded=sq_size, br_sizes=br)


def lemma1_report(N: int, params: SmoothnessParams) -> tuple[int, float]:
    """|T| plus the normalized ratio |T| ln q / (N ln ln q)."""
    if params.q < LOGLOG_MIN_Q:
        raise ValueError(f"report needs q >= {LOGLOG_MIN_Q}")
    t_size = partition(N, params).t_set_size
    ratio = t_size * math.log(params.q) / (N * math.log(math.log(params.q)))
    return t_size, ratio


def br_product_identity_check(r: int, N: int, params: SmoothnessParams) -> bool:
    """Each n in B_r factors as p*m (window prime p, coprime m in B_{r-1})
    in exactly r ways; verified exhaustively."""
    if r < 1:
        raise ValueError(f"r must be >= 1, got {r}")
    if N > IDENTITY_CAP:
        raise CapacityError(f"exhaustive check capped at N = 10^6, got {N}")
    cnt, sq = _class_arrays(N, params)
    in_br = (cnt == r) & ~sq
    in_prev = (cnt == r - 1) & ~sq
    in_br[0] = in_prev[0] = False

    hits = np.zeros(N + 1, dtype=np.int32)
    for p in _primes_interval(params.X, min(params.Y, N)):
        p = int(p)
        m = np.arange(1, N // p + 1)
        n = p * m
        ok = in_br[n] & in_prev[m] & (m % p != 0)
        np.add.at(hits, n[ok], 1)
    return bool((hits[in_br] == r).all())


def dyadic_blocks(params: SmoothnessParams) -> list[tuple[float, float]]:
    """Blocks (2^k X, min(2^(k+1) X, Y)] covering (X, Y] disjointly."""
    X, Y = params.X, params.Y
    if X >= Y:
        raise RegimeError(f"need X < Y for dyadic blocks, got X={X}, Y={Y}")
    blocks = []
    Q = X
    while Q < Y:
        blocks.append((Q, min(2 * Q, Y)))
        Q = 2 * Q
    return blocks


@dataclass(frozen=True)
class BlockDiagnostics:
    Q: float
    Q1: float
    s_r: complex  # full double sum over the block, B_{r-1} membership kept
    w1: float  # sum over m <= N/Q of |inner sum over block primes|
    w2: float  # same with the square
    cauchy_ok: bool  # w1^2 <= (N/Q) w2


@dataclass(frozen=True)
class DiagnosticsReport:
    r: int
    N: int
    params: SmoothnessParams
    blocks: list[BlockDiagnostics]

    @property
    def cauchy_check(self) -> bool:
        return all(b.cauchy_ok for b in self.blocks)


def diagnostics(f: MultFuncTable, chi: DirichletChar, a: int, N: int, r: int,
                params: SmoothnessParams) -> DiagnosticsReport:
    """Per dyadic block: S_r(Q, Q1), W1, W2, and the Cauchy inequality check."""
    if r < 1:
        raise ValueError(f"r must be >= 1, got {r}")
    if N > f.N:
        raise ValueError(f"N = {N} exceeds the f table (built to {f.N})")
    if chi.is_principal:
        raise RegimeError("diagnostics follow the shifted-sum hypotheses; "
                          "principal character rejected")
    q = chi.q
    cnt, sq = _class_arrays(N, params)
    in_prev = (cnt == r - 1) & ~sq
    in_prev[0] = False
    fv = f.values
    ps_all = _primes_interval(params.X, min(params.Y, N))

    out = []
    for Q, Q1 in dyadic_blocks(params):
        ps = ps_all[(ps_all > Q) & (ps_all <= Q1)]
        M = min(int(N / Q), N)
        inner = np.zeros(M + 1, dtype=np.complex128)
        s_r = 0j
        for p in ps:
            p = int(p)
            if p % q == 0:
                continue
            m = np.arange(1, N // p + 1)
            chivals = chi.values(p * m + a)
            inner[1 : len(m) + 1] += fv[p] * chivals
            keep = in_prev[m] & (m % q != 0)
            s_r += fv[p] * complex((fv[m[keep]] * chivals[keep]).sum())
        absin = np.abs(inner[1:])
        w1 = float(absin.sum())
        w2 = float((absin * absin).sum())
        ok = w1 * w1 <= (N / Q) * w2 * (1 + 1e-6) + 1e-9
        out.append(BlockDiagnostics(Q=Q, Q1=Q1, s_r=s_r, w1=w1, w2=w2, cauchy_ok=ok))
    return DiagnosticsReport(r=r, N=N, params=params, blocks=out)


def br_reconstruction(f: MultFuncTable, chi: DirichletChar, a: int, N: int,
                      r: int, params: SmoothnessParams) -> tuple[complex, complex]:
    """Both sides of the r-fold counting identity.

    Left: (1/r) * sum over window primes p and m in B_{r-1} with pm <= N,
    (m, pq) = 1, of f(p) f(m) chi(pm + a). Right: the B_r piece of the shifted
    sum itself. Equal up to rounding when f is multiplicative.
    """
    if r < 1:
        raise ValueError(f"r must be >= 1, got {r}")
    q = chi.q
    cnt, sq = _class_arrays(N, params)
    in_prev = (cnt == r - 1) & ~sq
    in_br = (cnt == r) & ~sq
    in_prev[0] = in_br[0] = False
    fv = f.values

    lhs = 0j
    for p in _primes_interval(params.X, min(params.Y, N)):
        p = int(p)
        if p % q == 0:
            continue
        m = np.arange(1, N // p + 1)
        keep = in_prev[m] & (m % q != 0) & (m % p != 0)
        m = m[keep]
        lhs += fv[p] * complex((fv[m] * chi.values(p * m + a)).sum())
    lhs /= r

    n = np.nonzero(in_br[: N + 1])[0]
    n = n[n % q != 0]
    rhs = complex((fv[n] * chi.values(n + a)).sum())
    return lhs, rhs
