"""End-to-end gate: ten pass/fail checks over the whole stack.

Each test prints one [ACCEPTANCE] line past pytest's capture, so a plain
`pytest tests/test_acceptance.py` run shows the verdicts inline.  Frozen
reference constants come from tools/prebuild_oracle.py; rerun that script
and diff tools/oracle_values.json before touching any of them.
"""

import contextlib
import csv
import io
import math
import random
import time

import numpy as np
import pytest

from charsum import (
    br_product_identity_check,
    build_char_table,
    build_table,
    classify,
    make_params,
    multi_shifted_sum,
    partition,
    rational_char_sum,
    run_sweep,
    shifted_sum,
    smooth_counts,
    weil_complete_sum,
)
from charsum.harness import ExperimentConfig, read_csv_body
from charsum.multfunc import MultFuncSpec

PRIMES_TO_499 = [p for p in range(3, 500)
                 if all(p % d for d in range(2, int(p**0.5) + 1))]

# max ratio |S| / (N ln ln q / ln q) per family over the q = 10007 reference
# grid, frozen from tools/prebuild_oracle.py
REFERENCE_MAX_RATIO = {
    "moebius": 0.35911294289190665,
    "liouville": 0.307848623878791,
    "random_pm1": 0.46034316520742735,
}


@pytest.fixture
def gate(capsys):
    """Collect problems, then print one verdict line outside pytest capture."""
    @contextlib.contextmanager
    def _gate(name: str):
        problems: list[str] = []
        ok = False
        try:
            yield problems
            ok = not problems
        finally:
            with capsys.disabled():
                print(f"\n[ACCEPTANCE] {name}: {'PASS' if ok else 'FAIL'}")
        assert ok, f"{name}: " + "; ".join(problems[:8])
    return _gate


def test_01_weil_bound_on_random_complete_sums(gate):
    """1000 random complete sums stay under (r+d) sqrt(q) with 1e-6 slack."""
    rng = random.Random(0x5EED01)
    tables = {}
    t0 = time.perf_counter()
    with gate("weil bound on 1000 random complete sums") as problems:
        for i in range(1000):
            q = rng.choice(PRIMES_TO_499)
            if q not in tables:
                tables[q] = build_char_table(q)
            r = rng.randint(1, min(4, q - 1))
            shifts = rng.sample(range(q), r)
            ms = [rng.randrange(q - 1) for _ in range(r)]
            if not any(ms):
                # the bound needs at least one non-principal factor
                ms[rng.randrange(r)] = rng.randrange(1, q - 1)
            poly = [rng.randrange(q) for _ in range(rng.randint(1, 4))]
            chars = [tables[q].char(m) for m in ms]
            value, bound = weil_complete_sum(chars, shifts, poly)
            if abs(value) > bound + 1e-6:
                problems.append(f"instance {i} (q={q}): |{value:.6f}| > {bound:.6f}")
        elapsed = time.perf_counter() - t0
        if elapsed >= 30:
            problems.append(f"took {elapsed:.1f}s, limit 30s")


def test_02_orthogonality_and_multiplicativity(gate):
    rng = np.random.default_rng(0x5EED02)
    t0 = time.perf_counter()
    with gate("orthogonality and multiplicativity at q in {7, 101, 499}") as problems:
        for q in (7, 101, 499):
            table = build_char_table(q)
            n = np.arange(1, q)
            worst = 0.0
            for m in range(1, q - 1):
                worst = max(worst, abs(table.char(m).values(n).sum()))
            if worst >= 1e-6:
                problems.append(f"q={q}: a non-principal character sums to {worst:.3g}")
            # 1e4 random pairs per q, split across 5 characters
            for m in rng.integers(0, q - 1, size=5):
                chi = table.char(int(m))
                a = rng.integers(0, 10**6, size=2000)
                b = rng.integers(0, 10**6, size=2000)
                err = np.abs(chi.values(a * b) - chi.values(a) * chi.values(b)).max()
                if err > 1e-12:
                    problems.append(f"q={q}, m={m}: multiplicativity off by {err:.3g}")
        elapsed = time.perf_counter() - t0
        if elapsed >= 10:
            problems.append(f"took {elapsed:.1f}s, limit 10s")


def _trial_division_class(n, X, Y):
    """Window-prime profile of one integer, by plain trial division."""
    r = 0
    m, d = n, 2
    while d * d <= m:
        if m % d == 0:
            e = 0
            while m % d == 0:
                m //= d
                e += 1
            if X < d <= Y:
                if e >= 2:
                    return ("sq", 0)
                r += 1
        d += 1
    if m > 1 and X < m <= Y:
        r += 1
    return ("B", r) if r else ("T", 0)


def test_03_partition_identity_and_classify_oracle(gate):
    """Class sizes sum to N exactly and classify matches trial division."""
    N = 10_000
    with gate("partition identity and per-integer classify oracle") as problems:
        for X, Y in ((10, 100), (5, 50), (20, 200)):
            params = make_params(10007, 0.1, A=1.0, X=X, Y=Y)
            part = partition(N, params)
            total = (part.t_set_size + part.square_excluded
                     + sum(part.br_sizes.values()))
            if total != N:
                problems.append(f"(X,Y)=({X},{Y}): classes sum to {total}, not {N}")
            bad = 0
            for n in range(1, N + 1):
                c = classify(n, params)
                got = ("sq", 0) if c.kind == "square_excluded" else (c.kind, c.r)
                if got != _trial_division_class(n, X, Y):
                    bad += 1
            if bad:
                problems.append(f"(X,Y)=({X},{Y}): classify disagrees on {bad} integers")


def test_04_rfold_product_identity(gate):
    N = 10_000
    t0 = time.perf_counter()
    with gate("r-fold product identity for every occurring r") as problems:
        params = make_params(10007, 0.1, A=1.0, X=10, Y=100)
        occurring = sorted(partition(N, params).br_sizes)
        if occurring != [1, 2, 3]:  # frozen: tools/prebuild_oracle.py
            problems.append(f"expected r in [1, 2, 3], partition found {occurring}")
        for r in occurring:
            if not br_product_identity_check(r, N, params):
                problems.append(f"identity fails at r = {r}")
        elapsed = time.perf_counter() - t0
        if elapsed >= 10:
            problems.append(f"took {elapsed:.1f}s, limit 10s")


def _factor_profiles(limit):
    """Smallest and largest prime factor per n <= limit, by trial division."""
    small = np.zeros(limit + 1, dtype=np.int64)
    large = np.zeros(limit + 1, dtype=np.int64)
    small[1] = 10**9  # 1 has no prime factor: rough for every y, smooth too
    large[1] = 1
    for n in range(2, limit + 1):
        m, d, first, last = n, 2, 0, 0
        while d * d <= m:
            if m % d == 0:
                first = first or d
                last = d
                while m % d == 0:
                    m //= d
            d += 1
        if m > 1:
            first, last = first or m, m
        small[n], large[n] = first, last
    return small, large


def test_05_smooth_counts_vs_naive_factorization(gate):
    """smooth_counts agrees with per-integer factorization on its whole domain."""
    LIMIT = 10_000
    small, large = _factor_profiles(LIMIT)
    with gate("smooth/rough counts match naive factorization") as problems:
        sc = smooth_counts(20, 3)
        if (sc.phi, sc.psi) != (7, 10):  # enumeration by hand
            problems.append(f"(x,y)=(20,3) gave ({sc.phi}, {sc.psi}), want (7, 10)")
        for y in (3, 10, 30, 100):
            rough = np.cumsum(small > y)
            smooth = np.cumsum((large >= 1) & (large <= y))
            bad = 0
            for x in range(y, LIMIT + 1):
                got = smooth_counts(x, y)
                if got.phi != rough[x] or got.psi != smooth[x]:
                    bad += 1
            if bad:
                problems.append(f"y={y}: {bad} of {LIMIT - y + 1} x values disagree")


def test_06_full_period_rational_sums(gate):
    """200 random full-period sums: degree-2 bound and a termwise oracle."""
    rng = random.Random(0x5EED06)
    tables = {}
    with gate("full-period rational sums: bound and termwise oracle") as problems:
        for i in range(200):
            q = rng.choice(PRIMES_TO_499)
            if q not in tables:
                tables[q] = build_char_table(q)
            chi = tables[q].char(rng.randrange(1, q - 1))
            p1 = rng.randrange(1, 3 * q)
            while p1 % q == 0:
                p1 = rng.randrange(1, 3 * q)
            p2 = rng.randrange(1, 3 * q)
            while p2 % q == 0 or (p2 - p1) % q == 0:
                p2 = rng.randrange(1, 3 * q)
            a = rng.randrange(1, 2 * q)
            while a % q == 0:
                a = rng.randrange(1, 2 * q)
            rep = rational_char_sum(chi, p1, p2, a, 0, q)
            if abs(rep.value) > 2 * math.sqrt(q) + 1e-6:
                problems.append(f"instance {i} (q={q}): |{abs(rep.value):.6f}| "
                                f"> 2 sqrt({q})")
            brute = 0j
            zeroed = 0
            for mm in range(1, q + 1):
                den = (p2 * mm + a) % q
                if den == 0:
                    zeroed += 1
                    continue  # 1/0 = 0: the term drops out entirely
                num = ((p1 * mm + a) * pow(den, q - 2, q)) % q
                brute += complex(chi.values(num))
            if zeroed != 1:
                problems.append(f"instance {i}: {zeroed} zeroed terms in a period")
            if abs(brute - rep.value) > 1e-9:
                problems.append(f"instance {i}: termwise oracle off by "
                                f"{abs(brute - rep.value):.3g}")


def test_07_ratio_tracking_sweep(gate, tmp_path):
    """The reference grid: every ratio finite, family maxima within 3x C*."""
    cfg = ExperimentConfig.from_json({
        "q_list": [10007, 100003, 1000003],
        "theta_list": [0.6, 0.8, 1.0],
        "epsilon": 0.1,
        "A": 1.0,
        "f_specs": ["moebius", "liouville", "random-pm1"],
        "char_indices": ["legendre", "sweep:4"],
        "shift_sets": [[1]],
        "seeds": [1, 2, 3],
    })
    out = tmp_path / "sweep.csv"
    t0 = time.perf_counter()
    summary = run_sweep(cfg, out, workers=1)
    elapsed = time.perf_counter() - t0
    with gate("sweep ratios finite, family maxima within 3x reference") as problems:
        rows = list(csv.DictReader(io.StringIO(read_csv_body(out))))
        if len(rows) != 225:
            problems.append(f"expected 225 rows, got {len(rows)}")
        worst: dict = {}
        for row in rows:
            if row["error"]:
                problems.append(f"row q={row['q']} theta={row['theta']} errored: "
                                f"{row['error']}")
                continue
            ratio = float(row["ratio"])
            if not math.isfinite(ratio):
                problems.append(f"non-finite ratio at q={row['q']} "
                                f"f={row['f_family']} m={row['char_index']}")
                continue
            fam = row["f_family"].replace("-", "_")
            worst[fam] = max(worst.get(fam, 0.0), ratio)
        for fam, cap in REFERENCE_MAX_RATIO.items():
            got = worst.get(fam)
            if got is None:
                problems.append(f"no rows for family {fam}")
            elif got > 3 * cap:
                problems.append(f"{fam}: max ratio {got:.4f} exceeds 3 * {cap:.4f}")
        if elapsed >= 600:
            problems.append(f"took {elapsed:.0f}s, limit 600s")
        if summary.get("errors"):
            problems.append(f"summary reports {summary['errors']} errored rows")


def test_08_zero_shift_reduction_matches_direct(gate):
    """Folding a zero shift into f gives the same value as summing directly."""
    rng = random.Random(0x5EED08)
    fs = {name: build_table(MultFuncSpec.parse(name, seed=7), 2000)
          for name in ("moebius", "liouville", "random-pm1", "random-unit")}
    tables = {q: build_char_table(q) for q in (101, 499, 1009)}
    with gate("zero-shift reduction equals direct evaluation") as problems:
        for i in range(100):
            q = rng.choice((101, 499, 1009))
            chi = tables[q].char(rng.randrange(1, q - 1))
            t = rng.choice((2, 3))
            shifts = [q * rng.randint(0, 2)]  # one shift lands on 0 mod q
            shifts += rng.sample(range(1, q), t - 1)
            rng.shuffle(shifts)
            f = fs[rng.choice(sorted(fs))]
            N = rng.randint(50, 2000)
            folded = multi_shifted_sum(f, chi, shifts, N, reduce_zero_shift=True)
            direct = multi_shifted_sum(f, chi, shifts, N, reduce_zero_shift=False)
            gap = abs(folded.value - direct.value)
            if gap > 1e-9:
                problems.append(f"instance {i} (q={q}, t={t}): paths differ by "
                                f"{gap:.3g}")


def test_09_large_scale_performance(gate):
    """q = 1000003, N = 10^7: tables under 30s, the sum under 60s, one thread."""
    q, N = 1000003, 10_000_000
    with gate("q = 1000003, N = 10^7 performance envelope") as problems:
        t0 = time.perf_counter()
        f = build_table(MultFuncSpec.parse("moebius"), N)
        table = build_char_table(q)
        t_build = time.perf_counter() - t0
        chi = table.char((q - 1) // 2)  # the quadratic character
        t0 = time.perf_counter()
        rep = shifted_sum(f, chi, 1, N, workers=1)
        t_sum = time.perf_counter() - t0
        if t_build >= 30:
            problems.append(f"table construction took {t_build:.1f}s, limit 30s")
        if t_sum >= 60:
            problems.append(f"sum took {t_sum:.1f}s, limit 60s")
        if not abs(rep.value) <= N:
            problems.append(f"|S| = {abs(rep.value)} exceeds the trivial bound")


def test_10_byte_identical_reruns(gate, tmp_path):
    """Same config, same seeds: the CSV body is byte-identical on rerun."""
    cfg = ExperimentConfig.from_json({
        "q_list": [10007],
        "theta_list": [0.8],
        "epsilon": 0.1,
        "A": 1.0,
        "f_specs": ["moebius", "random-unit"],
        "char_indices": ["legendre", 2],
        "shift_sets": [[1], [1, 2]],
        "seeds": [3],
    })
    with gate("identical configs and seeds give byte-identical bodies") as problems:
        bodies = []
        for tag, workers in (("a", 1), ("b", 1), ("c", 4)):
            out = tmp_path / f"{tag}.csv"
            run_sweep(cfg, out, workers=workers)
            bodies.append(read_csv_body(out))
        if not bodies[0].strip():
            problems.append("sweep produced an empty body")
        if bodies[0] != bodies[1]:
            problems.append("rerun with identical settings changed the body")
        if bodies[0] != bodies[2]:
            problems.append("worker count changed the body")
