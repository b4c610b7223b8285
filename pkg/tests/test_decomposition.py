"""Smoothness window (X, Y]: counts, classes, dyadic blocks, diagnostics."""

import math
import random
import warnings

import numpy as np
import pytest

from charsum.decomposition import (SQUARE_EXCLUDED, T_CLASS, NClass,
                                   br_product_identity_check,
                                   br_reconstruction, classify, diagnostics,
                                   dyadic_blocks, lemma1_report, make_params,
                                   partition, smooth_counts)
from charsum.dirichlet import build_char_table
from charsum.errors import RegimeError
from charsum.multfunc import MultFuncSpec, build_table


def _params(X, Y, q=10007, quiet=False):
    if quiet:  # windows built sparse on purpose
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", UserWarning)
            return make_params(q, 0.2, A=2.0, X=X, Y=Y)
    return make_params(q, 0.2, A=2.0, X=X, Y=Y)


def _window_primes(n, X, Y):
    out = []
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            if X < p <= Y:
                out.append((p, e))
        p += 1
    if m > 1 and X < m <= Y:
        out.append((m, 1))
    return out


# --- make_params ---------------------------------------------------------------


def test_default_cut_is_degenerate_at_desk_scale():
    # (ln q)^2 far exceeds q^(eps/4) for any feasible q, so the literal
    # defaults must be rejected with a pointer at the overrides
    with pytest.raises(RegimeError, match="overrides"):
        make_params(10007, 0.1)


def test_default_formulas_recorded():
    with pytest.raises(RegimeError) as err:
        make_params(1000003, 0.2)
    assert f"{math.log(1000003)**2:.4g}" in str(err.value)


def test_overrides_accepted():
    p = _params(10, 100)
    assert p.X == 10.0 and p.Y == 100.0 and p.q == 10007


def test_sparse_window_warns():
    with pytest.warns(UserWarning, match=r"\[5, 7\]"):
        _params(3, 10)


def test_param_validation():
    with pytest.raises(ValueError):
        make_params(10007, -0.1, X=10, Y=100)
    with pytest.raises(ValueError):
        make_params(10007, 0.1, A=0.5, X=10, Y=100)


# --- smooth_counts ---------------------------------------------------------------


def test_smooth_counts_anchor():
    c = smooth_counts(20, 3)
    assert (c.phi, c.psi) == (7, 10)
    assert c.u == pytest.approx(math.log(20) / math.log(3))


def test_smooth_counts_y_equals_x():
    c = smooth_counts(20, 20)
    assert c.phi == 1  # only n = 1 has no factor <= 20
    assert c.psi == 20


def test_smooth_counts_partition_identity():
    rng = random.Random(61)
    for _ in range(20):
        x = rng.randint(10, 5000)
        y = rng.randint(2, x)
        c = smooth_counts(x, y)
        assert c.phi + c.psi + c.mixed == int(x) + 1
        assert c.mixed >= 0


def test_smooth_counts_matches_enumeration():
    for x, y in ((100, 5), (300, 17), (1000, 31)):
        c = smooth_counts(x, y)
        phi = psi = 0
        for n in range(1, x + 1):
            fac = [p for p, _ in _window_primes(n, 1, n)]
            if all(p > y for p in fac):
                phi += 1
            if all(p <= y for p in fac):
                psi += 1
        assert (c.phi, c.psi) == (phi, psi), (x, y)


def test_smooth_counts_guards():
    with pytest.raises(ValueError):
        smooth_counts(10, 1)
    with pytest.raises(ValueError):
        smooth_counts(10, 20)


def test_smooth_shape_constants_finite():
    """Record the scaled shape quantities on a grid; only finiteness is
    asserted since the asymptotic constants are unspecified."""
    rows = []
    for x in (10**3, 10**4, 10**5):
        for y in (10, 30, 100):
            c = smooth_counts(x, y)
            rows.append((x, y, c.phi * math.log(y) / x, c.psi * math.exp(c.u / 2) / x))
    for x, y, phi_scaled, psi_scaled in rows:
        assert math.isfinite(phi_scaled) and math.isfinite(psi_scaled)
        assert phi_scaled >= 0 and psi_scaled >= 0


# --- classify / partition --------------------------------------------------------


def test_classify_anchors():
    p = _params(3, 10, quiet=True)
    assert classify(22, p) == T_CLASS  # 22 = 2 * 11, no factor in (3, 10]
    assert classify(35, p) == NClass("B", 2)  # 5 * 7
    assert classify(25, p) == SQUARE_EXCLUDED  # 5^2
    assert classify(1, p) == T_CLASS


def test_classify_square_precedence():
    p = _params(3, 10, quiet=True)
    assert classify(50, p) == SQUARE_EXCLUDED  # 2 * 5^2: square wins over B_1
    assert classify(175, p) == SQUARE_EXCLUDED  # 5^2 * 7


def test_partition_anchor_small():
    part = partition(30, _params(3, 10, quiet=True))
    assert part.t_set_size == 20
    assert part.square_excluded == 1  # only 25
    assert part.br_sizes == {1: 9}
    assert part.total == 30


def test_partition_anchor_10k():
    part = partition(10**4, _params(10, 100))
    assert part.t_set_size == 5395
    assert part.square_excluded == 277
    assert part.br_sizes == {1: 2814, 2: 1453, 3: 61}


def test_partition_totals():
    for X, Y in ((10, 100), (5, 50), (20, 200)):
        part = partition(10**4, _params(X, Y))
        assert part.total == 10**4, (X, Y)


def test_partition_max_r_bounded():
    part = partition(10**4, _params(10, 100))
    assert max(part.br_sizes) <= math.log(10**4) / math.log(10)


def test_classify_agrees_with_sieve():
    p = _params(7, 70)
    part = partition(2000, p)
    from collections import Counter
    want = Counter(str(classify(n, p)) for n in range(1, 2001))
    assert want["T"] == part.t_set_size
    assert want["square_excluded"] == part.square_excluded
    for r, size in part.br_sizes.items():
        assert want[f"B({r})"] == size


# --- lemma1_report ----------------------------------------------------------------


def test_lemma1_degenerate_window():
    t_size, ratio = lemma1_report(30, _params(10, 10.5, quiet=True))  # no primes inside
    assert t_size == 30
    assert ratio == pytest.approx(math.log(10007) / math.log(math.log(10007)))


def test_lemma1_small():
    t_size, ratio = lemma1_report(30, _params(3, 10, quiet=True))
    assert t_size == 20
    assert ratio == pytest.approx(20 * math.log(10007) / (30 * math.log(math.log(10007))))


# --- B_r product identity ----------------------------------------------------------


def test_rfold_identity_small_window():
    p = _params(3, 10, quiet=True)
    for r in (1, 2, 3):
        assert br_product_identity_check(r, 1000, p)


def test_rfold_identity_counts_35():
    # 35 = 5 * 7 factors as p * m in exactly two ways with p in (3, 10]
    p = _params(3, 10, quiet=True)
    count = 0
    for prime in (5, 7):
        m = 35 // prime
        if classify(m, p) == NClass("B", 1) and m % prime:
            count += 1
    assert count == 2
    assert br_product_identity_check(2, 100, p)


# --- dyadic blocks -----------------------------------------------------------------


def test_dyadic_anchor():
    assert dyadic_blocks(_params(4, 30)) == [(4, 8), (8, 16), (16, 30)]


def test_dyadic_single_block():
    assert dyadic_blocks(_params(10, 18)) == [(10, 18)]


def test_dyadic_covers_window():
    rng = random.Random(67)
    for _ in range(20):
        X = rng.uniform(2, 50)
        Y = X + rng.uniform(0.5, 500)
        blocks = dyadic_blocks(_params(X, Y, quiet=True))
        assert blocks[0][0] == X and blocks[-1][1] == Y
        for (_, b), (c, _) in zip(blocks, blocks[1:]):
            assert b == c
        for lo, hi in blocks:
            assert lo < hi <= 2 * lo + 1e-9


def test_dyadic_rejects_degenerate():
    with pytest.raises(RegimeError):
        dyadic_blocks(_params(10, 10))


# --- diagnostics -------------------------------------------------------------------


def _oracle_block(f, chi, a, N, ps, Q):
    w1 = w2 = 0.0
    for m in range(1, int(N / Q) + 1):
        inner = 0j
        for p in ps:
            if p * m <= N and p % chi.q != 0:
                inner += f.values[p] * chi(p * m + a)
        w1 += abs(inner)
        w2 += abs(inner) ** 2
    return w1, w2


def test_diagnostics_matches_double_loop():
    q = 10007
    table = build_char_table(q)
    chi = table.char(11)
    f = build_table(MultFuncSpec.parse("one"), 10**4)
    p = _params(10, 100)
    rep = diagnostics(f, chi, 1, 10**4, 1, p)
    assert rep.cauchy_check
    spf_primes = [n for n in range(2, 101) if all(n % d for d in range(2, n))]
    for blk in rep.blocks:
        ps = [pp for pp in spf_primes if blk.Q < pp <= blk.Q1]
        w1, w2 = _oracle_block(f, chi, 1, 10**4, ps, blk.Q)
        assert blk.w1 == pytest.approx(w1, abs=1e-6), (blk.Q, blk.Q1)
        assert blk.w2 == pytest.approx(w2, abs=1e-6), (blk.Q, blk.Q1)


def test_diagnostics_cauchy_holds_randomized():
    q = 10007
    table = build_char_table(q)
    rng = random.Random(71)
    f = build_table(MultFuncSpec.parse("random-unit", seed=5), 5000)
    for _ in range(5):
        chi = table.char(rng.randint(1, q - 2))
        rep = diagnostics(f, chi, rng.randint(1, 50), 5000, rng.randint(1, 2),
                          _params(8, 80))
        assert rep.cauchy_check


def test_diagnostics_empty_block():
    # (23, 28] holds no prime, so that block contributes nothing
    rep = diagnostics(build_table(MultFuncSpec.parse("one"), 500),
                      build_char_table(10007).char(3), 1, 500, 1,
                      _params(23, 28, quiet=True))
    assert rep.blocks[0].s_r == 0
    assert rep.blocks[0].w1 == 0


def test_diagnostics_rejects_principal():
    with pytest.raises(RegimeError):
        diagnostics(build_table(MultFuncSpec.parse("one"), 100),
                    build_char_table(10007).principal, 1, 100, 1, _params(10, 100))


def test_sr_counts_window_products():
    # S_r over a block only involves m in B_{r-1}; checked by brute force
    q = 10007
    chi = build_char_table(q).char(7)
    f = build_table(MultFuncSpec.parse("moebius"), 600)
    p = _params(5, 50)
    rep = diagnostics(f, chi, 1, 600, 2, p)
    prev = {n for n in range(1, 601) if classify(n, p) == NClass("B", 1)}
    for blk in rep.blocks:
        brute = 0j
        for prime in range(2, 51):
            if all(prime % d for d in range(2, prime)) and blk.Q < prime <= blk.Q1:
                for m in range(1, 600 // prime + 1):
                    if m in prev and m % q:
                        brute += f.values[prime] * f.values[m] * chi(prime * m + 1)
        assert blk.s_r == pytest.approx(brute, abs=1e-9)


# --- reconstruction identity --------------------------------------------------------


def test_reconstruction_identity():
    q = 10007
    table = build_char_table(q)
    p = _params(10, 100)
    for token, seed in (("moebius", 0), ("random-unit", 3)):
        f = build_table(MultFuncSpec.parse(token, seed=seed), 3000)
        for r in (1, 2):
            lhs, rhs = br_reconstruction(f, table.char(9), 1, 3000, r, p)
            assert abs(lhs - rhs) < 1e-9, (token, r)
