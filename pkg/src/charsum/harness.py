"""Experiment sweeps over (q, theta, f, chi, shifts), CSV emission, and the
self-test battery.

A sweep is deterministic given its seeds: rows appear in config order, floats
are serialized as shortest round-trip decimals, and rerunning an identical
config reproduces the CSV byte for byte below the timestamp comment.
"""

from concurrent.futures import ThreadPoolExecutor
import csv
from dataclasses import dataclass, fields, replace
from datetime import datetime, timezone
import io
import json
import math
from pathlib import Path
import random

import numpy as np

from . import decomposition as dec
from .dirichlet import CharTable, build_char_table
from .errors import CharsumError
from .multfunc import (RANDOM_FAMILIES, MultFuncSpec, MultFuncTable,
                       build_table, verify_multiplicativity)
from .primefield import Modulus, is_prime, mod_inv
from .sums import (multi_shifted_sum, rational_char_sum, shifted_sum,
                   weil_complete_sum)

CSV_COLUMNS = ("q", "N", "theta", "f_family", "pp_rule", "seed", "char_index",
               "shifts", "sum_re", "sum_im", "abs", "bound", "ratio", "error")

BOUND_COMMENT = "# bound = N*ln(ln q)/ln q (natural logarithms)"


@dataclass(frozen=True)
class ExperimentConfig:
    q_list: tuple[int, ...]
    theta_list: tuple[float, ...]
    epsilon: float
    A: float
    f_specs: tuple[MultFuncSpec, ...]
    char_indices: tuple          # ints, "legendre", or "sweep:K"
    shift_sets: tuple[tuple[int, ...], ...]
    seeds: tuple[int, ...] = (0,)
    xy_override: tuple[float, float] | None = None

    @classmethod
    def from_json(cls, source) -> "ExperimentConfig":
        """Load from a JSON file path or an already-parsed dict; field names
        must match exactly and unknown keys are rejected."""
        if isinstance(source, (str, Path)):
            with open(source) as fh:
                doc = json.load(fh)
        else:
            doc = dict(source)
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(doc) - known)
        if unknown:
            raise ValueError(f"unknown config keys: {', '.join(unknown)}")
        missing = sorted(known - set(doc) - {"seeds", "xy_override"})
        if missing:
            raise ValueError(f"missing config keys: {', '.join(missing)}")

        def spec_of(item):
            if isinstance(item, str):
                return MultFuncSpec.parse(item)
            return MultFuncSpec(**item)

        return cls(
            q_list=tuple(int(q) for q in doc["q_list"]),
            theta_list=tuple(float(t) for t in doc["theta_list"]),
            epsilon=float(doc["epsilon"]),
            A=float(doc["A"]),
            f_specs=tuple(spec_of(s) for s in doc["f_specs"]),
            char_indices=tuple(doc["char_indices"]),
            shift_sets=tuple(tuple(int(a) for a in s) for s in doc["shift_sets"]),
            seeds=tuple(int(s) for s in doc.get("seeds", (0,))),
            xy_override=(tuple(float(v) for v in doc["xy_override"])
                         if doc.get("xy_override") else None),
        )

    def validate(self, allow_out_of_regime: bool = False) -> list[str]:
        problems = []
        if not self.q_list:
            problems.append("q_list is empty")
        for q in self.q_list:
            if not is_prime(q):
                problems.append(f"q = {q} is not prime")
        if not self.theta_list:
            problems.append("theta_list is empty")
        if self.epsilon <= 0:
            problems.append(f"epsilon must be positive, got {self.epsilon}")
        if self.A < 1:
            problems.append(f"A must be >= 1, got {self.A}")
        if not allow_out_of_regime:
            for t in self.theta_list:
                if not 0.5 + self.epsilon <= t <= self.A:
                    problems.append(
                        f"theta = {t} outside [1/2+eps, A] = "
                        f"[{0.5 + self.epsilon}, {self.A}]; pass "
                        "--allow-out-of-regime to probe it anyway")
        if not self.f_specs:
            problems.append("f_specs is empty")
        if not self.char_indices:
            problems.append("char_indices is empty")
        for tok in self.char_indices:
            if not (isinstance(tok, int) or tok == "legendre"
                    or (isinstance(tok, str) and tok.startswith("sweep:")
                        and tok[6:].isdigit() and int(tok[6:]) >= 1)):
                problems.append(f"bad character token {tok!r}")
        if not self.shift_sets:
            problems.append("shift_sets is empty")
        if not self.seeds:
            problems.append("seeds is empty")
        return problems


def resolve_char_indices(tokens, q: int) -> list[int]:
    """Expand config character tokens to concrete indices, deduplicated."""
    out: list[int] = []
    for tok in tokens:
        if isinstance(tok, int):
            out.append(tok % (q - 1))
        elif tok == "legendre":
            out.append((q - 1) // 2)
        else:
            k = int(tok[6:])
            if k == 1 or q <= 4:
                out.append(1)
            else:
                out.extend(1 + (j * (q - 3)) // (k - 1) for j in range(k))
    seen: dict[int, None] = {}
    for m in out:
        seen.setdefault(m)
    return list(seen)


def _fmt(x) -> str:
    return repr(float(x))


@dataclass
class _Row:
    q: int
    N: int
    theta: float
    spec: MultFuncSpec
    seed: int | None  # None for deterministic families
    m: int
    shifts: tuple[int, ...]
    regime_ok: bool


def _iter_rows(cfg: ExperimentConfig):
    for q in cfg.q_list:
        chars = resolve_char_indices(cfg.char_indices, q)
        for theta in cfg.theta_list:
            N = math.ceil(q ** theta)
            regime_ok = 0.5 + cfg.epsilon <= theta <= cfg.A
            for spec in cfg.f_specs:
                seeds = cfg.seeds if spec.family in RANDOM_FAMILIES else (None,)
                for seed in seeds:
                    for m in chars:
                        for shifts in cfg.shift_sets:
                            yield _Row(q=q, N=N, theta=theta, spec=spec,
                                       seed=seed, m=m, shifts=shifts,
                                       regime_ok=regime_ok)


def _evaluate(row: _Row, table: CharTable, f: MultFuncTable) -> list[str]:
    base = [str(row.q), str(row.N), _fmt(row.theta), row.spec.label,
            row.spec.pp_label if row.seed is not None else "",
            str(row.seed) if row.seed is not None else "",
            str(row.m), ";".join(str(a) for a in row.shifts)]
    flag = "" if row.regime_ok else "out_of_regime"
    try:
        chi = table.char(row.m)
        if len(row.shifts) == 1:
            rep = shifted_sum(f, chi, row.shifts[0], row.N)
        else:
            rep = multi_shifted_sum(f, chi, row.shifts, row.N)
    except (CharsumError, ValueError, RuntimeError) as e:
        msg = f"{type(e).__name__}: {e}"
        err = f"{flag}; {msg}" if flag else msg
        return base + ["", "", "", "", "", err]
    return base + [_fmt(rep.value.real), _fmt(rep.value.imag),
                   _fmt(rep.abs_value), _fmt(rep.bound), _fmt(rep.ratio), flag]


def run_sweep(cfg: ExperimentConfig, output, allow_out_of_regime: bool = False,
              workers: int | None = None) -> dict:
    """Evaluate every configured row, write the CSV, return the summary."""
    problems = cfg.validate(allow_out_of_regime)
    if problems:
        raise ValueError("invalid config:\n" + "\n".join(f"- {p}" for p in problems))

    rows = list(_iter_rows(cfg))

    def spec_key(row: _Row):
        spec = row.spec if row.seed is None else replace(row.spec, seed=row.seed)
        return (spec, row.q)

    # one f table per (family, seed, q), built once at the largest N needed
    tables: dict[int, CharTable] = {}
    need: dict[tuple, int] = {}
    for row in rows:
        if row.q not in tables:
            tables[row.q] = build_char_table(row.q)
        key = spec_key(row)
        need[key] = max(need.get(key, 0), row.N)
    funcs = {key: build_table(key[0], n_max) for key, n_max in need.items()}

    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(
                lambda r: _evaluate(r, tables[r.q], funcs[spec_key(r)]), rows))
    else:
        results = [_evaluate(r, tables[r.q], funcs[spec_key(r)]) for r in rows]

    stamp = datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    writer.writerows(results)
    body = buf.getvalue()
    with open(output, "w", newline="") as fh:
        fh.write(f"# generated {stamp}\n")
        fh.write(BOUND_COMMENT + "\n")
        fh.write(body)

    max_ratio: dict[str, float] = {}
    errors = 0
    for out in results:
        family, ratio_s, err = out[3], out[12], out[13]
        if err and not err.startswith("out_of_regime"):
            errors += 1
        if ratio_s:
            ratio = float(ratio_s)
            if math.isfinite(ratio):
                max_ratio[family] = max(max_ratio.get(family, 0.0), ratio)
    return {"rows": len(results), "row_errors": errors,
            "max_ratio_by_family": max_ratio, "output": str(output)}


def read_csv_body(path) -> str:
    """The deterministic part of an emitted CSV: everything below comments."""
    with open(path) as fh:
        return "".join(line for line in fh if not line.startswith("#"))


# --- self-test battery ---------------------------------------------------------


def _check_inverses() -> str | None:
    mod = Modulus(499)
    bad = [x for x in range(1, 499) if x * mod_inv(x, mod) % 499 != 1]
    if bad or mod_inv(0, mod) != 0:
        return f"inverse identity fails at {bad[:3]}"
    return None


def _check_orthogonality(corrupt: bool) -> str | None:
    for q in (7, 101):
        table = build_char_table(q)
        if corrupt:
            table.roots[1] = -table.roots[1]
        n = np.arange(1, q)
        for m in range(1, q - 1):
            total = table.char(m).values(n).sum()
            if abs(total) >= 1e-6:
                return f"sum of chi over a period is {abs(total):.3g} at q={q}, m={m}"
    return None


def _check_multiplicativity() -> str | None:
    for token in ("moebius", "liouville", "random-pm1"):
        t = build_table(MultFuncSpec.parse(token, seed=11), 10**4)
        if not verify_multiplicativity(t, 2000, seed=5):
            return f"f(ab) != f(a)f(b) for {token}"
    return None


def _check_partition() -> str | None:
    params = dec.make_params(10007, 0.2, A=2.0, X=10, Y=100)
    part = dec.partition(10**4, params)
    if part.total != 10**4:
        return f"class sizes sum to {part.total}, not N"
    rng = random.Random(3)
    cnt, sq = dec._class_arrays(10**4, params)
    for _ in range(200):
        n = rng.randint(1, 10**4)
        got = dec.classify(n, params)
        want = (dec.SQUARE_EXCLUDED if sq[n]
                else dec.T_CLASS if cnt[n] == 0 else dec.NClass("B", int(cnt[n])))
        if got != want:
            return f"classify({n}) = {got}, sieve says {want}"
    return None


def _check_rfold() -> str | None:
    params = dec.make_params(10007, 0.2, A=2.0, X=10, Y=100)
    part = dec.partition(10**4, params)
    for r in part.br_sizes:
        if not dec.br_product_identity_check(r, 10**4, params):
            return f"product identity fails at r={r}"
    return None


def _check_weil() -> str | None:
    rng = random.Random(17)
    qs = [101, 151, 199]
    for _ in range(50):
        q = rng.choice(qs)
        table = build_char_table(q)
        r = rng.randint(1, 3)
        ms = [rng.randint(0, q - 2) for _ in range(r)]
        ms[rng.randrange(r)] = rng.randint(1, q - 2)
        shifts = rng.sample(range(q), r)
        poly = [rng.randint(0, q - 1) for _ in range(rng.randint(1, 3))]
        try:
            weil_complete_sum([table.char(m) for m in ms], shifts, poly)
        except RuntimeError as e:
            return str(e)
    return None


def _check_lemma2() -> str | None:
    rng = random.Random(23)
    for _ in range(20):
        q = rng.choice([101, 151, 199])
        table = build_char_table(q)
        chi = table.char(rng.randint(1, q - 2))
        p1, p2 = rng.sample([2, 3, 5, 7, 11, 13], 2)
        a = rng.randint(1, q - 1)
        rep = rational_char_sum(chi, p1, p2, a, -1, q - 1)
        brute = sum(chi.eval_ratio(p1 * s + a, p2 * s + a) for s in range(q))
        if abs(rep.value - brute) > 1e-9:
            return f"interval sum disagrees with termwise oracle at q={q}"
        if abs(rep.value) > 2 * math.sqrt(q) + 1e-6:
            return f"full-period sum {abs(rep.value):.3f} above 2*sqrt(q) at q={q}"
    return None


def _check_reduction() -> str | None:
    rng = random.Random(29)
    f = build_table(MultFuncSpec.parse("liouville"), 3000)
    for _ in range(20):
        q = rng.choice([101, 151])
        table = build_char_table(q)
        chi = table.char(rng.randint(1, q - 2))
        shifts = [0] + rng.sample(range(1, q), rng.randint(1, 2))
        n = rng.randint(100, 3000)
        via_fold = multi_shifted_sum(f, chi, shifts, n, reduce_zero_shift=True)
        direct = multi_shifted_sum(f, chi, shifts, n, reduce_zero_shift=False)
        if abs(via_fold.value - direct.value) > 1e-9:
            return f"reduction path differs from direct at q={q}"
    return None


def _check_dyadic() -> str | None:
    params = dec.make_params(10007, 0.2, A=2.0, X=4, Y=30)
    blocks = dec.dyadic_blocks(params)
    if blocks[0][0] != params.X or blocks[-1][1] != params.Y:
        return f"blocks do not span (X, Y]: {blocks}"
    for (_, b), (c, _) in zip(blocks, blocks[1:]):
        if b != c:
            return f"blocks not contiguous: {blocks}"
    return None


def selftest(corrupt_char_table: bool = False) -> tuple[bool, list[str]]:
    """Run every module's invariant battery at small parameters.

    corrupt_char_table is a fault-injection hook: it perturbs one root of
    unity and must make the orthogonality check fail.
    """
    checks = [
        ("inverse identity", _check_inverses),
        ("orthogonality", lambda: _check_orthogonality(corrupt_char_table)),
        ("multiplicativity", _check_multiplicativity),
        ("partition identity", _check_partition),
        ("r-fold product identity", _check_rfold),
        ("weil bound", _check_weil),
        ("rational interval sum", _check_lemma2),
        ("zero-shift reduction", _check_reduction),
        ("dyadic blocks", _check_dyadic),
    ]
    lines = []
    ok = True
    for name, fn in checks:
        problem = fn()
        if problem is None:
            lines.append(f"{name}: ok")
        else:
            lines.append(f"{name}: FAIL ({problem})")
            ok = False
    return ok, lines
