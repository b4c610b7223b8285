"""Command-line front end.

Exit codes: 0 on success, 1 on validation or invariant failure, 2 when a
capacity guard trips. CHARSUM_THREADS caps the worker count.
"""

import argparse
import json
import math
import os
import sys

from .decomposition import lemma1_report, make_params, partition
from .dirichlet import build_char_table
from .errors import CapacityError, CharsumError
from .harness import ExperimentConfig, run_sweep, selftest
from .multfunc import MultFuncSpec, build_table
from .sums import (multi_rational_char_sum, multi_shifted_sum,
                   rational_char_sum, shifted_sum, weil_complete_sum)


def _workers(requested: int | None) -> int:
    cap = int(os.environ.get("CHARSUM_THREADS", 0)) or (os.cpu_count() or 1)
    return max(1, min(requested or cap, cap))


def _char_index(token: str, q: int) -> int:
    if token == "legendre":
        return (q - 1) // 2
    return int(token) % (q - 1)


def _int_list(text: str) -> list[int]:
    return [int(s) for s in text.split(",") if s != ""]


def _print_sum_report(rep):
    print(f"q = {rep.q}  N = {rep.N}  m = {rep.m}  shifts = {list(rep.shifts)}")
    print(f"value = {rep.value.real!r} + {rep.value.imag!r}i")
    print(f"abs   = {rep.abs_value!r}")
    print(f"bound = {rep.bound!r}")
    print(f"ratio = {rep.ratio!r}")


def _cmd_sum(args) -> int:
    q = args.q
    table = build_char_table(q)
    chi = table.char(_char_index(args.char, q))
    spec = MultFuncSpec.parse(args.f, seed=args.seed, pp_rule=args.pp_rule)
    if args.N is None:
        if args.theta is None:
            raise ValueError("pass either --N or --theta")
        args.N = math.ceil(q ** args.theta)
    f = build_table(spec, args.N)
    shifts = _int_list(args.shifts)
    workers = _workers(args.workers)
    if len(shifts) == 1:
        rep = shifted_sum(f, chi, shifts[0], args.N, workers=workers)
    else:
        rep = multi_shifted_sum(f, chi, shifts, args.N, workers=workers)
    _print_sum_report(rep)
    return 0


def _cmd_weil(args) -> int:
    table = build_char_table(args.q)
    chars = [table.char(_char_index(t, args.q)) for t in args.chars.split(",")]
    value, bound = weil_complete_sum(chars, _int_list(args.shifts),
                                     _int_list(args.poly))
    print(f"value = {value.real!r} + {value.imag!r}i")
    print(f"abs   = {abs(value)!r}")
    print(f"bound = {bound!r}  ((r+d)*sqrt(q))")
    return 0


def _cmd_lemma2(args) -> int:
    table = build_char_table(args.q)
    chi = table.char(_char_index(args.char, args.q))
    rep = rational_char_sum(chi, args.p1, args.p2, args.a, args.U, args.V,
                            checked=not args.unchecked)
    print(f"value = {rep.value.real!r} + {rep.value.imag!r}i")
    print(f"abs   = {abs(rep.value)!r}")
    print(f"bound = {rep.bound!r}  ((V-U)/sqrt(q) + sqrt(q)*ln q)")
    if not rep.checked:
        print("hypotheses: UNCHECKED (exploration mode)")
    return 0


def _cmd_lemma3(args) -> int:
    table = build_char_table(args.q)
    chi = table.char(_char_index(args.char, args.q))
    rep = multi_rational_char_sum(chi, args.p1, args.p2, _int_list(args.shifts),
                                  args.U, args.V, checked=not args.unchecked)
    print(f"value = {rep.value.real!r} + {rep.value.imag!r}i")
    print(f"abs   = {abs(rep.value)!r}")
    print(f"bound = {rep.bound!r}  ((V-U)/sqrt(q) + sqrt(q)*ln q)")
    if not rep.checked:
        print("hypotheses: UNCHECKED (exploration mode)")
    return 0


def _cmd_decompose(args) -> int:
    params = make_params(args.q, args.epsilon, args.A, X=args.X, Y=args.Y)
    part = partition(args.N, params)
    _, ratio = lemma1_report(args.N, params)
    doc = {
        "params": {"q": params.q, "epsilon": params.epsilon, "A": params.A,
                   "X": params.X, "Y": params.Y},
        "t_set_size": part.t_set_size,
        "square_excluded": part.square_excluded,
        "br_sizes": {str(r): n for r, n in sorted(part.br_sizes.items())},
        "lemma1_ratio": ratio,
    }
    print(json.dumps(doc, indent=2))
    return 0


def _cmd_sweep(args) -> int:
    cfg = ExperimentConfig.from_json(args.config)
    summary = run_sweep(cfg, args.out,
                        allow_out_of_regime=args.allow_out_of_regime,
                        workers=_workers(args.workers))
    print(json.dumps(summary, indent=2))
    return 0


def _cmd_selftest(args) -> int:
    ok, lines = selftest()
    for line in lines:
        print(line)
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="charsum",
        description="Shifted character sums against their reference bounds.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sum", help="shifted sum over n <= N of f(n) chi(n+a)")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--char", default="legendre",
                   help="character index m, or 'legendre'")
    p.add_argument("--f", default="moebius",
                   help="moebius | liouville | one | char-twist:Q,M | "
                        "random-pm1 | random-unit")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--pp-rule", default="cm", choices=["cm", "squarefree", "random"])
    p.add_argument("--shifts", default="1", help="comma-separated shifts")
    p.add_argument("--N", type=int)
    p.add_argument("--theta", type=float, help="N = ceil(q^theta) when --N absent")
    p.add_argument("--workers", type=int)
    p.set_defaults(fn=_cmd_sum)

    p = sub.add_parser("weil", help="complete sum with the (r+d)sqrt(q) bound")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--chars", required=True, help="comma-separated indices")
    p.add_argument("--shifts", required=True)
    p.add_argument("--poly", default="0", help="coefficients, constant first")
    p.set_defaults(fn=_cmd_weil)

    p = sub.add_parser("lemma2", help="interval sum of chi((p1 m + a)/(p2 m + a))")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--char", default="legendre")
    p.add_argument("--p1", type=int, required=True)
    p.add_argument("--p2", type=int, required=True)
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--U", type=int, required=True)
    p.add_argument("--V", type=int, required=True)
    p.add_argument("--unchecked", action="store_true",
                   help="skip hypothesis checks (exploration)")
    p.set_defaults(fn=_cmd_lemma2)

    p = sub.add_parser("lemma3", help="interval sum with shifted numerator and "
                                      "denominator products")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--char", default="legendre")
    p.add_argument("--p1", type=int, required=True)
    p.add_argument("--p2", type=int, required=True)
    p.add_argument("--shifts", required=True, help="comma-separated b_i")
    p.add_argument("--U", type=int, required=True)
    p.add_argument("--V", type=int, required=True)
    p.add_argument("--unchecked", action="store_true")
    p.set_defaults(fn=_cmd_lemma3)

    p = sub.add_parser("decompose", help="T / square-excluded / B_r class sizes")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--A", type=float, default=2.0)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--X", type=float)
    p.add_argument("--Y", type=float)
    p.set_defaults(fn=_cmd_decompose)

    p = sub.add_parser("sweep", help="run a configured experiment sweep")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--allow-out-of-regime", action="store_true")
    p.add_argument("--workers", type=int)
    p.set_defaults(fn=_cmd_sweep)

    p = sub.add_parser("selftest", help="run the invariant battery")
    p.set_defaults(fn=_cmd_selftest)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except CapacityError as e:
        print(f"capacity error: {e}", file=sys.stderr)
        return 2
    except (CharsumError, ValueError, RuntimeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
