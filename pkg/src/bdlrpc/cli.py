"""Command-line entry point: ``bdlrpc <subcommand> [options]``."""

from __future__ import annotations

import argparse
import os
import sys
from typing import Sequence

import numpy as np

from . import codec, harness
from .counting import FerrersDiagram, ferrers_above_brute, ferrers_above_sum, ferrers_weight_sum, gauss_binom
from .errors import BdlrpcError
from .field import format_params, make_field

THREADS_ENV = "BDLRPC_THREADS"


def _default_workers() -> int:
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--seed", type=int, default=0, help="base seed (default 0)")
    p.add_argument("--trials", type=int, default=None, help="number of Monte-Carlo trials")
    p.add_argument("--out", default=None, help="write CSV here (atomically) instead of stdout")
    p.add_argument("--json", action="store_true", help="emit JSON rows instead of CSV")
    p.add_argument("--workers", type=int, default=_default_workers(),
                   help=f"worker threads (default from ${THREADS_ENV} or 1)")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="bdlrpc", description="BD-LRPC codes: experiments and checks")
    sub = parser.add_subparsers(dest="cmd", required=True)

    t1 = sub.add_parser("table1", parents=[common], help="rank(M_t(Z,A)) = (d-1)r success counts per sampler")
    t1.add_argument("--q", type=int)
    t1.add_argument("--r", type=int)
    t1.add_argument("--u", type=int)
    t1.add_argument("--d", type=int)
    t1.add_argument("--t", type=int, default=None, help="override t (default (d-1)r)")
    t1.add_argument("--check", action="store_true", help="exit 1 if a measured rate is > 3 sigma off its prediction")

    de = sub.add_parser("decode", parents=[common], help="decoder failure rates per phase")
    de.add_argument("--q", type=int, default=2)
    de.add_argument("--m", type=int, default=31)
    de.add_argument("--n", type=int, default=7)
    de.add_argument("--k", type=int, default=2)
    de.add_argument("--d", type=int, default=2)
    de.add_argument("--r", type=int, default=2)
    de.add_argument("--instrument", action="store_true", help="cross-check the rank conditions on every trial")
    de.add_argument("--check", action="store_true", help="exit 1 if the failure rate exceeds the ceiling")

    co = sub.add_parser("count", parents=[common], help="exhaustive counts vs closed form")
    co.add_argument("--q", type=int, nargs="+", default=[2])
    co.add_argument("--u", type=int, nargs="+", default=[1, 2])
    co.add_argument("--r", type=int, nargs="+", default=[1, 2])
    co.add_argument("--t", type=int, default=None, help="override t (default t = r)")

    fe = sub.add_parser("ferrers", parents=[common], help="Ferrers-diagram identities")
    fe.add_argument("--n", type=int, default=6)
    fe.add_argument("--k", type=int, default=6)
    fe.add_argument("--q", type=int, nargs="+", default=[2, 3])

    dm = sub.add_parser("demo", parents=[common], help="one verbose decoding walkthrough")
    dm.add_argument("--q", type=int, default=2)
    dm.add_argument("--m", type=int, default=31)
    dm.add_argument("--n", type=int, default=7)
    dm.add_argument("--k", type=int, default=2)
    dm.add_argument("--d", type=int, default=2)
    dm.add_argument("--r", type=int, default=3)
    return parser


def _emit(args: argparse.Namespace, rows: list[dict], fields: Sequence[str]) -> None:
    text = harness.rows_to_json(rows) if args.json else harness.rows_to_csv(rows, fields)
    if args.out:
        harness.write_atomic(args.out, text)
    else:
        sys.stdout.write(text)


def _cmd_table1(args: argparse.Namespace) -> int:
    given = [args.q, args.r, args.u, args.d]
    if all(v is None for v in given):
        tuples = list(harness.TABLE1_ROWS)
    elif any(v is None for v in given):
        print("bdlrpc table1: error: give all of --q --r --u --d, or none for the full table", file=sys.stderr)
        return 2
    else:
        tuples = [tuple(given)]
    trials = args.trials or 10000
    rows = []
    bad = 0
    for q, r, u, d in tuples:
        cfg = harness.ExperimentConfig("table1", q=q, r=r, u=u, d=d, t=args.t, trials=trials,
                                       seed=args.seed, workers=args.workers)
        part = harness.run_table1(cfg)
        for row in part:
            if row["predicted"]:
                p = float(row["predicted"])
                if abs(row["successes"] - p * trials) > 3 * harness.sigma(p, trials):
                    bad += 1
        rows += part
    _emit(args, rows, harness.CSV_FIELDS)
    return 1 if args.check and bad else 0


def _cmd_decode(args: argparse.Namespace) -> int:
    cfg = harness.ExperimentConfig("decode", q=args.q, r=args.r, u=args.n - args.k - args.r, d=args.d,
                                   m=args.m, n=args.n, k=args.k, trials=args.trials or 500, seed=args.seed,
                                   workers=args.workers, instrument=args.instrument)
    rep = harness.run_decode(cfg)
    _emit(args, rep.rows, harness.DECODE_FIELDS)
    if args.instrument:
        print(f"# rank-condition cross-check: {rep.cond_checked} trials checked, "
              f"{rep.cond_violations} violations, {rep.cond_degenerate} degenerate", file=sys.stderr)
    failed = rep.failure_rate > rep.ceiling or rep.unverified_success or rep.cond_violations
    return 1 if args.check and failed else 0


def _cmd_count(args: argparse.Namespace) -> int:
    rep = harness.run_count_verify(args.q, args.u, args.r, args.t)
    _emit(args, rep.rows, harness.COUNT_FIELDS)
    return 0 if rep.mismatches == 0 and rep.totals_ok else 1


def _cmd_ferrers(args: argparse.Namespace) -> int:
    rows = []
    bad = 0
    for q in args.q:
        for n in range(args.n + 1):
            for k in range(args.k + 1):
                lhs = ferrers_weight_sum(n, k, q)
                rhs = gauss_binom(n + k, k, q)
                bad += lhs != rhs
                rows.append({"check": "weight_sum", "q": q, "n": n, "k": k, "enumerated": lhs,
                             "formula": rhs, "match": str(lhs == rhs).lower()})
        for u in range(1, min(args.n, 4) + 1):
            for k in range(1, min(args.k, 4) + 1):
                for s in range(u + 1):
                    for t in range(k + 1):
                        cols = [u] * (k - t) + [u - s] * t
                        f = FerrersDiagram(tuple(cols), u)
                        lhs = ferrers_above_brute(f, q)
                        rhs = ferrers_above_sum(f, q)
                        bad += lhs != rhs
                        rows.append({"check": f"above[{' '.join(map(str, cols))}]", "q": q, "n": u, "k": k,
                                     "enumerated": lhs, "formula": rhs, "match": str(lhs == rhs).lower()})
    _emit(args, rows, ["check", "q", "n", "k", "enumerated", "formula", "match"])
    return 1 if bad else 0


def _cmd_demo(args: argparse.Namespace) -> int:
    rng = np.random.default_rng(args.seed)
    f = make_field(args.q, args.m, rng=rng)
    params = codec.make_params(f, args.n, args.k, args.d)
    code = codec.gen_code(params, rng)
    err = codec.gen_error(params, args.r, rng)
    s = codec.syndrome(code, err.e)
    out = sys.stdout
    print(f"field        {format_params(f)}", file=out)
    print(f"code         n={args.n} k={args.k} d={args.d} (alpha = x), error rank r={args.r}, "
          f"u={args.n - args.k - args.r}", file=out)
    print(f"dim S        {codec.rank_weight(f, s)}", file=out)
    res = codec.decode(code, s, args.r)
    for t, dim in enumerate(res.dims or (res.expanded_dim,), start=1):
        print(f"phase 1      t={t}: dim V_t.S = {dim} (target {(args.d + t - 1) * args.r})", file=out)
    if res.status is codec.Status.EXPANSION_FAILURE:
        print(f"phase 1      failed: {res.detail}", file=out)
    elif res.status is codec.Status.SUPPORT_FAILURE:
        print(f"phase 2      failed: {res.detail}", file=out)
    else:
        print(f"phase 2      dim of recovered support = {res.recovered_support.dim}", file=out)
    if res.status is codec.Status.SUCCESS:
        same = bool(np.array_equal(res.error, err.e))
        print(f"phase 3      error recovered, matches the injected error: {same}", file=out)
    print(f"status       {res.status.value}", file=out)
    return 0 if res.ok else 1


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {"table1": _cmd_table1, "decode": _cmd_decode, "count": _cmd_count,
                "ferrers": _cmd_ferrers, "demo": _cmd_demo}
    try:
        return handlers[args.cmd](args)
    except (BdlrpcError, ValueError) as exc:
        print(f"bdlrpc: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
