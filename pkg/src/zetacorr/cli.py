"""Command-line front end.

Subcommands: sieve (values and running sums), corr (correlation checkpoints),
zerosums (sums over zeros at increasing heights), reconstruct (explicit-formula
partial sums against exact values), constants, selftest.

Exit codes: 0 success, 1 I/O or data errors, 2 usage errors, 3 failed
internal invariants or accuracy certificates.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys

import numpy as np

from .zeta import AccuracyError, constants
from .zeta import zeta as zeta_eval
from .correlation import (
    CorrCheckpoint,
    CorrKindPair,
    WeightedSumParams,
    correlation_checkpoints,
    shifted_autocorr,
)
from .sieve import (
    DEFAULT_SEGMENT_CAPACITY,
    ArithmeticFunctionKind,
    naive_value,
    sieve_segment,
    summatory_stream,
)
from .zeros import (
    ZeroTableError,
    load_zeros,
    sum_a,
    zero_sum_checkpoints,
    zero_sum_report,
)

CHECKPOINT_SCHEMA = "zetacorr-corr-checkpoint-1"

EXIT_OK = 0
EXIT_IO = 1
EXIT_USAGE = 2
EXIT_INVARIANT = 3


class UsageError(Exception):
    pass


class CheckpointError(Exception):
    pass


def _fmt(value) -> str:
    if isinstance(value, float):
        return "%.17g" % value
    return str(value)


def _atomic_write_text(path: str, text: str) -> None:
    tmp = f"{path}.tmp.{os.getpid()}"
    with open(tmp, "w", encoding="utf-8") as fh:
        fh.write(text)
    os.replace(tmp, path)


def _emit(fields: tuple[str, ...], rows, out: str | None, as_json: bool) -> None:
    if as_json:
        text = json.dumps([dict(zip(fields, row)) for row in rows], indent=2) + "\n"
    else:
        lines = [",".join(fields)]
        lines.extend(",".join(_fmt(v) for v in row) for row in rows)
        text = "\n".join(lines) + "\n"
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        _atomic_write_text(out, text)


def _resolve_zeros_path(path: str) -> str:
    if os.path.isabs(path) or os.path.exists(path):
        return path
    data_dir = os.environ.get("ZETACORR_DATA_DIR")
    if data_dir:
        candidate = os.path.join(data_dir, path)
        if os.path.exists(candidate):
            return candidate
    return path


def _config_digest(pair: CorrKindPair, delta: float, stride: int,
                   segment_capacity: int) -> str:
    blob = json.dumps(
        {
            "schema": CHECKPOINT_SCHEMA,
            "pair": pair.value,
            "delta": delta,
            "stride": stride,
            "segment_capacity": segment_capacity,
        },
        sort_keys=True,
        separators=(",", ":"),
    )
    return hashlib.sha256(blob.encode()).hexdigest()


def _save_checkpoint(path: str, digest: str, cp: CorrCheckpoint) -> None:
    state = {
        "schema": CHECKPOINT_SCHEMA,
        "config_digest": digest,
        "pair": cp.pair.value,
        "delta": cp.delta,
        "n": cp.n,
        "summatory": cp.summatory,
        "plain": list(cp.plain_state),
        "weighted": list(cp.weighted_state),
    }
    _atomic_write_text(path, json.dumps(state) + "\n")


def _load_checkpoint(path: str, digest: str) -> CorrCheckpoint:
    with open(path, "r", encoding="utf-8") as fh:
        state = json.load(fh)
    if state.get("schema") != CHECKPOINT_SCHEMA:
        raise CheckpointError(f"unrecognized checkpoint schema in {path}")
    if state.get("config_digest") != digest:
        raise CheckpointError(
            "checkpoint was written under a different configuration; "
            "refusing to resume"
        )
    return CorrCheckpoint(
        pair=CorrKindPair(state["pair"]),
        delta=float(state["delta"]),
        n=int(state["n"]),
        summatory=int(state["summatory"]),
        plain_state=tuple(state["plain"]),
        weighted_state=tuple(state["weighted"]),
    )


def cmd_sieve(args) -> int:
    kind = ArithmeticFunctionKind(args.kind)
    rows = [
        (state.n, naive_value(state.n, kind), state.total)
        for state in summatory_stream(args.n_max, kind, stride=args.stride)
    ]
    _emit(("n", "value", "summatory"), rows, args.out, args.format == "json")
    return EXIT_OK


_PAIR_ALIASES = {
    "mobius": CorrKindPair.MOBIUS_MERTENS,
    "mobius-mertens": CorrKindPair.MOBIUS_MERTENS,
    "liouville": CorrKindPair.LIOUVILLE_SUMMATORY,
    "liouville-summatory": CorrKindPair.LIOUVILLE_SUMMATORY,
}


def cmd_corr(args) -> int:
    pair = _PAIR_ALIASES[args.pair]
    if (args.c is None) != (args.t_height is None):
        raise UsageError("--c and --t-height must be given together")
    if args.c is not None:
        if args.n_max is not None:
            raise UsageError("--n-max conflicts with --c/--t-height")
        params = WeightedSumParams.from_height(args.c, args.t_height,
                                               delta=args.delta)
        n_max, delta = params.n_max, params.delta
        weighted_mode = True
    else:
        if args.n_max is None:
            raise UsageError("need --n-max, or --c with --t-height")
        n_max = args.n_max
        delta = args.delta if args.delta is not None else 0.0
        weighted_mode = args.delta is not None
    if n_max < 2:
        raise UsageError("normalization is undefined below n = 2; need n_max >= 2")

    consts = constants()
    if pair is CorrKindPair.MOBIUS_MERTENS:
        reference = consts.minus_three_over_pi_sq
        if args.zeros:
            table = load_zeros(_resolve_zeros_path(args.zeros))
            reference += sum_a(table, float(table.gamma[-1]) + 1.0)
    else:
        reference = consts.liouville_bias

    digest = _config_digest(pair, delta, args.stride, DEFAULT_SEGMENT_CAPACITY)
    resume_cp = None
    if args.resume:
        if not args.checkpoint:
            raise UsageError("--resume needs --checkpoint")
        resume_cp = _load_checkpoint(args.checkpoint, digest)

    rows = []
    last = None
    for cp in correlation_checkpoints(
        pair, n_max, args.stride, delta=delta, threads=args.threads,
        resume=resume_cp,
    ):
        last = cp
        norm = cp.normalized if cp.n >= 2 else float("nan")
        rows.append((cp.n, cp.s_plain, norm, reference))
        if args.checkpoint:
            _save_checkpoint(args.checkpoint, digest, cp)
    _emit(("n", "raw_sum", "normalized", "reference_line"), rows, args.out,
          args.format == "json")

    if weighted_mode and last is not None:
        z = zeta_eval(1.0 + delta)
        value = last.s_weighted / complex(z).real
        print(
            f"weighted sum: {value:.17g} (delta={delta:.17g}, n_max={n_max})",
            file=sys.stderr,
        )
    return EXIT_OK


def cmd_zerosums(args) -> int:
    path = _resolve_zeros_path(args.zeros)
    table = load_zeros(path)
    print(
        f"zeros: {path} ({len(table)} records, fnv1a64 {table.source_digest})",
        file=sys.stderr,
    )
    if args.t is not None:
        reports = [zero_sum_report(table, args.t)]
    else:
        reports = zero_sum_checkpoints(table, every=args.every)
    rows = [
        (r.t, r.count, r.sum_a, r.sum_b, r.sum_c, r.j_minus_1) for r in reports
    ]
    _emit(("t", "count", "sum_A", "sum_B", "sum_C", "J_minus_1"), rows,
          args.out, args.format == "json")
    return EXIT_OK


def cmd_reconstruct(args) -> int:
    from .zeros import reconstruct_liouville, reconstruct_mertens

    if args.n_min < 1 or args.n_max < args.n_min:
        raise UsageError("need 1 <= n-min <= n-max")
    table = load_zeros(_resolve_zeros_path(args.zeros))
    t = args.t if args.t is not None else float(table.gamma[-1]) + 1.0
    if args.which == "mertens":
        kind, rec = ArithmeticFunctionKind.MOBIUS, reconstruct_mertens
    else:
        kind, rec = ArithmeticFunctionKind.LIOUVILLE, reconstruct_liouville

    # exact running sums: totals[n] = F(n-1) for n in [n_min, n_max]
    totals = {1: 0}
    prev = 0
    lo = 1
    while lo <= args.n_max - 1:
        hi = min(lo + DEFAULT_SEGMENT_CAPACITY - 1, args.n_max - 1)
        seg = sieve_segment(lo, hi, kind)
        cum = np.cumsum(seg.values, dtype=np.int64)
        for n in range(max(args.n_min, lo + 1), hi + 2):
            totals[n] = prev + int(cum[n - 1 - lo])
        prev += int(cum[-1])
        lo = hi + 1

    rows = []
    for n in range(args.n_min, args.n_max + 1):
        value = rec(n, table, t)
        exact = totals[n]
        rows.append((n, value, exact, abs(value - exact)))
    _emit(("n", "reconstructed", "exact", "abs_err"), rows, args.out,
          args.format == "json")
    return EXIT_OK


def cmd_constants(args) -> int:
    c = constants()
    rows = [
        ("minus_three_over_pi_sq", c.minus_three_over_pi_sq),
        ("zeta_half", c.zeta_half),
        ("liouville_bias", c.liouville_bias),
        ("k_series_1", c.k_series_1),
        ("conditional_convergence_limit", 2.5 + c.k_series_1),
    ]
    _emit(("name", "value"), rows, args.out, args.format == "json")
    return EXIT_OK


def cmd_selftest(args) -> int:
    failures = []

    def check(name: str, ok: bool, detail: str = "") -> None:
        if ok:
            print(f"ok {name}")
        else:
            print(f"FAIL {name}: {detail}")
            failures.append(name)

    seg_kinds = (
        ArithmeticFunctionKind.MOBIUS,
        ArithmeticFunctionKind.LIOUVILLE,
        ArithmeticFunctionKind.MOBIUS_SQUARED,
    )
    for kind in seg_kinds:
        seg = sieve_segment(1, 20000, kind)
        bad = [
            n for n in range(1, 20001)
            if int(seg.values[n - 1]) != naive_value(n, kind)
        ]
        check(f"sieve-{kind.value}", not bad, f"first mismatch at n={bad[:1]}")

    z2 = complex(zeta_eval(2.0)).real
    check("zeta-2", abs(z2 - math.pi**2 / 6.0) < 1e-12, f"{z2!r}")
    zh = complex(zeta_eval(0.5)).real
    check("zeta-half", abs(zh - -1.4603545088095868) < 1e-9, f"{zh!r}")
    s = complex(1.5, 12.5)
    zc = zeta_eval(s.conjugate())
    check(
        "zeta-conjugate",
        zc == complex(zeta_eval(s)).conjugate(),
        f"{zc!r}",
    )

    n = 500
    last = None
    for last in correlation_checkpoints(CorrKindPair.MOBIUS_MERTENS, n, n):
        pass
    parts = math.fsum(
        shifted_autocorr(ArithmeticFunctionKind.MOBIUS, k, n)
        for k in range(1, n)
    )
    check(
        "shift-decomposition",
        abs(last.s_plain - parts) < 1e-10,
        f"{last.s_plain!r} vs {parts!r}",
    )

    rows = list(
        correlation_checkpoints(CorrKindPair.LIOUVILLE_SUMMATORY, 100000, 10000)
    )
    check(
        "plain-weighted-delta0",
        all(r.plain_state == r.weighted_state for r in rows),
        "delta=0 weighted sum drifted from plain sum",
    )

    if failures:
        print(f"selftest failed: {', '.join(failures)}", file=sys.stderr)
        return EXIT_INVARIANT
    print("selftest passed")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="zetacorr",
        description="Correlation sums of multiplicative functions and sums "
        "over zeta zeros.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--out", default=None,
                       help="output path (default: stdout)")
        p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = sub.add_parser("sieve", help="arithmetic function values and running sums")
    p.add_argument("--kind", required=True,
                   choices=("mobius", "liouville", "mobius-squared"))
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--stride", type=int, default=1)
    add_common(p)
    p.set_defaults(func=cmd_sieve)

    p = sub.add_parser("corr", help="correlation checkpoints")
    p.add_argument("--pair", "--kind", dest="pair", required=True,
                   choices=sorted(_PAIR_ALIASES),
                   help="function/summatory pair; bare function names are "
                   "accepted as shorthand")
    p.add_argument("--n-max", type=int, default=None)
    p.add_argument("--stride", type=int, default=10000)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--delta", type=float, default=None,
                   help="also report the delta-weighted sum on stderr")
    p.add_argument("--c", type=float, default=None,
                   help="exponent in (0,1); with --t-height derives n_max and delta")
    p.add_argument("--t-height", type=float, default=None)
    p.add_argument("--zeros", default=None,
                   help="zero table used for the reference line")
    p.add_argument("--checkpoint", default=None,
                   help="JSON state file updated at each checkpoint")
    p.add_argument("--resume", action="store_true",
                   help="continue from the state in --checkpoint")
    add_common(p)
    p.set_defaults(func=cmd_corr)

    p = sub.add_parser("zerosums", help="sums over zeros below growing heights")
    p.add_argument("--zeros", required=True)
    p.add_argument("--every", type=int, default=1000,
                   help="zeros per checkpoint (default 1000)")
    p.add_argument("--t", type=float, default=None,
                   help="single cutoff height instead of checkpoints")
    add_common(p)
    p.set_defaults(func=cmd_zerosums)

    p = sub.add_parser("reconstruct",
                       help="explicit-formula partial sums vs exact values")
    p.add_argument("--zeros", required=True)
    p.add_argument("--which", required=True, choices=("mertens", "liouville"))
    p.add_argument("--n-min", type=int, default=2)
    p.add_argument("--n-max", type=int, default=50)
    p.add_argument("--t", type=float, default=None,
                   help="cutoff height (default: whole table)")
    add_common(p)
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("constants", help="reference constants")
    add_common(p)
    p.set_defaults(func=cmd_constants)

    p = sub.add_parser("selftest", help="quick internal consistency checks")
    p.set_defaults(func=cmd_selftest)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ZeroTableError, CheckpointError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except AccuracyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
