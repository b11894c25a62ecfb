"""Command-line interface: mine, verify, generate, bench.

Exit codes: 0 success, 1 I/O failure, 2 usage/parse/config error,
3 verification or invariant failure, 4 enumeration guard tripped.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import bench as bench_mod
from .dataio import (
    GeneratorParams,
    REPORT_FORMATS,
    batches_to_events,
    generate_stream,
    load_stream,
    parse_stream,
    write_events,
    write_report,
)
from .errors import ElementTooLarge, InstanceTooLarge, MiningError, ParseError
from .model import DEFAULT_MAX_ELEMENT_SIZE, MODE_BOOLEAN, MODE_COUPLED, MinerConfig
from .oracle import mine_bruteforce
from .tree import ProgressiveTree

EXIT_OK = 0
EXIT_IO = 1
EXIT_USAGE = 2
EXIT_VERIFY = 3
EXIT_GUARD = 4

MAX_ELEMENT_ENV = "PROSUPMINE_MAX_ELEMENT"


def _max_element_size() -> int:
    value = os.environ.get(MAX_ELEMENT_ENV)
    if value is None:
        return DEFAULT_MAX_ELEMENT_SIZE
    try:
        size = int(value)
    except ValueError:
        raise ValueError(f"{MAX_ELEMENT_ENV} must be an integer, got {value!r}")
    if size < 1:
        raise ValueError(f"{MAX_ELEMENT_ENV} must be >= 1, got {size}")
    return size


def _miner_config(args) -> MinerConfig:
    if not 0 < args.minsup <= 1:
        raise ValueError("minsup must be in (0,1]")
    if args.poi < 1:
        raise ValueError("poi must be >= 1")
    return MinerConfig(
        poi=args.poi,
        minsup=args.minsup,
        mode=MODE_BOOLEAN if args.boolean else MODE_COUPLED,
        max_element_size=_max_element_size(),
    )


def _read_batches(path: str, strict: bool = False):
    if path == "-":
        return parse_stream(sys.stdin.read(), strict=strict)
    return load_stream(path, strict=strict)


def _open_out(path: str):
    if path == "-":
        return sys.stdout, False
    return open(path, "w", encoding="utf-8", newline="\n"), True


def cmd_mine(args) -> int:
    config = _miner_config(args)
    batches = _read_batches(args.input)
    out, owned = _open_out(args.out)
    try:
        tree = ProgressiveTree(config)
        first = True
        for ts, batch in batches:
            report = tree.process_timestamp(ts, batch)
            out.write(write_report(report, args.format, header=first))
            out.flush()
            first = False
    finally:
        if owned:
            out.close()
    return EXIT_OK


def cmd_verify(args) -> int:
    config = _miner_config(args)
    batches = _read_batches(args.input)
    events = batches_to_events(batches)
    tree = ProgressiveTree(config)
    for ts, batch in batches:
        got = tree.process_timestamp(ts, batch)
        want = mine_bruteforce(
            events, ts, config.poi, config.minsup, mode=config.mode,
            max_element_size=config.max_element_size,
            max_candidates=args.max_candidates)
        if got != want:
            print(f"mismatch at t{ts}:", file=sys.stderr)
            print("tree:", file=sys.stderr)
            sys.stderr.write(write_report(got, "text") or "  (no patterns)\n")
            print("oracle:", file=sys.stderr)
            sys.stderr.write(write_report(want, "text") or "  (no patterns)\n")
            return EXIT_VERIFY
    print(f"ok: {len(batches)} ticks match the reference miner")
    return EXIT_OK


def cmd_generate(args) -> int:
    try:
        params = GeneratorParams(
            n_sequences=args.seqs,
            n_items=args.items,
            n_ticks=args.ticks,
            arrival_prob=args.arrival_prob,
            element_size_max=args.element_size_max,
            qty_max=args.qty_max,
            seed=args.seed,
        )
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    batches = generate_stream(params)
    text = write_events(batches)
    out, owned = _open_out(args.out)
    try:
        out.write(text)
    finally:
        if owned:
            out.close()
    n_events = sum(len(batch) for _, batch in batches)
    print(f"{n_events} events over {len(batches)} ticks", file=sys.stderr)
    return EXIT_OK


def cmd_bench(args) -> int:
    if args.input is not None:
        source = args.input
    else:
        source = GeneratorParams(
            n_sequences=args.seqs, n_items=args.items, n_ticks=args.ticks,
            arrival_prob=args.arrival_prob, element_size_max=args.element_size_max,
            qty_max=args.qty_max, seed=args.seed)
    spec = bench_mod.SweepSpec(
        source=source,
        poi_values=tuple(args.poi),
        minsup_values=tuple(args.minsup),
        modes=tuple(args.modes),
        repetitions=args.reps,
        max_element_size=_max_element_size(),
    )
    result = bench_mod.run_sweep(spec)

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "sweep.csv").write_text(bench_mod.sweep_csv(result.rows), encoding="utf-8")
    (out_dir / "fig5.dat").write_text(bench_mod.poi_time_data(result.rows), encoding="utf-8")
    (out_dir / "fig6.dat").write_text(bench_mod.poi_minsup_count_data(result.rows),
                                      encoding="utf-8")
    (out_dir / "fig7.dat").write_text(bench_mod.mode_count_data(result.rows),
                                      encoding="utf-8")
    print(f"wrote sweep.csv, fig5.dat, fig6.dat, fig7.dat to {out_dir}")

    violations = bench_mod.check_sweep_invariants(result)
    if violations:
        for v in violations:
            print(f"invariant violation: {v}", file=sys.stderr)
        return EXIT_VERIFY
    return EXIT_OK


def _add_miner_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("input", help="event file, or - for standard input")
    p.add_argument("--poi", type=int, default=10,
                   help="window length in ticks (default 10)")
    p.add_argument("--minsup", type=float, default=0.5,
                   help="minimum support ratio in (0,1] (default 0.5)")
    p.add_argument("--boolean", action="store_true",
                   help="coerce all quantities to 1 before mining")


def _add_generator_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seqs", type=int, default=10, help="sequences (default 10)")
    p.add_argument("--items", type=int, default=8, help="distinct items (default 8)")
    p.add_argument("--ticks", type=int, default=50, help="ticks (default 50)")
    p.add_argument("--arrival-prob", type=float, default=0.2,
                   help="per-(sequence,tick) arrival probability (default 0.2)")
    p.add_argument("--element-size-max", type=int, default=3,
                   help="max items per element (default 3)")
    p.add_argument("--qty-max", type=int, default=3,
                   help="max item quantity (default 3)")
    p.add_argument("--seed", type=int, default=42, help="RNG seed (default 42)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="prosupmine",
        description="Windowed sequential pattern mining over quantified itemset streams.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_mine = sub.add_parser("mine", help="mine a stream, one report per tick")
    _add_miner_flags(p_mine)
    p_mine.add_argument("--format", choices=REPORT_FORMATS, default="text")
    p_mine.add_argument("--out", default="-", help="output path (default stdout)")
    p_mine.set_defaults(func=cmd_mine)

    p_verify = sub.add_parser(
        "verify", help="check the tree miner against the brute-force reference")
    _add_miner_flags(p_verify)
    p_verify.add_argument("--max-candidates", type=int, default=200_000,
                          help="brute-force enumeration bound (default 200000)")
    p_verify.set_defaults(func=cmd_verify)

    p_gen = sub.add_parser("generate", help="write a seeded synthetic event file")
    _add_generator_flags(p_gen)
    p_gen.add_argument("--out", default="-", help="output path (default stdout)")
    p_gen.set_defaults(func=cmd_generate)

    p_bench = sub.add_parser("bench", help="run a parameter sweep and write trend data")
    p_bench.add_argument("--input", default=None,
                         help="event file (default: generate synthetically)")
    _add_generator_flags(p_bench)
    p_bench.add_argument("--poi", type=int, nargs="+", default=[5, 10, 20, 40])
    p_bench.add_argument("--minsup", type=float, nargs="+", default=[0.25, 0.5, 0.75])
    p_bench.add_argument("--modes", nargs="+", choices=[MODE_BOOLEAN, MODE_COUPLED],
                         default=[MODE_BOOLEAN, MODE_COUPLED])
    p_bench.add_argument("--reps", type=int, default=3,
                         help="timing repetitions per cell (default 3)")
    p_bench.add_argument("--out", default="bench-out", help="output directory")
    p_bench.set_defaults(func=cmd_bench)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InstanceTooLarge as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except (ParseError, ElementTooLarge, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except MiningError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
