"""Command-line front end.

Exit codes: 0 success, 2 bad input, 3 request over the cell budget
(``DISCWAVES_CELL_BUDGET``, default one million cells).
"""
from __future__ import annotations

import argparse
import csv
import os
import sys
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import pgm
from .aggregation import AggregationError, custom_pattern, parse_scenario
from .astroid import moire_polygon, published_report, table_report
from .broadcast import (
    Window, WindowError, activation_steps, cycling_automaton, region_extent, run_async,
    run_sync, wave_automaton,
)
from .chaincode import ChainCode, ChainCodeError, first_octant_code, full_circle_code, line_segments
from .composition import BroadcastSequence, compose_all
from .lattice import distinct_radii

DEFAULT_BUDGET = 1_000_000


class InputError(Exception):
    pass


class BudgetError(Exception):
    pass


def cell_budget() -> int:
    raw = os.environ.get("DISCWAVES_CELL_BUDGET")
    if raw is None:
        return DEFAULT_BUDGET
    try:
        value = int(raw)
    except ValueError:
        raise InputError(f"DISCWAVES_CELL_BUDGET must be an integer, got {raw!r}") from None
    if value < 1:
        raise InputError("DISCWAVES_CELL_BUDGET must be positive")
    return value


def _check_budget(cells: int, what: str) -> None:
    budget = cell_budget()
    if cells > budget:
        raise BudgetError(f"{what} needs {cells} cells, over the budget of {budget} "
                          "(raise DISCWAVES_CELL_BUDGET to allow it)")


def _radius(text: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise InputError(f"expected a squared radius, got {text!r}") from None


# ---- verbs ----------------------------------------------------------------

def cmd_radii(args, out) -> None:
    if args.limit < 0:
        raise InputError("limit must be non-negative")
    print(" ".join(map(str, distinct_radii(args.limit))), file=out)


def cmd_chaincode(args, out) -> None:
    code = first_octant_code(args.r2)
    if args.full_circle:
        print(full_circle_code(args.r2).word, file=out)
        return
    if args.segments:
        print(f"{code.word}  [{', '.join(map(str, line_segments(code)))}]", file=out)
        return
    print(code.word, file=out)


def cmd_compose(args, out) -> None:
    if len(args.inputs) < 2:
        raise InputError("compose needs at least two inputs")
    if args.code:
        codes = [ChainCode(w) for w in args.inputs]
        sources = list(args.inputs)
    else:
        radii = [_radius(t) for t in args.inputs]
        codes = [first_octant_code(r2) for r2 in radii]
        sources = [str(r2) for r2 in radii]
    result = compose_all(codes, sources, naive=args.naive)
    print(result.word, file=out)
    if args.provenance:
        with open(args.provenance, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["segment", "gradient", "source"])
            writer.writerows(result.provenance_rows())


def cmd_simulate(args, out) -> None:
    seq = BroadcastSequence.of(args.sequence)
    if args.k < 1:
        raise InputError("k must be >= 1")
    half = region_extent(seq, args.k) + 1
    window = Window.around((0, 0), half)
    _check_budget(window.cells * (args.k + 1), "simulation")
    modulus = args.modulus
    if args.mode == "sync" and seq.period == 1:
        machine, run = wave_automaton(seq.radii[0]), run_sync
    else:
        alphabet = modulus or 4
        alphabet = -(-alphabet // seq.period) * seq.period
        machine = cycling_automaton(seq, alphabet)
        run = run_sync if args.mode == "sync" else run_async
    trace = run(machine, window, (0, 0), args.k)
    first = activation_steps(trace)
    steps = np.zeros(window.shape, np.int64)  # 0 = never reached, else first step + 1
    for p, t in first.items():
        steps[window.index(p)] = t + 1
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    maxval = min(255, args.k + 1)
    for t in range(args.k + 1):
        frame = np.where((steps > 0) & (steps <= t + 1), steps, 0)
        pgm.write(outdir / f"frame_{t:03d}.pgm", np.minimum(frame, maxval), maxval)
    with open(outdir / "labeling.csv", "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["x", "y", "step", "label"])
        for r, c in zip(*np.nonzero(steps)):
            x, y = int(c) + window.xmin, int(r) + window.ymin
            index = max(int(steps[r, c]) - 2, 0)
            label = index % modulus if modulus else index
            writer.writerow([x, y, index + 1, label])
    print(f"{len(first)} points reached in {args.k} steps; wrote {args.k + 1} frames to {outdir}",
          file=out)


def cmd_aggregate(args, out) -> None:
    try:
        text = Path(args.scenario).read_text()
    except OSError as exc:
        raise InputError(f"cannot read scenario: {exc}") from None
    scenario = parse_scenario(text)
    _check_budget(scenario.window.cells, "pattern")
    field = custom_pattern(scenario)
    data = pgm.encode(field.cells, max(len(field.symbols) - 1, 1))
    if args.out:
        Path(args.out).write_bytes(data)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["x", "y", "symbol"])
            writer.writerows(field.rows())


def cmd_astroid(args, out, err) -> None:
    if args.published_tables:
        text, summary = published_report()
        out.write(text)
        print(summary, file=err)
        return
    if args.B is None or args.kmax is None:
        raise InputError("astroid needs B and kmax, or --published-tables")
    if args.kmax < 0:
        raise InputError("kmax must be non-negative")
    half = 4 * args.kmax + 8
    _check_budget((2 * half + 1) ** 2, "level sets")
    out.write(table_report([(args.B, k) for k in range(1, args.kmax + 1)]))
    if args.pgm:
        outdir = Path(args.pgm)
        outdir.mkdir(parents=True, exist_ok=True)
        for k in range(1, args.kmax + 1):
            poly = moire_polygon(args.B, k)
            pgm.write(outdir / f"level_{k:03d}.pgm", poly.mask.astype(np.int64), 1)


# ---- parser ---------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="discwaves", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("radii", help="list distinct squared radii up to a limit")
    p.add_argument("limit", type=int)

    p = sub.add_parser("chaincode", help="octant chain code of a disc")
    p.add_argument("r2", type=int)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--full-circle", action="store_true")
    g.add_argument("--segments", action="store_true")

    p = sub.add_parser("compose", help="compose disc chain codes")
    p.add_argument("inputs", nargs="+", help="squared radii, or octant words with --code")
    p.add_argument("--code", action="store_true", help="treat inputs as octant words")
    p.add_argument("--naive", action="store_true", help="use the max-plus algorithm")
    p.add_argument("--provenance", metavar="CSV", help="write segment provenance")

    p = sub.add_parser("simulate", help="run a broadcast wave and write frames")
    p.add_argument("sequence", help="squared radius or comma-separated cycle, e.g. 16,26")
    p.add_argument("k", type=int, help="number of steps")
    p.add_argument("--mode", choices=("sync", "async"), default="async")
    p.add_argument("--modulus", type=int)
    p.add_argument("--out", default="simulation", help="output directory")

    p = sub.add_parser("aggregate", help="render a two-wave aggregation scenario")
    p.add_argument("scenario")
    p.add_argument("--out", metavar="PGM", help="image path (default: stdout)")
    p.add_argument("--csv", metavar="CSV", help="also write per-cell symbols")

    p = sub.add_parser("astroid", help="astroid approximation table")
    p.add_argument("B", type=int, nargs="?")
    p.add_argument("kmax", type=int, nargs="?")
    p.add_argument("--published-tables", action="store_true",
                   help="run every published (B, k) pair and summarise the match")
    p.add_argument("--pgm", metavar="DIR", help="write each level polygon as a PGM")
    return parser


def main(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.verb == "simulate" and args.modulus is not None and args.modulus < 1:
        print("error: modulus must be positive", file=err)
        return 2
    handlers = {
        "radii": cmd_radii, "chaincode": cmd_chaincode, "compose": cmd_compose,
        "simulate": cmd_simulate, "aggregate": cmd_aggregate,
    }
    try:
        if args.verb == "astroid":
            cmd_astroid(args, out, err)
        else:
            handlers[args.verb](args, out)
    except BudgetError as exc:
        print(f"error: {exc}", file=err)
        return 3
    except (InputError, ValueError, AggregationError, ChainCodeError, WindowError) as exc:
        print(f"error: {exc}", file=err)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
