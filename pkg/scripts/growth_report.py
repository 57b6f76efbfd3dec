#!/usr/bin/env python3
"""Diagnose a chain that keeps growing instead of stabilising.

Runs the plain-mode chain on the growth presentation (one generator
from a point to a pair against the identity on a point), prints the
carrier size and the number of freshly adjoined cells at every stage,
and reports whether a stationary stage was reached.  Exits 2 when the
chain is still growing at the final stage, matching the command-line
tool's convention for non-stabilisation.

    python3 scripts/growth_report.py [--max-stage N] [--presentation FILE] [--map FILE]
"""

import argparse
import sys
from pathlib import Path

from awfskit.chain import detect_stabilisation, run_plain
from awfskit.finset import is_iso
from awfskit.serialize import decode_map_or_arrow, decode_presentation, read_json

FIXTURES = Path(__file__).resolve().parents[1] / "fixtures"


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--max-stage", type=int, default=8)
    parser.add_argument("--presentation", default=str(FIXTURES / "gen_growth.json"))
    parser.add_argument("--map", default=str(FIXTURES / "f_1to1.json"))
    args = parser.parse_args()

    pres = decode_presentation(read_json(args.presentation), args.presentation)
    f = decode_map_or_arrow(read_json(args.map), args.map)

    trace = run_plain(pres, f, max_stage=args.max_stage)
    sizes = trace.carrier_sizes
    print(f"target {list(f.map.table)}: {f.top.size} -> {f.bot.size}, "
          f"codomain fixed at {f.bot.size}")
    print(f"{'stage':>5}  {'carrier':>7}  {'adjoined':>8}  connecting map")
    print(f"{0:>5}  {sizes[0]:>7}  {'-':>8}  -")
    for n, square in enumerate(trace.connect):
        grew = sizes[n + 1] - sizes[n]
        kind = "invertible" if is_iso(square.top) is not None else "proper inclusion"
        print(f"{n + 1:>5}  {sizes[n + 1]:>7}  {grew:>8}  {kind}")

    stage = detect_stabilisation(trace)
    if stage is None:
        print(f"no stationary stage within max stage {args.max_stage}; "
              f"carriers grew {sizes[0]} -> {sizes[-1]}")
        return 2
    print(f"stationary from stage {stage}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
