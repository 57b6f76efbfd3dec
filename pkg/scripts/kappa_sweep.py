#!/usr/bin/env python3
"""Sweep the correspondence oracle over every small pair of maps.

For each ordered pair (f, g) of maps with carriers at most --bound, the
oracle counts squares from the one-step extension of f into g, counts
lifting structures of f over g, and checks the translation between the
two sets is a two-sided inverse.  One line is printed per pair; any
failing pair makes the script exit non-zero.

    python3 scripts/kappa_sweep.py [--presentation FILE] [--bound N] [--seed N]
"""

import argparse
import itertools
import sys
from pathlib import Path

from awfskit.arrows import ArrowObject
from awfskit.finset import FiniteMap, FinSet
from awfskit.serialize import decode_presentation, read_json
from awfskit.verify import oracle_kappa

FIXTURES = Path(__file__).resolve().parents[1] / "fixtures"


def all_arrows(max_size: int):
    """Every map between carriers of size at most ``max_size``."""
    out = []
    for x in range(max_size + 1):
        for y in range(max_size + 1):
            if x > 0 and y == 0:
                continue
            for table in itertools.product(range(y), repeat=x) if y else [()]:
                out.append(ArrowObject(FiniteMap(FinSet(x), FinSet(y), table)))
    return out


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument(
        "--presentation",
        default=str(FIXTURES / "gen_split_epi.json"),
        help="presentation JSON file (default: the split-epi fixture)",
    )
    parser.add_argument("--bound", type=int, default=2, help="max carrier size (default 2)")
    parser.add_argument("--seed", type=int, default=0, help="seed for sampled checks")
    args = parser.parse_args()

    pres = decode_presentation(read_json(args.presentation), args.presentation)
    arrows = all_arrows(args.bound)
    print(
        f"{len(arrows)} maps with carriers <= {args.bound}; "
        f"sweeping {len(arrows) ** 2} ordered pairs"
    )
    failures = 0
    for f, g in itertools.product(arrows, repeat=2):
        report = oracle_kappa(pres, f, g, bound=args.bound, seed=args.seed)
        detail = "; ".join(e.detail for e in report.entries if e.detail)
        mark = "ok  " if report.ok else "FAIL"
        print(f"{mark} f={list(f.map.table)}:{f.top.size}->{f.bot.size} "
              f"g={list(g.map.table)}:{g.top.size}->{g.bot.size}  {detail}")
        if not report.ok:
            failures += 1
    print(f"swept {len(arrows) ** 2} pairs, {failures} failures")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
