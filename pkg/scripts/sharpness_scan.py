#!/usr/bin/env python3
"""Scan every registered checker for its largest observed lhs/rhs ratio.

Usage:
    python scripts/sharpness_scan.py [trials] [dim]

Ratios near 1 identify checkers whose bounds are attained (or nearly so) by
random draws; ratios far below 1 mark bounds that random inputs leave loose.
"""

import sys

from katolab.campaign import REGISTRY, sharpness_search
from katolab.generators import SeedPlan


def main() -> int:
    trials = int(sys.argv[1]) if len(sys.argv) > 1 else 500
    dim = int(sys.argv[2]) if len(sys.argv) > 2 else 2
    print(f"{'checker':<26} {'best_ratio':>22}")
    for k, cid in enumerate(REGISTRY):
        res = sharpness_search(cid, dim, trials, SeedPlan(42, k * 1_000_000))
        print(f"{cid:<26} {res.best_ratio:>22.16f}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
