#!/usr/bin/env python3
"""Sweep the exponent grid for the trace checkers and write a CSV table.

Usage:
    python scripts/alpha_sweep.py [sweep.csv]

Shows how tight each bound runs as the exponent moves across [0, 1]:
the mean and max of lhs/rhs per (checker, alpha) cell, dims pooled.
"""

import sys

from katolab.report import TrialPlan, run_sweep, sweep_rows_to_csv


def main() -> int:
    out = sys.argv[1] if len(sys.argv) > 1 else "sweep.csv"
    plan = TrialPlan(
        seed=42,
        dims=(2, 3, 4),
        trials_per_cell=100,
        checkers=("trace-kato", "basis-bound", "product-trace", "weighted-trace"),
    )
    _, rows = run_sweep(plan, "alpha")
    with open(out, "w", encoding="utf-8") as fh:
        fh.write(sweep_rows_to_csv(rows))
    print(f"{len(rows)} rows -> {out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
