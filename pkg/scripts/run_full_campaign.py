#!/usr/bin/env python3
"""Run the default verification campaign and write the JSON report.

Usage:
    python scripts/run_full_campaign.py [report.json]

Equivalent to `katolab verify --out report.json` with the default plan
(seed 42, dims 1-8, 200 trials per cell, full exponent grid, all checkers).
"""

import sys

from katolab.report import TrialPlan, exit_code_for, report_to_json, run_verify


def main() -> int:
    out = sys.argv[1] if len(sys.argv) > 1 else "report.json"
    report = run_verify(TrialPlan())
    with open(out, "w", encoding="utf-8") as fh:
        fh.write(report_to_json(report))
    agg = report.aggregates
    print(
        f"{agg['total_records']} records, {agg['total_failed']} failed, "
        f"worst rel_slack {agg['worst_rel_slack']!r}, "
        f"{report.runtime_seconds:.1f}s -> {out}"
    )
    return exit_code_for(report)


if __name__ == "__main__":
    raise SystemExit(main())
