"""Command line interface.

Subcommands: verify (full campaign, JSON report), sweep (per-cell ratio table,
CSV), sharpness (ratio maximization for one checker), catalog (series table),
oracle (independent cross-checks only).  The KTL_SEED environment variable
overrides the seed from any other source.  All numeric output is emitted with
full round-trip precision.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

from .campaign import REGISTRY, sharpness_search
from .checks import DEFAULT_TOL
from .errors import ConfigInvalid, KatolabError, UnknownChecker
from .generators import SeedPlan
from .report import (
    EXIT_CONFIG,
    EXIT_OK,
    EXIT_VIOLATION,
    Report,
    TrialPlan,
    exit_code_for,
    oracle_checks,
    report_to_json,
    run_sweep,
    run_verify,
)
from .series import CATALOG


def _parse_dims(text: str) -> tuple[int, ...]:
    dims: list[int] = []
    for token in text.split(","):
        token = token.strip()
        if not token:
            continue
        if "-" in token:
            lo_s, hi_s = token.split("-", 1)
            lo, hi = int(lo_s), int(hi_s)
            if hi < lo:
                raise ConfigInvalid(f"bad dim range {token!r}")
            dims.extend(range(lo, hi + 1))
        else:
            dims.append(int(token))
    if not dims:
        raise ConfigInvalid("no dims given")
    return tuple(dims)


def _build_plan(args) -> TrialPlan:
    base: dict = {}
    if getattr(args, "config", None):
        with open(args.config, "r", encoding="utf-8") as fh:
            base = json.load(fh)
        if not isinstance(base, dict):
            raise ConfigInvalid("config file must hold a JSON object")
    plan = TrialPlan.from_dict(base)
    updates: dict = {}
    if getattr(args, "seed", None) is not None:
        updates["seed"] = args.seed
    if getattr(args, "dims", None):
        updates["dims"] = _parse_dims(args.dims)
    if getattr(args, "trials", None) is not None:
        updates["trials_per_cell"] = args.trials
    if getattr(args, "checkers", None):
        updates["checkers"] = tuple(c.strip() for c in args.checkers.split(",") if c.strip())
    env_seed = os.environ.get("KTL_SEED")
    if env_seed is not None:
        updates["seed"] = int(env_seed)
    if updates:
        d = plan.to_dict()
        d.update(
            {
                k: (list(v) if isinstance(v, tuple) else v)
                for k, v in updates.items()
            }
        )
        plan = TrialPlan.from_dict(d)
    plan.validate()
    return plan


def _print_summary(report: Report, code: int) -> None:
    agg = report.aggregates
    print(
        f"records={agg['total_records']} passed={agg['total_passed']} "
        f"failed={agg['total_failed']} worst_rel_slack={agg['worst_rel_slack']!r} "
        f"runtime={report.runtime_seconds:.2f}s exit={code}"
    )
    for cid, stats in agg["per_checker"].items():
        flag = "" if stats["passed"] == stats["records"] else "  <-- FAILURES"
        print(
            f"  {cid}: {stats['passed']}/{stats['records']} "
            f"worst_rel_slack={stats['worst_rel_slack']!r}{flag}"
        )


def _cmd_verify(args) -> int:
    plan = _build_plan(args)
    report = run_verify(plan)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(report_to_json(report))
        print(f"wrote {args.out}")
    code = exit_code_for(report)
    _print_summary(report, code)
    return code


def _cmd_sweep(args) -> int:
    plan = _build_plan(args)
    report, rows = run_sweep(plan, args.axis)
    from .report import sweep_rows_to_csv

    csv_text = sweep_rows_to_csv(rows)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(csv_text)
        print(f"wrote {args.out} ({len(rows)} rows)")
    else:
        sys.stdout.write(csv_text)
    return exit_code_for(report)


def _cmd_sharpness(args) -> int:
    seed = int(os.environ.get("KTL_SEED", args.seed))
    result = sharpness_search(
        args.checker, args.dim, args.trials, SeedPlan(seed), alpha=args.alpha
    )
    print(f"checker={result.checker_id} best_ratio={result.best_ratio!r}")
    print(f"witness: {result.witness}")
    if not math.isfinite(result.best_ratio) or result.best_ratio > 1.0 + DEFAULT_TOL.slack_rel:
        print("ratio bound exceeded: genuine violation")
        return EXIT_VIOLATION
    return EXIT_OK


def _cmd_catalog(_args) -> int:
    print(f"{'name':<20} {'start':>5} {'radius':>8} closed-form")
    for key, series in CATALOG.items():
        radius = "inf" if math.isinf(series.radius) else repr(series.radius)
        has_cf = "yes" if series.closed_form is not None else "no"
        print(f"{key:<20} {series.start_index:>5} {radius:>8} {has_cf}")
    return EXIT_OK


def _cmd_oracle(args) -> int:
    seed = int(os.environ.get("KTL_SEED", args.seed))
    results = oracle_checks(seed)
    all_passed = True
    for res in results:
        status = "PASS" if res["passed"] else "FAIL"
        all_passed &= res["passed"]
        print(f"{status} {res['name']}: {res['detail']}")
    return EXIT_OK if all_passed else EXIT_VIOLATION


def _add_plan_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON file mirroring the trial plan")
    p.add_argument("--seed", type=int, default=None, help="master seed")
    p.add_argument("--dims", help="comma list and/or ranges, e.g. 1-4,8")
    p.add_argument("--trials", type=int, default=None, help="trials per cell")
    p.add_argument("--checkers", help="comma list of checker ids (default: all)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="katolab",
        description="verify trace inequalities of Kato-Schwarz type on seeded random operators",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_verify = sub.add_parser("verify", help="run the full checker campaign")
    _add_plan_args(p_verify)
    p_verify.add_argument("--out", help="write the JSON report here")
    p_verify.set_defaults(func=_cmd_verify)

    p_sweep = sub.add_parser("sweep", help="per-cell ratio table along alpha or dim")
    _add_plan_args(p_sweep)
    p_sweep.add_argument("--axis", choices=("alpha", "dim"), required=True)
    p_sweep.add_argument("--out", help="write the CSV table here")
    p_sweep.set_defaults(func=_cmd_sweep)

    p_sharp = sub.add_parser("sharpness", help="maximize lhs/rhs for one checker")
    p_sharp.add_argument("--checker", required=True, choices=sorted(REGISTRY))
    p_sharp.add_argument("--trials", type=int, default=1000)
    p_sharp.add_argument("--dim", type=int, default=2)
    p_sharp.add_argument("--seed", type=int, default=42)
    p_sharp.add_argument("--alpha", type=float, default=0.5)
    p_sharp.set_defaults(func=_cmd_sharpness)

    p_catalog = sub.add_parser("catalog", help="list the power series catalog")
    p_catalog.set_defaults(func=_cmd_catalog)

    p_oracle = sub.add_parser("oracle", help="run only the independent cross-checks")
    p_oracle.add_argument("--seed", type=int, default=42)
    p_oracle.set_defaults(func=_cmd_oracle)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigInvalid, UnknownChecker, OSError, json.JSONDecodeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except KatolabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    raise SystemExit(main())
