"""Campaign configuration, execution, and machine-readable reporting.

A plan pins (seed, dims, trials, exponent grid, checker selection, tolerances)
and fully determines every record; within a (checker, dim) cell, trial t uses
grid point t mod len(grid) so the whole grid is covered while the trial budget
stays flat.  Records carry enough context to recompute every aggregate.
"""

from __future__ import annotations

import csv
import io
import json
import math
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from . import __version__
from .campaign import REGISTRY, RANK, checker_alphas, run_checker
from .checks import (
    DEFAULT_TOL,
    InequalityCheck,
    STATUS_NOT_APPLICABLE,
    ToleranceProfile,
)
from .errors import ConfigInvalid
from .generators import GENERATOR_NAME, SeedPlan, draw_matrix, draw_orthonormal_basis
from .linalg import hs_norm, schatten, trace, trace_via_basis
from .series import CATALOG, eval_matrix_spectral, eval_matrix_truncated, terms_for_tail
from .trace_suite import AlphaGrid

# rel_slack below this threshold is a genuine violation rather than a
# tolerance-level failure.
VIOLATION_REL = -1e-6

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_TOLERANCE = 2
EXIT_VIOLATION = 3


@dataclass(frozen=True)
class TrialPlan:
    """Seeded campaign configuration."""

    seed: int = 42
    dims: tuple[int, ...] = (1, 2, 3, 4, 5, 6, 7, 8)
    trials_per_cell: int = 200
    alpha_grid: AlphaGrid = field(default_factory=AlphaGrid)
    checkers: tuple[str, ...] = ()
    tolerance: ToleranceProfile = field(default_factory=ToleranceProfile)

    def validate(self) -> None:
        if not self.dims:
            raise ConfigInvalid("dims must be nonempty")
        if any(not 1 <= n <= 512 for n in self.dims):
            raise ConfigInvalid("dims must lie in [1, 512]")
        if self.trials_per_cell < 1:
            raise ConfigInvalid("trials_per_cell must be >= 1")
        unknown = [c for c in self.checkers if c not in REGISTRY]
        if unknown:
            raise ConfigInvalid(f"unknown checkers: {unknown}")

    def resolved_checkers(self) -> tuple[str, ...]:
        return self.checkers if self.checkers else tuple(REGISTRY)

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "dims": list(self.dims),
            "trials_per_cell": self.trials_per_cell,
            "alpha_grid": list(self.alpha_grid.points),
            "checkers": list(self.checkers),
            "tolerance": asdict(self.tolerance),
        }

    @staticmethod
    def from_dict(d: dict) -> "TrialPlan":
        known = {"seed", "dims", "trials_per_cell", "alpha_grid", "checkers", "tolerance"}
        extra = set(d) - known
        if extra:
            raise ConfigInvalid(f"unknown plan fields: {sorted(extra)}")
        kwargs: dict = {}
        if "seed" in d:
            kwargs["seed"] = int(d["seed"])
        if "dims" in d:
            kwargs["dims"] = tuple(int(n) for n in d["dims"])
        if "trials_per_cell" in d:
            kwargs["trials_per_cell"] = int(d["trials_per_cell"])
        if "alpha_grid" in d:
            kwargs["alpha_grid"] = AlphaGrid(points=tuple(float(a) for a in d["alpha_grid"]))
        if "checkers" in d:
            kwargs["checkers"] = tuple(str(c) for c in d["checkers"])
        if "tolerance" in d:
            kwargs["tolerance"] = ToleranceProfile(**d["tolerance"])
        return TrialPlan(**kwargs)


@dataclass(frozen=True)
class CheckRecord:
    """One inequality evaluation inside a campaign."""

    checker: str
    n: int
    alpha: float | None
    trial: int
    name: str
    context: str
    lhs: float
    rhs: float
    slack: float
    rel_slack: float
    passed: bool
    status: str

    def to_dict(self) -> dict:
        return asdict(self)

    @staticmethod
    def from_dict(d: dict) -> "CheckRecord":
        return CheckRecord(**d)


@dataclass(frozen=True)
class Report:
    """Plan echo, per-check records, and recomputable aggregates."""

    plan: TrialPlan
    records: tuple[CheckRecord, ...]
    aggregates: dict
    runtime_seconds: float
    tool_version: str
    generator: str

    def to_dict(self) -> dict:
        return {
            "plan": self.plan.to_dict(),
            "records": [r.to_dict() for r in self.records],
            "aggregates": self.aggregates,
            "runtime_seconds": self.runtime_seconds,
            "tool_version": self.tool_version,
            "generator": self.generator,
        }

    @staticmethod
    def from_dict(d: dict) -> "Report":
        return Report(
            plan=TrialPlan.from_dict(d["plan"]),
            records=tuple(CheckRecord.from_dict(r) for r in d["records"]),
            aggregates=d["aggregates"],
            runtime_seconds=d["runtime_seconds"],
            tool_version=d["tool_version"],
            generator=d["generator"],
        )


def _record_from_check(check: InequalityCheck, checker: str, n: int, alpha, trial: int, stream: int) -> CheckRecord:
    prefix = f"stream={stream}"
    context = f"{prefix} {check.context}".strip()
    return CheckRecord(
        checker=checker,
        n=n,
        alpha=None if alpha is None else float(alpha),
        trial=trial,
        name=check.name,
        context=context,
        lhs=check.lhs,
        rhs=check.rhs,
        slack=check.slack,
        rel_slack=check.rel_slack,
        passed=check.passed,
        status=check.status,
    )


def _stream_index(rank: int, n: int, trial: int) -> int:
    return ((rank * 4096 + n) << 32) + trial


def compute_aggregates(records: tuple[CheckRecord, ...]) -> dict:
    per_checker: dict[str, dict] = {}
    for rec in records:
        agg = per_checker.setdefault(
            rec.checker,
            {
                "records": 0,
                "passed": 0,
                "not_applicable": 0,
                "worst_rel_slack": math.inf,
                "best_ratio": None,
            },
        )
        agg["records"] += 1
        if rec.status == STATUS_NOT_APPLICABLE:
            agg["not_applicable"] += 1
            agg["passed"] += 1
            continue
        agg["passed"] += int(rec.passed)
        agg["worst_rel_slack"] = min(agg["worst_rel_slack"], rec.rel_slack)
        r = _record_ratio(rec)
        if r is not None and (agg["best_ratio"] is None or r > agg["best_ratio"]):
            agg["best_ratio"] = r
    for agg in per_checker.values():
        if not math.isfinite(agg["worst_rel_slack"]):
            agg["worst_rel_slack"] = 0.0
    total = len(records)
    passed = sum(1 for r in records if r.passed)
    worst = min((r.rel_slack for r in records if r.status != STATUS_NOT_APPLICABLE), default=0.0)
    return {
        "per_checker": per_checker,
        "total_records": total,
        "total_passed": passed,
        "total_failed": total - passed,
        "worst_rel_slack": worst,
    }


def _record_ratio(rec: CheckRecord) -> float | None:
    if rec.status == STATUS_NOT_APPLICABLE:
        return None
    if max(abs(rec.lhs), abs(rec.rhs)) <= 1e-300:
        return None
    if rec.rhs <= 1e-300:
        return math.inf
    return rec.lhs / rec.rhs


def run_verify(plan: TrialPlan) -> Report:
    """Execute every cell of the plan and assemble the report.

    Deterministic for a fixed plan: each (checker, dim, trial) cell draws from
    its own stream derived from (registry rank, dim, trial), independent of
    which checkers are selected.
    """
    plan.validate()
    t0 = time.perf_counter()
    records: list[CheckRecord] = []
    for cid in plan.resolved_checkers():
        cdef = REGISTRY[cid]
        rank = RANK[cid]
        alphas = checker_alphas(cdef, plan.alpha_grid)
        uses_alpha = cdef.alpha_mode != "none"
        for n in plan.dims:
            if cdef.max_dim is not None and n > cdef.max_dim:
                continue
            for trial in range(plan.trials_per_cell):
                alpha = alphas[trial % len(alphas)]
                stream = _stream_index(rank, n, trial)
                rng = SeedPlan(plan.seed, stream).rng()
                checks = run_checker(cid, n, alpha, rng, plan.tolerance, plan.alpha_grid)
                for check in checks:
                    records.append(
                        _record_from_check(
                            check, cid, n, alpha if uses_alpha else None, trial, stream
                        )
                    )
    runtime = time.perf_counter() - t0
    recs = tuple(records)
    return Report(
        plan=plan,
        records=recs,
        aggregates=compute_aggregates(recs),
        runtime_seconds=runtime,
        tool_version=__version__,
        generator=GENERATOR_NAME,
    )


def exit_code_for(report: Report) -> int:
    """0 all passed; 2 tolerance-level failures only; 3 genuine violations."""
    failed = [r for r in report.records if not r.passed]
    if not failed:
        return EXIT_OK
    if any(r.rel_slack < VIOLATION_REL for r in failed):
        return EXIT_VIOLATION
    return EXIT_TOLERANCE


def report_to_json(report: Report) -> str:
    return json.dumps(report.to_dict(), indent=1)


def report_from_json(text: str) -> Report:
    return Report.from_dict(json.loads(text))


def records_json(report: Report) -> str:
    """Record values only, for byte-identity comparisons across runs."""
    return json.dumps([r.to_dict() for r in report.records], sort_keys=True)


# --------------------------------------------------------------------------
# sweep tables


def run_sweep(plan: TrialPlan, axis: str) -> tuple[Report, list[dict]]:
    """Campaign run plus per-cell ratio rows along the chosen axis.

    axis="alpha": one row per (checker, alpha), dims pooled;
    axis="dim": one row per (checker, n), alphas pooled.
    """
    if axis not in ("alpha", "dim"):
        raise ConfigInvalid("sweep axis must be 'alpha' or 'dim'")
    report = run_verify(plan)
    groups: dict[tuple, list[CheckRecord]] = {}
    for rec in report.records:
        if rec.status == STATUS_NOT_APPLICABLE:
            continue
        if axis == "alpha":
            key = (rec.checker, "all", rec.alpha if rec.alpha is not None else "none")
        else:
            key = (rec.checker, rec.n, "all")
        groups.setdefault(key, []).append(rec)
    def _key(k):
        checker, n, alpha = k
        n_key = n if isinstance(n, int) else -1
        a_key = alpha if isinstance(alpha, float) else -1.0
        return (RANK[checker], n_key, a_key)

    rows = []
    for (checker, n, alpha) in sorted(groups, key=_key):
        recs = groups[(checker, n, alpha)]
        ratios = [r for r in (_record_ratio(rec) for rec in recs) if r is not None]
        rows.append(
            {
                "checker": checker,
                "n": n,
                "alpha": alpha,
                "trials": len(recs),
                "mean_ratio": float(np.mean(ratios)) if ratios else "",
                "max_ratio": float(np.max(ratios)) if ratios else "",
                "worst_rel_slack": min(r.rel_slack for r in recs),
            }
        )
    return report, rows


def sweep_rows_to_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["checker", "n", "alpha", "trials", "mean_ratio", "max_ratio", "worst_rel_slack"])
    for row in rows:
        writer.writerow(
            [
                row["checker"],
                row["n"],
                row["alpha"] if isinstance(row["alpha"], str) else repr(row["alpha"]),
                row["trials"],
                row["mean_ratio"] if isinstance(row["mean_ratio"], str) else repr(row["mean_ratio"]),
                row["max_ratio"] if isinstance(row["max_ratio"], str) else repr(row["max_ratio"]),
                repr(row["worst_rel_slack"]),
            ]
        )
    return buf.getvalue()


# --------------------------------------------------------------------------
# standalone cross-check oracles


def oracle_checks(seed: int = 42, tol: ToleranceProfile = DEFAULT_TOL) -> list[dict]:
    """Cross-check properties with independent evaluation paths.

    Basis invariance: the trace computed through 10 random orthonormal bases
    against the diagonal sum.  Series evaluation: spectral evaluation against
    tail-bounded truncated sums for every catalog entry with a closed form.
    """
    results = []
    # Trace through random bases.
    worst = 0.0
    for n in range(2, 7):
        rng = SeedPlan(seed, 9_000_000 + n).rng()
        a = draw_matrix(n, "general", rng)
        tr = trace(a)
        _, _, tr_norm = schatten(a)
        for _ in range(10):
            basis = draw_orthonormal_basis(n, rng)
            delta = abs(trace_via_basis(a, basis, tol) - tr)
            worst = max(worst, delta / max(tr_norm, 1e-300))
    results.append(
        {
            "name": "trace-basis-invariance",
            "passed": bool(worst <= 1e-10),
            "detail": f"worst relative deviation {worst!r} over 10 bases per dim 2..6",
        }
    )
    # Spectral vs truncated series evaluation.
    for offset, (key, series) in enumerate(CATALOG.items()):
        if series.closed_form is None:
            continue
        cap = min(series.radius, 3.0)
        worst = 0.0
        rng = SeedPlan(seed, 9_100_000 + offset).rng()
        for i in range(50):
            n = 1 + int(rng.integers(1, 6))
            m = draw_matrix(n, "normal", rng)
            s_max = float(np.abs(np.linalg.eigvals(m)).max())
            target = rng.uniform(0.1, 0.9) * cap
            if s_max > 0:
                m = m * (target / s_max)
            n_terms = terms_for_tail(series, 0.9 * cap, 1e-13) + 8
            spectral = eval_matrix_spectral(series, m, tol)
            truncated = eval_matrix_truncated(series, m, n_terms)
            err = hs_norm(spectral - truncated) / max(hs_norm(spectral), 1e-300)
            worst = max(worst, err)
        results.append(
            {
                "name": f"series-eval-agreement:{key}",
                "passed": bool(worst <= 1e-8),
                "detail": f"worst relative deviation {worst!r} over 50 normal draws",
            }
        )
    return results
