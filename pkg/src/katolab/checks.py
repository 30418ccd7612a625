"""Tolerance profiles and the inequality-check record every module reports with."""

from __future__ import annotations

from dataclasses import dataclass, replace

# Floors the rel_slack denominator so that 0 <= 0 passes without a 0/0.
REL_FLOOR = 1e-300

STATUS_CHECKED = "checked"
STATUS_NOT_APPLICABLE = "not-applicable"


@dataclass(frozen=True)
class ToleranceProfile:
    """Numerical tolerances: decomposition residuals, inequality slack, equality certification."""

    decomposition: float = 1e-10
    slack_rel: float = 1e-9
    equality_rel: float = 1e-8

    def __post_init__(self) -> None:
        if not (self.decomposition > 0 and self.slack_rel > 0 and self.equality_rel > 0):
            raise ValueError("tolerances must be strictly positive")
        if self.slack_rel < self.decomposition:
            raise ValueError("slack_rel must be >= decomposition tolerance")


DEFAULT_TOL = ToleranceProfile()


@dataclass(frozen=True)
class InequalityCheck:
    """One verified comparison lhs <= rhs with its slack bookkeeping.

    rel_slack = (rhs - lhs) / max(rhs, scale, floor); a check passes when
    rel_slack >= -slack_rel.  `scale` lets near-zero-rhs comparisons be judged
    against the natural magnitude of the quantities involved.
    """

    name: str
    lhs: float
    rhs: float
    slack: float
    rel_slack: float
    passed: bool
    context: str = ""
    status: str = STATUS_CHECKED

    def with_context(self, prefix: str) -> "InequalityCheck":
        joined = f"{prefix} {self.context}".strip()
        return replace(self, context=joined)


def make_check(
    name: str,
    lhs: float,
    rhs: float,
    *,
    context: str = "",
    tol: ToleranceProfile = DEFAULT_TOL,
    scale: float = 0.0,
) -> InequalityCheck:
    lhs = float(lhs)
    rhs = float(rhs)
    slack = rhs - lhs
    rel_slack = float(slack / max(rhs, float(scale), REL_FLOOR))
    return InequalityCheck(
        name=name,
        lhs=lhs,
        rhs=rhs,
        slack=slack,
        rel_slack=rel_slack,
        passed=bool(rel_slack >= -tol.slack_rel),
        context=context,
    )


def not_applicable(name: str, context: str = "") -> InequalityCheck:
    """Vacuous record for a hypothesis the inputs do not satisfy."""
    return InequalityCheck(
        name=name,
        lhs=0.0,
        rhs=0.0,
        slack=0.0,
        rel_slack=0.0,
        passed=True,
        context=context,
        status=STATUS_NOT_APPLICABLE,
    )
