"""Checker registry and seeded input drivers.

Each registered checker id maps to a driver that draws inputs satisfying the
checker's hypotheses from a given random stream and returns the resulting
inequality records.  The registry powers the campaign runner, the sweep
tables, and the sharpness search.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .checks import (
    DEFAULT_TOL,
    InequalityCheck,
    STATUS_NOT_APPLICABLE,
    ToleranceProfile,
    make_check,
)
from .errors import UnknownChecker
from .functional import (
    FunctionalInput,
    OperatorTuple,
    check_gram_forms,
    check_invertible_sandwich,
    check_monotone,
    check_sandwich,
    check_superadditive,
    check_tuple_monotone,
    check_tuple_sandwich,
    check_tuple_superadditive,
    sigma_with_scale,
    tuple_check,
    weight_bounds,
)
from .generators import (
    SeedPlan,
    draw_double_commuting_pair,
    draw_ginibre,
    draw_matrix,
    draw_orthonormal_basis,
    draw_vector,
    scale_to_trace_budget,
)
from .linalg import frac_power, hermitize, modulus_power
from .pointwise import (
    check_kato,
    check_kato_norm,
    check_mccarthy,
    check_positive_norm,
    check_schwarz_positive,
)
from .series import (
    CATALOG,
    check_series_bracket_pair,
    check_series_product,
    check_series_product_closed_form,
    check_series_trace,
    check_series_trace_closed_form,
)
from .trace_suite import (
    AlphaGrid,
    DEFAULT_GRID,
    check_basis_bound,
    check_basis_inf_bound,
    check_normal_product,
    check_normal_trace,
    check_product_trace,
    check_product_trace_half,
    check_sqrt_basis_bound,
    check_trace_kato,
    check_weighted_trace_bounds,
)

Driver = Callable[..., Sequence[InequalityCheck]]

_REL_FLOOR = 1e-300
_SERIES_MAX_DIM = 6
_ENTIRE_BUDGET = 4.0  # stand-in radius for entire series when scaling draws
_MARGIN = 0.8


@dataclass(frozen=True)
class CheckerDef:
    """A registered checker: its exponent domain, dimension cap, and drivers."""

    cid: str
    alpha_mode: str  # "closed" ([0,1]), "open" ((0,1)), or "none"
    run: Driver
    explore: Driver | None = None  # richer ensemble for the sharpness search
    max_dim: int | None = None


# --------------------------------------------------------------------------
# pointwise drivers


def _run_schwarz(n, alpha, rng, tol, grid):
    p = draw_matrix(n, "positive", rng)
    return [check_schwarz_positive(p, draw_vector(n, rng), draw_vector(n, rng), tol)]


def _run_positive_norm(n, alpha, rng, tol, grid):
    p = draw_matrix(n, "positive", rng)
    return [check_positive_norm(p, draw_vector(n, rng), tol)]


def _run_kato(n, alpha, rng, tol, grid):
    t = draw_matrix(n, "general", rng)
    return [check_kato(t, draw_vector(n, rng), draw_vector(n, rng), alpha, tol)]


def _run_kato_norm(n, alpha, rng, tol, grid):
    t = draw_matrix(n, "general", rng)
    return [check_kato_norm(t, draw_vector(n, rng), alpha, tol)]


def _run_mccarthy(n, alpha, rng, tol, grid):
    p = draw_matrix(n, "positive", rng)
    return [check_mccarthy(p, draw_vector(n, rng), alpha, tol)]


# --------------------------------------------------------------------------
# trace-suite drivers


def _run_trace_kato(n, alpha, rng, tol, grid):
    return [check_trace_kato(draw_matrix(n, "general", rng), alpha, tol)]


def _explore_trace_kato(n, alpha, rng, tol, grid):
    kind = int(rng.integers(0, 6))
    if kind == 0:
        # Near-positive, near-scalar draws probe the equality neighborhood.
        c = rng.uniform(0.5, 2.0)
        t = c * np.eye(n, dtype=np.complex128) + 0.02 * draw_ginibre(n, rng)
    else:
        cls = ("positive", "selfadjoint", "unitary", "normal", "general")[kind - 1]
        t = draw_matrix(n, cls, rng)
    return [check_trace_kato(t, alpha, tol)]


def _run_basis_bound(n, alpha, rng, tol, grid):
    t = draw_matrix(n, "general", rng)
    return [check_basis_bound(t, draw_orthonormal_basis(n, rng), alpha, tol)]


def _run_basis_inf(n, alpha, rng, tol, grid):
    t = draw_matrix(n, "general", rng)
    return [check_basis_inf_bound(t, draw_orthonormal_basis(n, rng), grid, tol)]


def _run_sqrt_basis(n, alpha, rng, tol, grid):
    t = draw_matrix(n, "general", rng)
    return [check_sqrt_basis_bound(t, draw_orthonormal_basis(n, rng), tol)]


def _run_normal_trace(n, alpha, rng, tol, grid):
    return list(check_normal_trace(draw_matrix(n, "normal", rng), alpha, tol))


def _run_product_trace(n, alpha, rng, tol, grid):
    t, a, b = (draw_matrix(n, "general", rng) for _ in range(3))
    return list(check_product_trace(t, a, b, alpha, tol))


def _run_product_half(n, alpha, rng, tol, grid):
    t, a, b = (draw_matrix(n, "general", rng) for _ in range(3))
    return [check_product_trace_half(t, a, b, tol)]


def _run_normal_product(n, alpha, rng, tol, grid):
    nm = draw_matrix(n, "normal", rng)
    a, b = draw_matrix(n, "general", rng), draw_matrix(n, "general", rng)
    return list(check_normal_product(nm, a, b, alpha, tol))


def _run_weighted_trace(n, alpha, rng, tol, grid):
    # Alternate normal and general middle factors so the normal-only variants
    # are exercised on roughly half of the trials.
    t_cls = "normal" if int(rng.integers(0, 2)) else "general"
    t = draw_matrix(n, t_cls, rng)
    b = draw_matrix(n, "general", rng)
    return list(check_weighted_trace_bounds(t, b, alpha, tol))


# --------------------------------------------------------------------------
# functional drivers


def _run_sigma_nonneg(n, alpha, rng, tol, grid):
    a = draw_matrix(n, "general", rng)
    t = draw_matrix(n, "general", rng)
    p = draw_matrix(n, "positive", rng)
    value, scale = sigma_with_scale(FunctionalInput(a, t, alpha, p), tol)
    return [
        make_check(
            "sigma-nonneg", 0.0, value, context=f"alpha={alpha:.6g}", tol=tol, scale=scale
        )
    ]


def _run_sigma_superadd(n, alpha, rng, tol, grid):
    a, t = draw_matrix(n, "general", rng), draw_matrix(n, "general", rng)
    p, q = draw_matrix(n, "positive", rng), draw_matrix(n, "positive", rng)
    return [check_superadditive(a, t, alpha, p, q, tol)]


def _run_sigma_monotone(n, alpha, rng, tol, grid):
    a, t = draw_matrix(n, "general", rng), draw_matrix(n, "general", rng)
    q = draw_matrix(n, "positive", rng)
    p = q + draw_matrix(n, "positive", rng)
    return [check_monotone(a, t, alpha, p, q, tol)]


def _sandwiched_weights(n, rng):
    """Q strictly positive, P = m Q + R, and M with M Q - P psd by construction."""
    q = draw_matrix(n, "positive", rng) + 0.05 * np.eye(n, dtype=np.complex128)
    r = draw_matrix(n, "positive", rng)
    m = float(rng.uniform(0.2, 1.0))
    p = m * q + r
    lam_max_r = float(np.linalg.eigvalsh(hermitize(r))[-1])
    lam_min_q = float(np.linalg.eigvalsh(hermitize(q))[0])
    big_m = m + (lam_max_r / lam_min_q) * 1.001 + 1e-6
    return p, q, m, big_m


def _run_sigma_sandwich(n, alpha, rng, tol, grid):
    a, t = draw_matrix(n, "general", rng), draw_matrix(n, "general", rng)
    p, q, m, big_m = _sandwiched_weights(n, rng)
    return list(check_sandwich(a, t, alpha, p, q, m, big_m, tol))


def _run_gram_forms(n, alpha, rng, tol, grid):
    a, t = draw_matrix(n, "general", rng), draw_matrix(n, "general", rng)
    u = draw_matrix(n, "general", rng)
    # V with |V|^2 = |U|^2 + D so the monotone half applies.
    d = draw_matrix(n, "positive", rng)
    v = frac_power(hermitize(u.conj().T @ u) + d, 0.5, tol)
    return list(check_gram_forms(a, t, alpha, v, u, tol))


def _run_invertible(n, alpha, rng, tol, grid):
    a, t = draw_matrix(n, "general", rng), draw_matrix(n, "general", rng)
    w1 = draw_orthonormal_basis(n, rng)
    w2 = draw_orthonormal_basis(n, rng)
    u = (w1 * rng.uniform(0.4, 1.6, n)) @ w2.conj().T
    return list(check_invertible_sandwich(a, t, alpha, u, tol))


def _draw_tuple(n, rng, k=None):
    k = k if k is not None else 2 + int(rng.integers(0, 2))
    ts = tuple(draw_matrix(n, "general", rng) for _ in range(k))
    a_s = tuple(draw_matrix(n, "general", rng) for _ in range(k))
    ps = tuple(draw_matrix(n, "positive", rng) for _ in range(k))
    zs = tuple(complex(z) for z in draw_vector(k, rng))
    ws = tuple(float(w) for w in rng.uniform(0.0, 2.0, k))
    return OperatorTuple(ts, a_s, ps, zs, ws)


def _run_tuple_trace(n, alpha, rng, tol, grid):
    return [tuple_check(_draw_tuple(n, rng), alpha, tol)]


def _run_tuple_superadd(n, alpha, rng, tol, grid):
    tup = _draw_tuple(n, rng)
    qs = tuple(draw_matrix(n, "positive", rng) for _ in range(tup.length))
    return [check_tuple_superadditive(tup, qs, alpha, tol)]


def _run_tuple_monotone(n, alpha, rng, tol, grid):
    tup = _draw_tuple(n, rng)
    qs = tuple(draw_matrix(n, "positive", rng) for _ in range(tup.length))
    ps = tuple(q + draw_matrix(n, "positive", rng) for q in qs)
    tup = OperatorTuple(tup.t_ops, tup.a_ops, ps, tup.z_weights, tup.p_weights)
    return [check_tuple_monotone(tup, qs, alpha, tol)]


def _run_tuple_sandwich(n, alpha, rng, tol, grid):
    k = 2 + int(rng.integers(0, 2))
    ts = tuple(draw_matrix(n, "general", rng) for _ in range(k))
    a_s = tuple(draw_matrix(n, "general", rng) for _ in range(k))
    ps, qs = [], []
    m = float(rng.uniform(0.2, 1.0))
    big_m = m
    for _ in range(k):
        q = draw_matrix(n, "positive", rng) + 0.05 * np.eye(n, dtype=np.complex128)
        r = draw_matrix(n, "positive", rng)
        qs.append(q)
        ps.append(m * q + r)
        lam_max_r = float(np.linalg.eigvalsh(hermitize(r))[-1])
        lam_min_q = float(np.linalg.eigvalsh(hermitize(q))[0])
        big_m = max(big_m, m + (lam_max_r / lam_min_q) * 1.001 + 1e-6)
    tup = OperatorTuple(ts, a_s, tuple(ps))
    return list(check_tuple_sandwich(tup, tuple(qs), m, big_m, alpha, tol))


def _run_weight_bounds(n, alpha, rng, tol, grid):
    return list(weight_bounds(_draw_tuple(n, rng), alpha, tol))


# --------------------------------------------------------------------------
# series drivers


def _scaled_normal(n, alpha, rng, radius, tol):
    nm = draw_matrix(n, "normal", rng)
    budget = min(radius, _ENTIRE_BUDGET)
    return scale_to_trace_budget(nm, alpha, budget, _MARGIN, tol)


_START1_SERIES = (
    "exp-minus-one",
    "geom-minus-one",
    "sinh",
    "artanh",
    "sin",
    "log-one-plus-inv",
)
_PRODUCT_SERIES = ("exp", "geom", "cos", "geom-alt")


def _run_series_trace(n, alpha, rng, tol, grid):
    s = CATALOG[_START1_SERIES[int(rng.integers(0, len(_START1_SERIES)))]]
    nm = _scaled_normal(n, alpha, rng, s.radius, tol)
    return [check_series_trace(nm, alpha, s, tol)]


def _run_series_resolvent(n, alpha, rng, tol, grid):
    nm = _scaled_normal(n, alpha, rng, 1.0, tol)
    return [check_series_trace_closed_form(nm, alpha, "resolvent", tol)]


def _run_series_exp(n, alpha, rng, tol, grid):
    nm = _scaled_normal(n, alpha, rng, math.inf, tol)
    return [check_series_trace_closed_form(nm, alpha, "exp", tol)]


def _scale_pair_to_budget(t, a, alpha, radius, tol):
    """Scale A then T so both product trace budgets sit at _MARGIN * budget."""
    budget = min(radius, _ENTIRE_BUDGET)
    target = _MARGIN * budget
    gram = a.conj().T @ a
    tr_g = float(np.trace(gram).real)
    if tr_g > target:
        a = a * math.sqrt(0.999 * target / tr_g)
        gram = a.conj().T @ a
    p1, p2 = 2.0 * alpha, 2.0 * (1.0 - alpha)
    tau1 = max(float(np.trace(gram @ modulus_power(t, p1)).real), 0.0)
    tau2 = max(float(np.trace(gram @ modulus_power(t, p2)).real), 0.0)

    def budget_at(c: float) -> float:
        v1 = tau1 * c**p1 if p1 > 0 else tau1
        v2 = tau2 * c**p2 if p2 > 0 else tau2
        return max(v1, v2)

    growing = (tau1 if p1 > 0 else 0.0) + (tau2 if p2 > 0 else 0.0)
    if growing == 0.0:
        return t, a
    lo, hi = 0.0, 1.0
    for _ in range(256):
        if budget_at(hi) >= target:
            break
        lo, hi = hi, hi * 2.0
    for _ in range(100):
        mid = 0.5 * (lo + hi)
        if budget_at(mid) > target:
            hi = mid
        else:
            lo = mid
    return lo * t, a


def _run_series_product(n, alpha, rng, tol, grid):
    s = CATALOG[_PRODUCT_SERIES[int(rng.integers(0, len(_PRODUCT_SERIES)))]]
    t, a = draw_double_commuting_pair(n, rng)
    t, a = _scale_pair_to_budget(t, a, alpha, s.radius, tol)
    return [check_series_product(t, a, alpha, s, tol)]


def _run_series_product_resolvent(n, alpha, rng, tol, grid):
    t, a = draw_double_commuting_pair(n, rng)
    t, a = _scale_pair_to_budget(t, a, alpha, 1.0, tol)
    return [check_series_product_closed_form(t, a, alpha, "resolvent", tol)]


def _run_series_product_exp(n, alpha, rng, tol, grid):
    t, a = draw_double_commuting_pair(n, rng)
    t, a = _scale_pair_to_budget(t, a, alpha, math.inf, tol)
    return [check_series_product_closed_form(t, a, alpha, "exp", tol)]


def _run_series_sum(n, alpha, rng, tol, grid):
    t, a = draw_double_commuting_pair(n, rng)
    t, a = _scale_pair_to_budget(t, a, alpha, math.inf, tol)
    return list(check_series_bracket_pair(t, a, alpha, CATALOG["sinh"], CATALOG["cosh"], tol))


def _run_series_dominance(n, alpha, rng, tol, grid):
    t, a = draw_double_commuting_pair(n, rng)
    t, a = _scale_pair_to_budget(t, a, alpha, 1.0, tol)
    return list(
        check_series_bracket_pair(
            t, a, alpha, CATALOG["geom"], CATALOG["log-one-minus-inv"], tol
        )
    )


# --------------------------------------------------------------------------
# registry


def _defs() -> tuple[CheckerDef, ...]:
    return (
        CheckerDef("schwarz-positive", "none", _run_schwarz),
        CheckerDef("positive-norm", "none", _run_positive_norm),
        CheckerDef("kato", "closed", _run_kato),
        CheckerDef("kato-norm", "closed", _run_kato_norm),
        CheckerDef("mccarthy", "open", _run_mccarthy),
        CheckerDef("trace-kato", "closed", _run_trace_kato, explore=_explore_trace_kato),
        CheckerDef("basis-bound", "closed", _run_basis_bound),
        CheckerDef("basis-inf", "none", _run_basis_inf),
        CheckerDef("sqrt-basis-bound", "none", _run_sqrt_basis),
        CheckerDef("normal-trace", "open", _run_normal_trace),
        CheckerDef("product-trace", "closed", _run_product_trace),
        CheckerDef("product-trace-half", "none", _run_product_half),
        CheckerDef("normal-product", "closed", _run_normal_product),
        CheckerDef("weighted-trace", "closed", _run_weighted_trace),
        CheckerDef("sigma-nonneg", "closed", _run_sigma_nonneg),
        CheckerDef("sigma-superadd", "closed", _run_sigma_superadd),
        CheckerDef("sigma-monotone", "closed", _run_sigma_monotone),
        CheckerDef("sigma-sandwich", "closed", _run_sigma_sandwich),
        CheckerDef("gram-forms", "closed", _run_gram_forms),
        CheckerDef("invertible-sandwich", "closed", _run_invertible),
        CheckerDef("tuple-trace", "closed", _run_tuple_trace),
        CheckerDef("tuple-superadd", "closed", _run_tuple_superadd),
        CheckerDef("tuple-monotone", "closed", _run_tuple_monotone),
        CheckerDef("tuple-sandwich", "closed", _run_tuple_sandwich),
        CheckerDef("weight-bounds", "closed", _run_weight_bounds),
        CheckerDef("series-trace", "open", _run_series_trace, max_dim=_SERIES_MAX_DIM),
        CheckerDef("series-resolvent", "open", _run_series_resolvent, max_dim=_SERIES_MAX_DIM),
        CheckerDef("series-exp", "open", _run_series_exp, max_dim=_SERIES_MAX_DIM),
        CheckerDef("series-product", "closed", _run_series_product, max_dim=_SERIES_MAX_DIM),
        CheckerDef(
            "series-product-resolvent", "closed", _run_series_product_resolvent,
            max_dim=_SERIES_MAX_DIM,
        ),
        CheckerDef(
            "series-product-exp", "closed", _run_series_product_exp, max_dim=_SERIES_MAX_DIM
        ),
        CheckerDef("series-sum", "closed", _run_series_sum, max_dim=_SERIES_MAX_DIM),
        CheckerDef("series-dominance", "closed", _run_series_dominance, max_dim=_SERIES_MAX_DIM),
    )


REGISTRY: dict[str, CheckerDef] = {d.cid: d for d in _defs()}
RANK: dict[str, int] = {cid: i for i, cid in enumerate(REGISTRY)}


def checker_alphas(cdef: CheckerDef, grid: AlphaGrid) -> tuple[float, ...]:
    """Exponents the campaign iterates for one checker."""
    if cdef.alpha_mode == "closed":
        return grid.points
    if cdef.alpha_mode == "open":
        return grid.interior if grid.interior else (0.5,)
    return (0.5,)


def run_checker(
    cid: str,
    n: int,
    alpha: float,
    rng: np.random.Generator,
    tol: ToleranceProfile = DEFAULT_TOL,
    grid: AlphaGrid = DEFAULT_GRID,
    explore: bool = False,
) -> list[InequalityCheck]:
    cdef = REGISTRY.get(cid)
    if cdef is None:
        raise UnknownChecker(cid)
    driver = cdef.explore if (explore and cdef.explore is not None) else cdef.run
    return list(driver(n, alpha, rng, tol, grid))


@dataclass(frozen=True)
class SharpnessResult:
    """Largest observed lhs/rhs ratio and the context of its witness."""

    checker_id: str
    best_ratio: float
    witness: str


def ratio_of(check: InequalityCheck) -> float | None:
    """lhs/rhs of one record; None for 0/0 and not-applicable records."""
    if check.status == STATUS_NOT_APPLICABLE:
        return None
    if max(abs(check.lhs), abs(check.rhs)) <= _REL_FLOOR:
        return None
    if check.rhs <= _REL_FLOOR:
        return math.inf
    return check.lhs / check.rhs


def sharpness_search(
    checker_id: str,
    n: int,
    trials: int,
    seed: SeedPlan,
    alpha: float = 0.5,
    tol: ToleranceProfile = DEFAULT_TOL,
    grid: AlphaGrid = DEFAULT_GRID,
) -> SharpnessResult:
    """Maximize lhs/rhs over seeded trials of one checker.

    Trials consume streams seed.stream_index .. seed.stream_index + trials - 1.
    The search uses the checker's explore ensemble when it has one.
    """
    if checker_id not in REGISTRY:
        raise UnknownChecker(checker_id)
    if trials < 1:
        raise ValueError("trials must be >= 1")
    best = -math.inf
    witness = "no ratio-bearing trial"
    for trial in range(trials):
        rng = SeedPlan(seed.master_seed, seed.stream_index + trial).rng()
        checks = run_checker(checker_id, n, alpha, rng, tol, grid, explore=True)
        for check in checks:
            r = ratio_of(check)
            if r is not None and r > best:
                best = r
                witness = (
                    f"seed={seed.master_seed} stream={seed.stream_index + trial} "
                    f"trial={trial} n={n} name={check.name} {check.context}"
                ).strip()
    if best == -math.inf:
        best = 0.0
    return SharpnessResult(checker_id=checker_id, best_ratio=best, witness=witness)
