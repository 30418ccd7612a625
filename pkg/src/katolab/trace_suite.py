"""Trace inequality checkers: trace-Kato bounds, basis bounds, weighted
product-trace bounds, and their normal-operator specializations.

Scalar convention 0^0 := 1 applies wherever an exponent can hit zero, matching
the operator convention that a zeroth modulus power is the identity.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .checks import (
    DEFAULT_TOL,
    InequalityCheck,
    ToleranceProfile,
    make_check,
    not_applicable,
)
from .linalg import (
    as_matrix,
    is_normal,
    modulus_power,
    modulus_power_pair,
    require_normal,
    require_same_dim,
    require_unitary,
    singular_values,
    trace,
)

_GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class AlphaGrid:
    """Strictly increasing exponent grid inside [0, 1]."""

    points: tuple[float, ...] = tuple(np.round(np.linspace(0.0, 1.0, 21), 10))

    def __post_init__(self) -> None:
        pts = self.points
        if not pts:
            raise ValueError("grid must be nonempty")
        if any(not 0.0 <= p <= 1.0 for p in pts):
            raise ValueError("grid points must lie in [0, 1]")
        if any(b <= a for a, b in zip(pts, pts[1:])):
            raise ValueError("grid points must be strictly increasing")

    @property
    def interior(self) -> tuple[float, ...]:
        return tuple(p for p in self.points if 0.0 < p < 1.0)


DEFAULT_GRID = AlphaGrid()


def _pow00(base: np.ndarray, expo: float) -> np.ndarray:
    """Elementwise base**expo with 0^0 := 1 (numpy's own convention)."""
    return np.asarray(base, dtype=np.float64) ** expo


def _modulus_trace_powers(t, p1: float, p2: float) -> tuple[float, float]:
    """(tr |T|^p1, tr |T^H|^p2) straight from singular values."""
    s = singular_values(t)
    return float(np.sum(_pow00(s, p1))), float(np.sum(_pow00(s, p2)))


def _endpoint_note(alpha: float) -> str:
    if alpha in (0.0, 1.0):
        return " endpoint(power-zero=identity)"
    return ""


def check_trace_kato(t, alpha: float, tol: ToleranceProfile = DEFAULT_TOL) -> InequalityCheck:
    """|tr T|^2 <= tr(|T|^(2a)) tr(|T^H|^(2(1-a)))."""
    if not 0.0 <= alpha <= 1.0:
        raise ValueError("alpha must lie in [0, 1]")
    t = as_matrix(t)
    tr1, tr2 = _modulus_trace_powers(t, 2.0 * alpha, 2.0 * (1.0 - alpha))
    lhs = abs(trace(t)) ** 2
    ctx = f"alpha={alpha:.6g}{_endpoint_note(alpha)}"
    return make_check("trace-kato", lhs, tr1 * tr2, context=ctx, tol=tol)


def _basis_column_norms(t, basis) -> tuple[np.ndarray, np.ndarray]:
    tb = t @ basis
    tsb = t.conj().T @ basis
    u = np.sqrt(np.einsum("ij,ij->j", tb.conj(), tb).real)
    v = np.sqrt(np.einsum("ij,ij->j", tsb.conj(), tsb).real)
    return u, v


def check_basis_bound(t, basis, alpha: float, tol: ToleranceProfile = DEFAULT_TOL) -> InequalityCheck:
    """|tr T| <= sum_i ||T b_i||^a ||T^H b_i||^(1-a) over a unitary basis."""
    if not 0.0 <= alpha <= 1.0:
        raise ValueError("alpha must lie in [0, 1]")
    t = as_matrix(t)
    basis = require_unitary(basis, tol)
    require_same_dim(t, basis)
    u, v = _basis_column_norms(t, basis)
    rhs = float(np.sum(_pow00(u, alpha) * _pow00(v, 1.0 - alpha)))
    lhs = abs(trace(t))
    ctx = f"alpha={alpha:.6g}{_endpoint_note(alpha)}"
    return make_check("basis-bound", lhs, rhs, context=ctx, tol=tol)


def check_basis_inf_bound(
    t,
    basis,
    grid: AlphaGrid = DEFAULT_GRID,
    tol: ToleranceProfile = DEFAULT_TOL,
) -> InequalityCheck:
    """Grid infimum of the mixed basis bound against min of the two pure sums.

    lhs is the grid minimum of a -> sum_i ||T b_i||^a ||T^H b_i||^(1-a),
    tightened by a golden-section refinement around the grid minimizer; rhs is
    min(sum ||T b_i||, sum ||T^H b_i||).  |tr T| <= lhs is asserted as well.
    """
    t = as_matrix(t)
    basis = require_unitary(basis, tol)
    require_same_dim(t, basis)
    u, v = _basis_column_norms(t, basis)

    def mixed(alpha: float) -> float:
        return float(np.sum(_pow00(u, alpha) * _pow00(v, 1.0 - alpha)))

    values = [mixed(a) for a in grid.points]
    imin = int(np.argmin(values))
    best = values[imin]
    lo = grid.points[max(imin - 1, 0)]
    hi = grid.points[min(imin + 1, len(grid.points) - 1)]
    if hi > lo:
        x1 = hi - _GOLDEN * (hi - lo)
        x2 = lo + _GOLDEN * (hi - lo)
        f1, f2 = mixed(x1), mixed(x2)
        for _ in range(20):
            if f1 <= f2:
                hi, x2, f2 = x2, x1, f1
                x1 = hi - _GOLDEN * (hi - lo)
                f1 = mixed(x1)
            else:
                lo, x1, f1 = x1, x2, f2
                x2 = lo + _GOLDEN * (hi - lo)
                f2 = mixed(x2)
        best = min(best, f1, f2)

    rhs = float(min(np.sum(u), np.sum(v)))
    abs_tr = abs(trace(t))
    margin = tol.slack_rel * max(best, 1.0)
    if abs_tr > best + margin:
        raise AssertionError(
            f"|tr T| = {abs_tr!r} exceeds the mixed-bound infimum {best!r}"
        )
    return make_check("basis-inf", best, rhs, context=f"grid={len(grid.points)}", tol=tol)


def check_sqrt_basis_bound(t, basis, tol: ToleranceProfile = DEFAULT_TOL) -> InequalityCheck:
    """|tr T| <= sum_i sqrt(||T b_i|| ||T^H b_i||), the a = 1/2 basis bound."""
    t = as_matrix(t)
    basis = require_unitary(basis, tol)
    require_same_dim(t, basis)
    u, v = _basis_column_norms(t, basis)
    rhs = float(np.sum(np.sqrt(u * v)))
    return make_check("sqrt-basis-bound", abs(trace(t)), rhs, tol=tol)


def check_normal_trace(
    n_mat, alpha: float, tol: ToleranceProfile = DEFAULT_TOL
) -> tuple[InequalityCheck, InequalityCheck]:
    """For normal N: |tr N|^2 <= tr(|N|^(2a)) tr(|N|^(2(1-a))) and |tr N| <= tr |N|."""
    if not 0.0 <= alpha <= 1.0:
        raise ValueError("alpha must lie in [0, 1]")
    n_mat = require_normal(n_mat, tol)
    s = singular_values(n_mat)
    tr_a = float(np.sum(_pow00(s, 2.0 * alpha)))
    tr_b = float(np.sum(_pow00(s, 2.0 * (1.0 - alpha))))
    abs_tr = abs(trace(n_mat))
    ctx = f"alpha={alpha:.6g}{_endpoint_note(alpha)}"
    sq = make_check("normal-trace-sq", abs_tr**2, tr_a * tr_b, context=ctx, tol=tol)
    ab = make_check("normal-trace-abs", abs_tr, float(np.sum(s)), tol=tol)
    return sq, ab


def _re_trace(m) -> float:
    return float(np.trace(m).real)


def check_product_trace(
    t, a, b, alpha: float, tol: ToleranceProfile = DEFAULT_TOL
) -> tuple[InequalityCheck, InequalityCheck]:
    """|tr(A B^H T)|^2 against the weighted modulus-power split and the min form.

    First check: rhs = tr(AA^H |T|^(2a)) tr(BB^H |T^H|^(2(1-a))).
    Second check: rhs = min(tr(B^H B) tr(AA^H T^H T), tr(A^H A) tr(BB^H T T^H)).
    """
    if not 0.0 <= alpha <= 1.0:
        raise ValueError("alpha must lie in [0, 1]")
    t, a, b = as_matrix(t), as_matrix(a), as_matrix(b)
    require_same_dim(t, a, b)
    gram_a = a @ a.conj().T  # |A^H|^2
    gram_b = b @ b.conj().T  # |B^H|^2
    left, right = modulus_power_pair(t, 2.0 * alpha, 2.0 * (1.0 - alpha))
    lhs = abs(trace(a @ b.conj().T @ t)) ** 2
    rhs1 = max(_re_trace(gram_a @ left), 0.0) * max(_re_trace(gram_b @ right), 0.0)
    ctx = f"alpha={alpha:.6g}{_endpoint_note(alpha)}"
    first = make_check("product-trace", lhs, rhs1, context=ctx, tol=tol)
    tt = t.conj().T @ t  # |T|^2, exact algebra
    tts = t @ t.conj().T  # |T^H|^2
    rhs2 = min(
        max(_re_trace(b.conj().T @ b), 0.0) * max(_re_trace(gram_a @ tt), 0.0),
        max(_re_trace(a.conj().T @ a), 0.0) * max(_re_trace(gram_b @ tts), 0.0),
    )
    second = make_check("product-trace-min", lhs, rhs2, tol=tol)
    return first, second


def check_product_trace_half(t, a, b, tol: ToleranceProfile = DEFAULT_TOL) -> InequalityCheck:
    """|tr(A B^H T)|^2 <= tr(AA^H |T|) tr(BB^H |T^H|), the a = 1/2 split."""
    t, a, b = as_matrix(t), as_matrix(a), as_matrix(b)
    require_same_dim(t, a, b)
    left, right = modulus_power_pair(t, 1.0, 1.0)
    lhs = abs(trace(a @ b.conj().T @ t)) ** 2
    rhs = max(_re_trace(a @ a.conj().T @ left), 0.0) * max(
        _re_trace(b @ b.conj().T @ right), 0.0
    )
    return make_check("product-trace-half", lhs, rhs, tol=tol)


def check_normal_product(
    n_mat, a, b, alpha: float, tol: ToleranceProfile = DEFAULT_TOL
) -> tuple[InequalityCheck, InequalityCheck, InequalityCheck]:
    """Product-trace bounds specialized to a normal middle factor N."""
    if not 0.0 <= alpha <= 1.0:
        raise ValueError("alpha must lie in [0, 1]")
    n_mat = require_normal(n_mat, tol)
    a, b = as_matrix(a), as_matrix(b)
    require_same_dim(n_mat, a, b)
    gram_a = a @ a.conj().T
    gram_b = b @ b.conj().T
    mod_a = modulus_power(n_mat, 2.0 * alpha)
    mod_b = modulus_power(n_mat, 2.0 * (1.0 - alpha))
    mod_1 = modulus_power(n_mat, 1.0)
    mod_2 = n_mat.conj().T @ n_mat
    lhs = abs(trace(a @ b.conj().T @ n_mat)) ** 2
    ctx = f"alpha={alpha:.6g}{_endpoint_note(alpha)}"
    first = make_check(
        "normal-product",
        lhs,
        max(_re_trace(gram_a @ mod_a), 0.0) * max(_re_trace(gram_b @ mod_b), 0.0),
        context=ctx,
        tol=tol,
    )
    second = make_check(
        "normal-product-half",
        lhs,
        max(_re_trace(gram_a @ mod_1), 0.0) * max(_re_trace(gram_b @ mod_1), 0.0),
        tol=tol,
    )
    third = make_check(
        "normal-product-min",
        lhs,
        min(
            max(_re_trace(b.conj().T @ b), 0.0) * max(_re_trace(gram_a @ mod_2), 0.0),
            max(_re_trace(a.conj().T @ a), 0.0) * max(_re_trace(gram_b @ mod_2), 0.0),
        ),
        tol=tol,
    )
    return first, second, third


def check_weighted_trace_bounds(
    t, b, alpha: float, tol: ToleranceProfile = DEFAULT_TOL
) -> tuple[InequalityCheck, InequalityCheck, InequalityCheck, InequalityCheck]:
    """Gram- and square-weighted trace bounds, plus their normal-T variants.

    Returns checks for |tr(B^H B T)|^2, |tr(B^2 T)|^2 against modulus-power
    splits; the last two use |T| powers on both factors and are reported as
    not-applicable when T is not normal.
    """
    if not 0.0 <= alpha <= 1.0:
        raise ValueError("alpha must lie in [0, 1]")
    t, b = as_matrix(t), as_matrix(b)
    require_same_dim(t, b)
    gram = b.conj().T @ b  # |B|^2
    gram_adj = b @ b.conj().T  # |B^H|^2
    left, right = modulus_power_pair(t, 2.0 * alpha, 2.0 * (1.0 - alpha))
    ctx = f"alpha={alpha:.6g}{_endpoint_note(alpha)}"
    lhs_gram = abs(trace(gram @ t)) ** 2
    lhs_sq = abs(trace(b @ b @ t)) ** 2
    first = make_check(
        "gram-weight",
        lhs_gram,
        max(_re_trace(gram @ left), 0.0) * max(_re_trace(gram @ right), 0.0),
        context=ctx,
        tol=tol,
    )
    second = make_check(
        "square-weight",
        lhs_sq,
        max(_re_trace(gram_adj @ left), 0.0) * max(_re_trace(gram @ right), 0.0),
        context=ctx,
        tol=tol,
    )
    if is_normal(t, tol):
        mod_a = modulus_power(t, 2.0 * alpha)
        mod_b = modulus_power(t, 2.0 * (1.0 - alpha))
        third = make_check(
            "gram-weight-normal",
            lhs_gram,
            max(_re_trace(gram @ mod_a), 0.0) * max(_re_trace(gram @ mod_b), 0.0),
            context=ctx,
            tol=tol,
        )
        fourth = make_check(
            "square-weight-normal",
            lhs_sq,
            max(_re_trace(gram_adj @ mod_a), 0.0) * max(_re_trace(gram @ mod_b), 0.0),
            context=ctx,
            tol=tol,
        )
    else:
        third = not_applicable("gram-weight-normal", "T not normal")
        fourth = not_applicable("square-weight-normal", "T not normal")
    return first, second, third, fourth
