"""Vector-level Schwarz/Kato inequality checkers and the McCarthy bound.

Every checker evaluates both sides of its inequality on concrete inputs and
returns an :class:`~katolab.checks.InequalityCheck` record.
"""

from __future__ import annotations

import numpy as np

from .checks import DEFAULT_TOL, InequalityCheck, ToleranceProfile, make_check
from .errors import ZeroVector
from .linalg import (
    as_matrix,
    as_vector,
    frac_power,
    inner,
    modulus_power_pair,
    require_psd,
    singular_values,
)


def _quad_form(m, x) -> float:
    """Real part of <Mx, x>; clamps the tiny negative rounding of a psd form."""
    val = inner(m @ x, x).real
    return max(val, 0.0)


def _require_alpha(alpha: float) -> float:
    if not 0.0 <= alpha <= 1.0:
        raise ValueError("alpha must lie in [0, 1]")
    return float(alpha)


def check_schwarz_positive(p, x, y, tol: ToleranceProfile = DEFAULT_TOL) -> InequalityCheck:
    """|<Px, y>|^2 <= <Px, x><Py, y> for psd P."""
    p = require_psd(p, tol, "P")
    x = as_vector(x, p.shape[0])
    y = as_vector(y, p.shape[0])
    lhs = abs(inner(p @ x, y)) ** 2
    rhs = _quad_form(p, x) * _quad_form(p, y)
    return make_check("schwarz-positive", lhs, rhs, tol=tol)


def check_positive_norm(p, x, tol: ToleranceProfile = DEFAULT_TOL) -> InequalityCheck:
    """||Px||^2 <= ||P|| <Px, x> for psd P."""
    p = require_psd(p, tol, "P")
    x = as_vector(x, p.shape[0])
    px = p @ x
    lhs = float(np.vdot(px, px).real)
    rhs = float(singular_values(p)[0]) * _quad_form(p, x)
    return make_check("positive-norm", lhs, rhs, tol=tol)


def check_kato(t, x, y, alpha: float, tol: ToleranceProfile = DEFAULT_TOL) -> InequalityCheck:
    """|<Tx, y>|^2 <= <|T|^(2a) x, x> <|T^H|^(2(1-a)) y, y>, a in [0, 1]."""
    alpha = _require_alpha(alpha)
    t = as_matrix(t)
    x = as_vector(x, t.shape[0])
    y = as_vector(y, t.shape[0])
    left, right = modulus_power_pair(t, 2.0 * alpha, 2.0 * (1.0 - alpha))
    lhs = abs(inner(t @ x, y)) ** 2
    rhs = _quad_form(left, x) * _quad_form(right, y)
    return make_check("kato", lhs, rhs, context=f"alpha={alpha:.6g}", tol=tol)


def check_kato_norm(t, x, alpha: float, tol: ToleranceProfile = DEFAULT_TOL) -> InequalityCheck:
    """||Tx||^2 <= ||T||^(2(1-a)) <|T|^(2a) x, x>."""
    alpha = _require_alpha(alpha)
    t = as_matrix(t)
    x = as_vector(x, t.shape[0])
    sd = singular_values(t)
    left, _ = modulus_power_pair(t, 2.0 * alpha, 0.0)
    tx = t @ x
    lhs = float(np.vdot(tx, tx).real)
    rhs = float(sd[0]) ** (2.0 * (1.0 - alpha)) * _quad_form(left, x)
    return make_check("kato-norm", lhs, rhs, context=f"alpha={alpha:.6g}", tol=tol)


def check_mccarthy(p, y, beta: float, tol: ToleranceProfile = DEFAULT_TOL) -> InequalityCheck:
    """<P^b y, y> <= ||y||^(2(1-b)) <Py, y>^b for psd P and b in (0, 1)."""
    if not 0.0 < beta < 1.0:
        raise ValueError("beta must lie in the open interval (0, 1)")
    p = require_psd(p, tol, "P")
    y = as_vector(y, p.shape[0])
    norm_y2 = float(np.vdot(y, y).real)
    if norm_y2 == 0.0:
        raise ZeroVector("probe vector must be nonzero")
    lhs = _quad_form(frac_power(p, beta, tol), y)
    rhs = norm_y2 ** (1.0 - beta) * _quad_form(p, y) ** beta
    return make_check("mccarthy", lhs, rhs, context=f"beta={beta:.6g}", tol=tol)
