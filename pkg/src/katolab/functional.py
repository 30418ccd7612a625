"""The trace functional sigma(P) = sqrt(tr(P A |T|^(2a) A^H)) *
sqrt(tr(P A |T^H|^(2(1-a)) A^H)) - |tr(P A T A^H)| on the psd cone, its order
properties, and the n-tuple extension.

sigma-style comparisons can have both sides near zero, so their checks divide
slack by the natural bracket scale rather than the raw right-hand side.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .checks import (
    DEFAULT_TOL,
    InequalityCheck,
    ToleranceProfile,
    make_check,
    not_applicable,
)
from .errors import NegativeTrace, NotApplicable, NotOrdered, Singular
from .linalg import (
    Matrix,
    as_matrix,
    eigmin_hermitian,
    hs_norm,
    modulus_power_pair,
    require_psd,
    require_same_dim,
    singular_values,
)

_TINY = 1e-300
_NEG_TRACE_REL = 1e-8


@dataclass(frozen=True)
class FunctionalInput:
    """Arguments of the functional: factor A, middle operator T, exponent alpha, psd weight P."""

    A: Matrix
    T: Matrix
    alpha: float
    P: Matrix

    def __post_init__(self) -> None:
        object.__setattr__(self, "A", as_matrix(self.A))
        object.__setattr__(self, "T", as_matrix(self.T))
        object.__setattr__(self, "P", as_matrix(self.P))
        require_same_dim(self.A, self.T, self.P)
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError("alpha must lie in [0, 1]")


def _guarded_trace(product: Matrix, scale: float) -> float:
    """Real trace of a product of psd factors; clamps rounding, flags real negativity."""
    val = float(np.trace(product).real)
    floor = _NEG_TRACE_REL * max(scale, _TINY)
    if val < -floor:
        raise NegativeTrace(f"trace {val!r} below -{floor!r}; decomposition suspect")
    return max(val, 0.0)


def _sigma_parts(a: Matrix, t: Matrix, alpha: float, p: Matrix):
    """(sigma value, bracket scale) for one psd weight."""
    left, right = modulus_power_pair(t, 2.0 * alpha, 2.0 * (1.0 - alpha))
    return _sigma_from_powers(a, t, p, left, right)


def _sigma_from_powers(a, t, p, left, right):
    ah = a.conj().T
    pa = p @ a
    scale = hs_norm(p) * hs_norm(a) ** 2 * max(hs_norm(left), hs_norm(right), 1.0)
    t1 = _guarded_trace(pa @ left @ ah, scale)
    t2 = _guarded_trace(pa @ right @ ah, scale)
    t3 = abs(complex(np.trace(pa @ t @ ah)))
    bracket = np.sqrt(t1) * np.sqrt(t2)
    return bracket - t3, bracket + t3


def sigma(fin: FunctionalInput, tol: ToleranceProfile = DEFAULT_TOL) -> float:
    require_psd(fin.P, tol, "P")
    value, _ = _sigma_parts(fin.A, fin.T, fin.alpha, fin.P)
    return value


def sigma_with_scale(fin: FunctionalInput, tol: ToleranceProfile = DEFAULT_TOL) -> tuple[float, float]:
    """(sigma value, natural bracket scale) for slack normalization."""
    require_psd(fin.P, tol, "P")
    return _sigma_parts(fin.A, fin.T, fin.alpha, fin.P)


def check_superadditive(a, t, alpha, p, q, tol: ToleranceProfile = DEFAULT_TOL) -> InequalityCheck:
    """sigma(P) + sigma(Q) <= sigma(P + Q) on psd weights."""
    a, t = as_matrix(a), as_matrix(t)
    p = require_psd(p, tol, "P")
    q = require_psd(q, tol, "Q")
    require_same_dim(a, t, p, q)
    left, right = modulus_power_pair(t, 2.0 * alpha, 2.0 * (1.0 - alpha))
    sp, sc_p = _sigma_from_powers(a, t, p, left, right)
    sq, sc_q = _sigma_from_powers(a, t, q, left, right)
    spq, sc_pq = _sigma_from_powers(a, t, p + q, left, right)
    scale = max(sc_p, sc_q, sc_pq)
    return make_check(
        "sigma-superadd", sp + sq, spq, context=f"alpha={alpha:.6g}", tol=tol, scale=scale
    )


def _require_ordered(p, q, tol: ToleranceProfile, who: str) -> None:
    gap = eigmin_hermitian(p - q)
    scale = max(hs_norm(p), hs_norm(q), _TINY)
    if gap < -tol.decomposition * scale:
        raise NotOrdered(f"{who}: smallest eigenvalue of the difference is {gap!r}")


def check_monotone(a, t, alpha, p, q, tol: ToleranceProfile = DEFAULT_TOL) -> InequalityCheck:
    """sigma(Q) <= sigma(P) whenever P - Q is psd."""
    a, t = as_matrix(a), as_matrix(t)
    p = require_psd(p, tol, "P")
    q = require_psd(q, tol, "Q")
    require_same_dim(a, t, p, q)
    _require_ordered(p, q, tol, "P - Q")
    left, right = modulus_power_pair(t, 2.0 * alpha, 2.0 * (1.0 - alpha))
    sp, sc_p = _sigma_from_powers(a, t, p, left, right)
    sq, sc_q = _sigma_from_powers(a, t, q, left, right)
    return make_check(
        "sigma-monotone", sq, sp, context=f"alpha={alpha:.6g}", tol=tol, scale=max(sc_p, sc_q)
    )


def check_sandwich(
    a, t, alpha, p, q, m: float, big_m: float, tol: ToleranceProfile = DEFAULT_TOL
) -> tuple[InequalityCheck, InequalityCheck]:
    """M sigma(Q) >= sigma(P) >= m sigma(Q) when M Q >= P >= m Q with M >= m > 0."""
    if not big_m >= m > 0.0:
        raise ValueError("need M >= m > 0")
    a, t = as_matrix(a), as_matrix(t)
    p = require_psd(p, tol, "P")
    q = require_psd(q, tol, "Q")
    require_same_dim(a, t, p, q)
    _require_ordered(big_m * q, p, tol, "MQ - P")
    _require_ordered(p, m * q, tol, "P - mQ")
    left, right = modulus_power_pair(t, 2.0 * alpha, 2.0 * (1.0 - alpha))
    sp, sc_p = _sigma_from_powers(a, t, p, left, right)
    sq, sc_q = _sigma_from_powers(a, t, q, left, right)
    scale = max(sc_p, big_m * sc_q)
    ctx = f"alpha={alpha:.6g} m={m:.6g} M={big_m:.6g}"
    hi = make_check("sigma-sandwich-hi", sp, big_m * sq, context=ctx, tol=tol, scale=scale)
    lo = make_check("sigma-sandwich-lo", m * sq, sp, context=ctx, tol=tol, scale=scale)
    return hi, lo


def _gram_bracket(t, weight_factor, left, right):
    """sigma evaluated at the gram weight |W|^2 = W^H W of the stacked factor W."""
    gram = weight_factor.conj().T @ weight_factor
    scale = hs_norm(gram) * max(hs_norm(left), hs_norm(right), 1.0)
    t1 = _guarded_trace(gram @ left, scale)
    t2 = _guarded_trace(gram @ right, scale)
    t3 = abs(complex(np.trace(gram @ t)))
    bracket = np.sqrt(t1) * np.sqrt(t2)
    return bracket - t3, bracket + t3


def check_gram_forms(
    a, t, alpha, v, u, tol: ToleranceProfile = DEFAULT_TOL
) -> tuple[InequalityCheck, InequalityCheck]:
    """Superadditivity and monotonicity of sigma at gram weights |V|^2, |U|^2.

    The monotone half needs |V|^2 - |U|^2 psd and reports not-applicable
    otherwise.
    """
    a, t, v, u = as_matrix(a), as_matrix(t), as_matrix(v), as_matrix(u)
    require_same_dim(a, t, v, u)
    left, right = modulus_power_pair(t, 2.0 * alpha, 2.0 * (1.0 - alpha))
    va, ua = v @ a, u @ a
    s_v, sc_v = _gram_bracket(t, va, left, right)
    s_u, sc_u = _gram_bracket(t, ua, left, right)
    # Combined weight |VA|^2 + |UA|^2 handled through the stacked factor.
    stacked = np.vstack([va, ua])
    s_vu, sc_vu = _gram_bracket(t, stacked, left, right)
    ctx = f"alpha={alpha:.6g}"
    scale = max(sc_v, sc_u, sc_vu)
    superadd = make_check("gram-superadd", s_v + s_u, s_vu, context=ctx, tol=tol, scale=scale)
    gap = eigmin_hermitian(v.conj().T @ v - u.conj().T @ u)
    if gap < -tol.decomposition * max(hs_norm(v) ** 2, hs_norm(u) ** 2, _TINY):
        mono = not_applicable("gram-monotone", "gram ordering fails")
    else:
        mono = make_check("gram-monotone", s_u, s_v, context=ctx, tol=tol, scale=max(sc_v, sc_u))
    return superadd, mono


def check_invertible_sandwich(
    a, t, alpha, u, tol: ToleranceProfile = DEFAULT_TOL
) -> tuple[InequalityCheck, InequalityCheck]:
    """||U||^2 * base >= sigma at |UA|^2 >= base / ||U^-1||^2 for invertible U,
    where base is sigma at the gram weight |A|^2."""
    a, t, u = as_matrix(a), as_matrix(t), as_matrix(u)
    require_same_dim(a, t, u)
    s = singular_values(u)
    if s[-1] <= 1e-8 * s[0]:
        raise Singular("smallest singular value too small relative to the largest")
    left, right = modulus_power_pair(t, 2.0 * alpha, 2.0 * (1.0 - alpha))
    base, sc_base = _gram_bracket(t, a, left, right)
    mid, sc_mid = _gram_bracket(t, u @ a, left, right)
    hi_bound = float(s[0]) ** 2
    lo_bound = float(s[-1]) ** 2
    scale = max(sc_mid, hi_bound * sc_base)
    ctx = f"alpha={alpha:.6g} cond={float(s[0]/s[-1]):.6g}"
    hi = make_check("invertible-hi", mid, hi_bound * base, context=ctx, tol=tol, scale=scale)
    lo = make_check("invertible-lo", lo_bound * base, mid, context=ctx, tol=tol, scale=scale)
    return hi, lo


@dataclass(frozen=True)
class OperatorTuple:
    """Componentwise data for the n-tuple functional.

    t_ops are arbitrary operators, a_ops their factors, p_ops psd weights,
    z_weights complex scalars, p_weights nonnegative reals.  Missing weight
    lists default to identities/ones.
    """

    t_ops: tuple[Matrix, ...]
    a_ops: tuple[Matrix, ...]
    p_ops: tuple[Matrix, ...] = ()
    z_weights: tuple[complex, ...] = ()
    p_weights: tuple[float, ...] = ()

    def __post_init__(self) -> None:
        t_ops = tuple(as_matrix(m) for m in self.t_ops)
        a_ops = tuple(as_matrix(m) for m in self.a_ops)
        if not t_ops:
            raise ValueError("tuple length must be >= 1")
        if len(a_ops) != len(t_ops):
            raise ValueError("t_ops and a_ops must have equal length")
        dim = require_same_dim(*t_ops, *a_ops)
        p_ops = tuple(as_matrix(m) for m in self.p_ops) or tuple(
            np.eye(dim, dtype=np.complex128) for _ in t_ops
        )
        if len(p_ops) != len(t_ops):
            raise ValueError("p_ops length mismatch")
        require_same_dim(*t_ops, *p_ops)
        z = tuple(complex(w) for w in self.z_weights) or (1.0 + 0.0j,) * len(t_ops)
        p = tuple(float(w) for w in self.p_weights) or (1.0,) * len(t_ops)
        if len(z) != len(t_ops) or len(p) != len(t_ops):
            raise ValueError("weight list length mismatch")
        if any(w < 0.0 for w in p):
            raise ValueError("p_weights must be nonnegative")
        object.__setattr__(self, "t_ops", t_ops)
        object.__setattr__(self, "a_ops", a_ops)
        object.__setattr__(self, "p_ops", p_ops)
        object.__setattr__(self, "z_weights", z)
        object.__setattr__(self, "p_weights", p)

    @property
    def length(self) -> int:
        return len(self.t_ops)

    @property
    def dim(self) -> int:
        return self.t_ops[0].shape[0]


def _tuple_terms(tup: OperatorTuple, alpha: float):
    """Per-component (P A |T|^(2a) A^H, P A |T^H|^(2(1-a)) A^H, P A T A^H)."""
    for t, a, p in zip(tup.t_ops, tup.a_ops, tup.p_ops):
        left, right = modulus_power_pair(t, 2.0 * alpha, 2.0 * (1.0 - alpha))
        pa = p @ a
        ah = a.conj().T
        yield pa @ left @ ah, pa @ right @ ah, pa @ t @ ah


def tuple_check(tup: OperatorTuple, alpha: float, tol: ToleranceProfile = DEFAULT_TOL) -> InequalityCheck:
    """|tr sum_k z_k P_k A_k T_k A_k^H|^2 against the |z|-weighted split."""
    for k, p in enumerate(tup.p_ops):
        require_psd(p, tol, f"P[{k}]")
    dim = tup.dim
    acc_mid = np.zeros((dim, dim), dtype=np.complex128)
    acc_left = np.zeros((dim, dim), dtype=np.complex128)
    acc_right = np.zeros((dim, dim), dtype=np.complex128)
    for z, (term_l, term_r, term_t) in zip(tup.z_weights, _tuple_terms(tup, alpha)):
        acc_mid += z * term_t
        acc_left += abs(z) * term_l
        acc_right += abs(z) * term_r
    scale = max(hs_norm(acc_left), hs_norm(acc_right), 1.0)
    lhs = abs(complex(np.trace(acc_mid))) ** 2
    rhs = _guarded_trace(acc_left, scale) * _guarded_trace(acc_right, scale)
    return make_check(
        "tuple-trace", lhs, rhs, context=f"k={tup.length} alpha={alpha:.6g}", tol=tol
    )


def _tuple_sigma_parts(tup: OperatorTuple, alpha: float, tol: ToleranceProfile):
    for k, p in enumerate(tup.p_ops):
        require_psd(p, tol, f"P[{k}]")
    dim = tup.dim
    acc_left = np.zeros((dim, dim), dtype=np.complex128)
    acc_right = np.zeros((dim, dim), dtype=np.complex128)
    acc_mid = np.zeros((dim, dim), dtype=np.complex128)
    for term_l, term_r, term_t in _tuple_terms(tup, alpha):
        acc_left += term_l
        acc_right += term_r
        acc_mid += term_t
    scale = max(hs_norm(acc_left), hs_norm(acc_right), 1.0)
    t1 = _guarded_trace(acc_left, scale)
    t2 = _guarded_trace(acc_right, scale)
    t3 = abs(complex(np.trace(acc_mid)))
    bracket = np.sqrt(t1) * np.sqrt(t2)
    return bracket - t3, bracket + t3


def tuple_sigma(tup: OperatorTuple, alpha: float, tol: ToleranceProfile = DEFAULT_TOL) -> float:
    value, _ = _tuple_sigma_parts(tup, alpha, tol)
    return value


def _with_weights(tup: OperatorTuple, p_ops) -> OperatorTuple:
    return replace(tup, p_ops=tuple(p_ops))


def check_tuple_superadditive(
    tup: OperatorTuple, q_ops, alpha: float, tol: ToleranceProfile = DEFAULT_TOL
) -> InequalityCheck:
    """Componentwise superadditivity of the tuple functional in the psd weights."""
    q_ops = tuple(as_matrix(m) for m in q_ops)
    sp, sc_p = _tuple_sigma_parts(tup, alpha, tol)
    sq, sc_q = _tuple_sigma_parts(_with_weights(tup, q_ops), alpha, tol)
    both = tuple(p + q for p, q in zip(tup.p_ops, q_ops))
    spq, sc_pq = _tuple_sigma_parts(_with_weights(tup, both), alpha, tol)
    return make_check(
        "tuple-superadd",
        sp + sq,
        spq,
        context=f"k={tup.length} alpha={alpha:.6g}",
        tol=tol,
        scale=max(sc_p, sc_q, sc_pq),
    )


def check_tuple_monotone(
    tup: OperatorTuple, q_ops, alpha: float, tol: ToleranceProfile = DEFAULT_TOL
) -> InequalityCheck:
    """Tuple functional is nondecreasing under componentwise psd ordering."""
    q_ops = tuple(as_matrix(m) for m in q_ops)
    for k, (p, q) in enumerate(zip(tup.p_ops, q_ops)):
        _require_ordered(p, q, tol, f"P[{k}] - Q[{k}]")
    sp, sc_p = _tuple_sigma_parts(tup, alpha, tol)
    sq, sc_q = _tuple_sigma_parts(_with_weights(tup, q_ops), alpha, tol)
    return make_check(
        "tuple-monotone",
        sq,
        sp,
        context=f"k={tup.length} alpha={alpha:.6g}",
        tol=tol,
        scale=max(sc_p, sc_q),
    )


def check_tuple_sandwich(
    tup: OperatorTuple,
    q_ops,
    m: float,
    big_m: float,
    alpha: float,
    tol: ToleranceProfile = DEFAULT_TOL,
) -> tuple[InequalityCheck, InequalityCheck]:
    """Componentwise sandwich M Q_k >= P_k >= m Q_k controls the tuple functional."""
    if not big_m >= m > 0.0:
        raise ValueError("need M >= m > 0")
    q_ops = tuple(as_matrix(mq) for mq in q_ops)
    for k, (p, q) in enumerate(zip(tup.p_ops, q_ops)):
        _require_ordered(big_m * q, p, tol, f"MQ[{k}] - P[{k}]")
        _require_ordered(p, m * q, tol, f"P[{k}] - mQ[{k}]")
    sp, sc_p = _tuple_sigma_parts(tup, alpha, tol)
    sq, sc_q = _tuple_sigma_parts(_with_weights(tup, q_ops), alpha, tol)
    scale = max(sc_p, big_m * sc_q)
    ctx = f"k={tup.length} alpha={alpha:.6g} m={m:.6g} M={big_m:.6g}"
    hi = make_check("tuple-sandwich-hi", sp, big_m * sq, context=ctx, tol=tol, scale=scale)
    lo = make_check("tuple-sandwich-lo", m * sq, sp, context=ctx, tol=tol, scale=scale)
    return hi, lo


def _weighted_sigma(tup: OperatorTuple, alpha: float, weights) -> tuple[float, float]:
    """sigma of the scalar-weighted gram form sum_k w_k |A_k|^2 (.) with traces."""
    dim = tup.dim
    acc_left = np.zeros((dim, dim), dtype=np.complex128)
    acc_right = np.zeros((dim, dim), dtype=np.complex128)
    acc_mid = np.zeros((dim, dim), dtype=np.complex128)
    for w, t, a in zip(weights, tup.t_ops, tup.a_ops):
        gram = a.conj().T @ a
        left, right = modulus_power_pair(t, 2.0 * alpha, 2.0 * (1.0 - alpha))
        acc_left += w * gram @ left
        acc_right += w * gram @ right
        acc_mid += w * gram @ t
    scale = max(hs_norm(acc_left), hs_norm(acc_right), 1.0)
    t1 = _guarded_trace(acc_left, scale)
    t2 = _guarded_trace(acc_right, scale)
    t3 = abs(complex(np.trace(acc_mid)))
    bracket = np.sqrt(t1) * np.sqrt(t2)
    return bracket - t3, bracket + t3


def weight_bounds(
    tup: OperatorTuple, alpha: float, tol: ToleranceProfile = DEFAULT_TOL
) -> tuple[InequalityCheck, InequalityCheck]:
    """max_k p_k * sigma(unit weights) >= sigma(p) >= min_k p_k * sigma(unit weights)
    for the scalar-weighted gram functional with nonnegative weights p."""
    weights = tup.p_weights
    if all(w == 0.0 for w in weights):
        raise NotApplicable("all scalar weights vanish")
    w_max, w_min = max(weights), min(weights)
    s_p, sc_p = _weighted_sigma(tup, alpha, weights)
    s_1, sc_1 = _weighted_sigma(tup, alpha, (1.0,) * tup.length)
    scale = max(sc_p, w_max * sc_1)
    ctx = f"k={tup.length} alpha={alpha:.6g}"
    hi = make_check("weight-hi", s_p, w_max * s_1, context=ctx, tol=tol, scale=scale)
    lo = make_check("weight-lo", w_min * s_1, s_p, context=ctx, tol=tol, scale=scale)
    return hi, lo
