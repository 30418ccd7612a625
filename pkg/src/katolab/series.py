"""Power series of operators: coefficient streams with radius bookkeeping, the
absolute-coefficient companion series, scalar/spectral/truncated evaluation,
a catalog of standard series, and trace-inequality checkers built on them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .checks import (
    DEFAULT_TOL,
    InequalityCheck,
    ToleranceProfile,
    make_check,
    not_applicable,
)
from .errors import NoConvergence, NotDoubleCommuting, OutOfDisk, PreconditionFailed
from .linalg import (
    Matrix,
    as_matrix,
    hermitian_eig,
    hermitize,
    hs_norm,
    is_hermitian,
    modulus_power,
    normal_eig,
    require_normal,
    require_same_dim,
    singular_values,
)

_TINY = 1e-300
_MAX_TERMS = 10**6
_SAFETY = 0.95  # fraction of the convergence radius the spectrum may occupy


@dataclass
class PowerSeries:
    """A coefficient stream sum_n coeff(n) z^n with a convergence radius.

    start_index is 0 or 1 (the first index that may carry a nonzero
    coefficient); closed_form, when present, is a scalar reference
    implementation used for psd spectral evaluation and cross-checks;
    abs_closed_form plays the same role for the absolute-coefficient series.
    Coefficients are memoized per instance and safe for concurrent reads once
    constructed.
    """

    name: str
    start_index: int
    coeff_fn: Callable[[int], complex]
    radius: float
    closed_form: Callable | None = None
    abs_closed_form: Callable | None = None
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.start_index not in (0, 1):
            raise ValueError("start_index must be 0 or 1")
        if not self.radius > 0:
            raise ValueError("radius must be positive")

    def coeff(self, n: int) -> complex:
        if n < self.start_index:
            return 0j
        val = self._cache.get(n)
        if val is None:
            val = complex(self.coeff_fn(n))
            if not (math.isfinite(val.real) and math.isfinite(val.imag)):
                raise ValueError(f"coefficient {n} of {self.name} is not finite")
            self._cache[n] = val
        return val

    def absolute(self) -> "PowerSeries":
        """Companion series with coefficients |coeff(n)| and the same radius."""
        return PowerSeries(
            name=f"{self.name}-abs",
            start_index=self.start_index,
            coeff_fn=lambda n: abs(self.coeff(n)),
            radius=self.radius,
            closed_form=self.abs_closed_form,
            abs_closed_form=self.abs_closed_form,
        )


def _scalar_sum(series: PowerSeries, z: complex, tail_tol: float) -> tuple[complex, int]:
    z = complex(z)
    az = abs(z)
    if math.isfinite(series.radius):
        if az > _SAFETY * series.radius:
            raise OutOfDisk(f"|z| = {az!r} exceeds {_SAFETY} * radius of {series.name}")
        geo = 1.0 / (1.0 - az / series.radius)
        n_stop = series.start_index + 1
    else:
        # Entire catalog entries have |c(n+1)/c(n)| <= 1/(n+1); past n >= 2|z|
        # the terms decay at least geometrically with ratio 1/2.
        geo = 2.0
        n_stop = max(series.start_index + 1, int(2.0 * az) + 1)
    acc = 0j
    zpow = z**series.start_index
    prev = math.inf
    n = series.start_index
    while n <= _MAX_TERMS:
        term = series.coeff(n) * zpow
        acc += term
        t_abs = abs(term)
        if n >= n_stop and max(t_abs, prev) * geo < tail_tol:
            return acc, n - series.start_index + 1
        prev = t_abs
        zpow *= z
        n += 1
    raise NoConvergence(f"{series.name} did not meet the tail bound in {_MAX_TERMS} terms")


def eval_scalar(series: PowerSeries, z: complex, tail_tol: float = 1e-12) -> complex:
    """Partial sums until the geometric tail estimate drops below tail_tol."""
    value, _ = _scalar_sum(series, z, tail_tol)
    return value


def terms_for_tail(series: PowerSeries, r: float, tail_tol: float = 1e-12) -> int:
    """Number of terms the scalar evaluation needs at |z| = r."""
    _, n_terms = _scalar_sum(series, complex(r), tail_tol)
    return n_terms


def eval_matrix_spectral(
    series: PowerSeries,
    m: Matrix,
    tol: ToleranceProfile = DEFAULT_TOL,
    tail_tol: float = 1e-12,
) -> Matrix:
    """Apply the series to a normal matrix through its unitary diagonalization.

    Hermitian psd arguments use the closed form on the (clamped) eigenvalues
    when one is available; all other spectra go through scalar partial sums.
    """
    m = as_matrix(m)
    if is_hermitian(m, tol):
        sd = hermitian_eig(m, tol)
        w = sd.values
        _require_in_disk(series, float(np.max(np.abs(w), initial=0.0)))
        psd = w.min(initial=0.0) >= -tol.decomposition * max(hs_norm(m), _TINY)
        if psd:
            w = np.maximum(w, 0.0)
            if series.closed_form is not None:
                images = np.asarray([series.closed_form(x) for x in w], dtype=np.complex128)
            else:
                images = np.asarray([eval_scalar(series, x, tail_tol) for x in w], dtype=np.complex128)
        else:
            images = np.asarray([eval_scalar(series, x, tail_tol) for x in w], dtype=np.complex128)
        return (sd.basis * images) @ sd.basis.conj().T
    sd = normal_eig(m, tol)
    _require_in_disk(series, float(np.max(np.abs(sd.values), initial=0.0)))
    images = np.asarray([eval_scalar(series, lam, tail_tol) for lam in sd.values], dtype=np.complex128)
    return (sd.basis * images) @ sd.basis.conj().T


def _require_in_disk(series: PowerSeries, spectral_radius: float) -> None:
    if math.isfinite(series.radius) and spectral_radius > _SAFETY * series.radius:
        raise OutOfDisk(
            f"spectral radius {spectral_radius!r} exceeds {_SAFETY} * radius of {series.name}"
        )


def eval_matrix_truncated(series: PowerSeries, m: Matrix, n_terms: int) -> Matrix:
    """Horner accumulation of the first n_terms terms, valid for any square matrix."""
    m = as_matrix(m)
    if n_terms < 0:
        raise ValueError("n_terms must be nonnegative")
    dim = m.shape[0]
    if n_terms == 0:
        return np.zeros((dim, dim), dtype=np.complex128)
    eye = np.eye(dim, dtype=np.complex128)
    ks = range(series.start_index, series.start_index + n_terms)
    coeffs = [series.coeff(k) for k in ks]
    acc = coeffs[-1] * eye
    for c in reversed(coeffs[:-1]):
        acc = acc @ m + c * eye
    if series.start_index == 1:
        acc = m @ acc
    return acc


# --------------------------------------------------------------------------
# Catalog


def _parity_coeff(parity: int, magnitude: Callable[[int], float], signed: bool = False):
    def coeff(n: int) -> complex:
        if n % 2 != parity:
            return 0.0
        val = magnitude(n)
        if signed:
            half = n // 2 if parity == 0 else (n - 1) // 2
            val = val if half % 2 == 0 else -val
        return val

    return coeff


def _arcsin_coeff_fn() -> Callable[[int], float]:
    cache = [1.0]

    def coeff(n: int) -> float:
        if n < 1 or n % 2 == 0:
            return 0.0
        m = (n - 1) // 2
        while len(cache) <= m:
            j = len(cache) - 1
            cache.append(cache[-1] * (2 * j + 1) ** 2 / ((2 * j + 2) * (2 * j + 3)))
        return cache[m]

    return coeff


def gauss_2f1_series(a: float, b: float, c: float) -> PowerSeries:
    """Hypergeometric 2F1(a, b; c; z) with positive parameters via the ratio
    recurrence c(n+1)/c(n) = (n+a)(n+b) / ((n+1)(n+c)); radius 1."""
    if min(a, b, c) <= 0:
        raise ValueError("parameters must be positive")
    cache = [1.0]

    def coeff(n: int) -> float:
        while len(cache) <= n:
            k = len(cache) - 1
            cache.append(cache[-1] * (k + a) * (k + b) / ((k + 1) * (k + c)))
        return cache[n]

    closed = None
    if (a, b, c) == (1.0, 1.0, 2.0):
        def closed(z):  # noqa: E731 - sum z^n/(n+1)
            z = complex(z)
            return 1.0 + 0j if z == 0 else -np.log(1.0 - z) / z

    return PowerSeries(
        name=f"gauss-2F1({a:g},{b:g},{c:g})",
        start_index=0,
        coeff_fn=coeff,
        radius=1.0,
        closed_form=closed,
        abs_closed_form=closed,
    )


def build_catalog() -> dict[str, PowerSeries]:
    """Standard series, including the alternating/absolute companion pairs."""
    inv_fact = lambda n: 1.0 / math.factorial(n)
    inv_n = lambda n: 1.0 / n
    entries = [
        PowerSeries(
            "log-one-plus-inv", 1, lambda n: (-1.0) ** n / n, 1.0,
            closed_form=lambda z: -np.log(1.0 + z),
            abs_closed_form=lambda z: -np.log(1.0 - z),
        ),
        PowerSeries(
            "cos", 0, _parity_coeff(0, inv_fact, signed=True), math.inf,
            closed_form=np.cos, abs_closed_form=np.cosh,
        ),
        PowerSeries(
            "sin", 1, _parity_coeff(1, inv_fact, signed=True), math.inf,
            closed_form=np.sin, abs_closed_form=np.sinh,
        ),
        PowerSeries(
            "geom-alt", 0, lambda n: (-1.0) ** n, 1.0,
            closed_form=lambda z: 1.0 / (1.0 + z),
            abs_closed_form=lambda z: 1.0 / (1.0 - z),
        ),
        PowerSeries(
            "log-one-minus-inv", 1, inv_n, 1.0,
            closed_form=lambda z: -np.log(1.0 - z),
            abs_closed_form=lambda z: -np.log(1.0 - z),
        ),
        PowerSeries(
            "cosh", 0, _parity_coeff(0, inv_fact), math.inf,
            closed_form=np.cosh, abs_closed_form=np.cosh,
        ),
        PowerSeries(
            "sinh", 1, _parity_coeff(1, inv_fact), math.inf,
            closed_form=np.sinh, abs_closed_form=np.sinh,
        ),
        PowerSeries(
            "geom", 0, lambda n: 1.0, 1.0,
            closed_form=lambda z: 1.0 / (1.0 - z),
            abs_closed_form=lambda z: 1.0 / (1.0 - z),
        ),
        PowerSeries(
            "exp", 0, inv_fact, math.inf,
            closed_form=np.exp, abs_closed_form=np.exp,
        ),
        PowerSeries(
            "half-log-ratio", 1, _parity_coeff(1, inv_n), 1.0,
            closed_form=lambda z: 0.5 * np.log((1.0 + z) / (1.0 - z)),
            abs_closed_form=lambda z: 0.5 * np.log((1.0 + z) / (1.0 - z)),
        ),
        PowerSeries(
            "arcsin", 1, _arcsin_coeff_fn(), 1.0,
            closed_form=np.arcsin, abs_closed_form=np.arcsin,
        ),
        PowerSeries(
            "artanh", 1, _parity_coeff(1, inv_n), 1.0,
            closed_form=np.arctanh, abs_closed_form=np.arctanh,
        ),
        gauss_2f1_series(1.0, 1.0, 2.0),
        PowerSeries(
            "exp-minus-one", 1, inv_fact, math.inf,
            closed_form=lambda z: np.exp(z) - 1.0,
            abs_closed_form=lambda z: np.exp(z) - 1.0,
        ),
        PowerSeries(
            "geom-minus-one", 1, lambda n: 1.0, 1.0,
            closed_form=lambda z: z / (1.0 - z),
            abs_closed_form=lambda z: z / (1.0 - z),
        ),
    ]
    catalog = {}
    for entry in entries:
        key = "gauss-2F1" if entry.name.startswith("gauss-2F1") else entry.name
        catalog[key] = entry
    return catalog


CATALOG = build_catalog()

# Alternating entries paired with their absolute-coefficient companions.
ABS_PAIRS = {
    "log-one-plus-inv": "log-one-minus-inv",
    "cos": "cosh",
    "sin": "sinh",
    "geom-alt": "geom",
}


# --------------------------------------------------------------------------
# Trace inequality checkers


def _sq_scale(abs_mid: float, bracket: float) -> float:
    """Scale for |x|^2 <= b^2 comparisons: (|x| + b)^2."""
    return (abs_mid + bracket) ** 2


def _psd_trace_of(series: PowerSeries, m: Matrix, tol: ToleranceProfile) -> float:
    val = float(np.trace(eval_matrix_spectral(series, m, tol)).real)
    return max(val, 0.0)


def check_series_trace(
    n_mat, alpha: float, series: PowerSeries, tol: ToleranceProfile = DEFAULT_TOL
) -> InequalityCheck:
    """|tr f(N)|^2 <= tr(f_a(|N|^(2a))) tr(f_a(|N|^(2(1-a)))) for normal N and a
    series f starting at the first power, under the trace budget preconditions."""
    if series.start_index != 1:
        raise ValueError("series must start at index 1")
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie in (0, 1)")
    n_mat = require_normal(n_mat, tol)
    s = singular_values(n_mat)
    p1, p2 = 2.0 * alpha, 2.0 * (1.0 - alpha)
    tr1, tr2 = float(np.sum(s**p1)), float(np.sum(s**p2))
    if not (tr1 < series.radius and tr2 < series.radius):
        raise PreconditionFailed(
            f"trace budget ({tr1!r}, {tr2!r}) not inside radius {series.radius!r}"
        )
    abs_mid = abs(complex(np.trace(eval_matrix_spectral(series, n_mat, tol))))
    fa = series.absolute()
    t_left = _psd_trace_of(fa, modulus_power(n_mat, p1), tol)
    t_right = _psd_trace_of(fa, modulus_power(n_mat, p2), tol)
    bracket = math.sqrt(t_left) * math.sqrt(t_right)
    ctx = f"series={series.name} alpha={alpha:.6g}"
    return make_check(
        "series-trace", abs_mid**2, t_left * t_right,
        context=ctx, tol=tol, scale=_sq_scale(abs_mid, bracket),
    )


def check_series_trace_closed_form(
    n_mat, alpha: float, which: str, tol: ToleranceProfile = DEFAULT_TOL
) -> InequalityCheck:
    """Closed-form instances of the normal-operator series bound.

    which = "resolvent": lhs |tr(N (1 + N)^-1)|^2 against the geometric-tail
    right side tr(|N|^(2a)(1 - |N|^(2a))^-1) tr(...), valid when both trace
    budgets are < 1 (the alternating-sign left side against the
    absolute-series right side).  which = "exp": lhs |tr(exp(N) - 1)|^2
    against tr(exp(|N|^(2a)) - 1) tr(exp(|N|^(2(1-a))) - 1).
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie in (0, 1)")
    n_mat = require_normal(n_mat, tol)
    sd = normal_eig(n_mat, tol)
    lam = sd.values
    s = np.abs(lam)
    p1, p2 = 2.0 * alpha, 2.0 * (1.0 - alpha)
    w1, w2 = s**p1, s**p2
    tr1, tr2 = float(np.sum(w1)), float(np.sum(w2))
    if which == "resolvent":
        if not (tr1 < 1.0 and tr2 < 1.0):
            raise PreconditionFailed("resolvent form needs both trace budgets < 1")
        abs_mid = abs(complex(np.sum(lam / (1.0 + lam))))
        t_left = float(np.sum(w1 / (1.0 - w1)))
        t_right = float(np.sum(w2 / (1.0 - w2)))
        name = "series-resolvent"
    elif which == "exp":
        abs_mid = abs(complex(np.sum(np.exp(lam) - 1.0)))
        t_left = float(np.sum(np.exp(w1) - 1.0))
        t_right = float(np.sum(np.exp(w2) - 1.0))
        name = "series-exp"
    else:
        raise ValueError("which must be 'resolvent' or 'exp'")
    bracket = math.sqrt(max(t_left, 0.0)) * math.sqrt(max(t_right, 0.0))
    ctx = f"alpha={alpha:.6g}"
    return make_check(
        name, abs_mid**2, t_left * t_right,
        context=ctx, tol=tol, scale=_sq_scale(abs_mid, bracket),
    )


def require_double_commuting(t, a, tol: ToleranceProfile = DEFAULT_TOL) -> tuple[Matrix, Matrix]:
    t = require_normal(t, tol, "T")
    a = require_normal(a, tol, "A")
    require_same_dim(t, a)
    scale = max(hs_norm(t) * hs_norm(a), _TINY)
    if hs_norm(t @ a - a @ t) > tol.decomposition * scale:
        raise NotDoubleCommuting("TA != AT within tolerance")
    ah = a.conj().T
    if hs_norm(t @ ah - ah @ t) > tol.decomposition * scale:
        raise NotDoubleCommuting("TA^H != A^H T within tolerance")
    return t, a


def _product_args(t, a, alpha: float, tol: ToleranceProfile):
    """(|A|^2 |T|^(2a), |A|^2 |T|^(2(1-a)), |A|^2 T) for a double-commuting pair."""
    gram = a.conj().T @ a
    left = hermitize(gram @ modulus_power(t, 2.0 * alpha))
    right = hermitize(gram @ modulus_power(t, 2.0 * (1.0 - alpha)))
    return left, right, gram @ t


def check_series_product(
    t, a, alpha: float, series: PowerSeries, tol: ToleranceProfile = DEFAULT_TOL
) -> InequalityCheck:
    """|tr f(|A|^2 T)|^2 <= tr(f_a(|A|^2 |T|^(2a))) tr(f_a(|A|^2 |T|^(2(1-a))))
    for double-commuting normal T, A under the trace budget preconditions."""
    if not 0.0 <= alpha <= 1.0:
        raise ValueError("alpha must lie in [0, 1]")
    t, a = require_double_commuting(t, a, tol)
    left, right, arg = _product_args(t, a, alpha, tol)
    tr1 = float(np.trace(left).real)
    tr2 = float(np.trace(right).real)
    if not (tr1 < series.radius and tr2 < series.radius):
        raise PreconditionFailed(
            f"trace budget ({tr1!r}, {tr2!r}) not inside radius {series.radius!r}"
        )
    abs_mid = abs(complex(np.trace(eval_matrix_spectral(series, arg, tol))))
    fa = series.absolute()
    t_left = _psd_trace_of(fa, left, tol)
    t_right = _psd_trace_of(fa, right, tol)
    bracket = math.sqrt(t_left) * math.sqrt(t_right)
    ctx = f"series={series.name} alpha={alpha:.6g}"
    return make_check(
        "series-product", abs_mid**2, t_left * t_right,
        context=ctx, tol=tol, scale=_sq_scale(abs_mid, bracket),
    )


def check_series_product_closed_form(
    t, a, alpha: float, which: str, tol: ToleranceProfile = DEFAULT_TOL
) -> InequalityCheck:
    """Closed-form instances of the product series bound: which = "resolvent"
    uses (1 + |A|^2 T)^-1 on the left and (1 - |A|^2 |T|^(2a))^-1 factors on
    the right (trace budgets < 1); which = "exp" uses matrix exponentials."""
    if not 0.0 <= alpha <= 1.0:
        raise ValueError("alpha must lie in [0, 1]")
    t, a = require_double_commuting(t, a, tol)
    left, right, arg = _product_args(t, a, alpha, tol)
    xi_l = np.maximum(hermitian_eig(left, tol).values, 0.0)
    xi_r = np.maximum(hermitian_eig(right, tol).values, 0.0)
    nu = normal_eig(arg, tol).values
    tr1, tr2 = float(np.sum(xi_l)), float(np.sum(xi_r))
    if which == "resolvent":
        if not (tr1 < 1.0 and tr2 < 1.0):
            raise PreconditionFailed("resolvent form needs both trace budgets < 1")
        abs_mid = abs(complex(np.sum(1.0 / (1.0 + nu))))
        t_left = float(np.sum(1.0 / (1.0 - xi_l)))
        t_right = float(np.sum(1.0 / (1.0 - xi_r)))
        name = "series-product-resolvent"
    elif which == "exp":
        abs_mid = abs(complex(np.sum(np.exp(nu))))
        t_left = float(np.sum(np.exp(xi_l)))
        t_right = float(np.sum(np.exp(xi_r)))
        name = "series-product-exp"
    else:
        raise ValueError("which must be 'resolvent' or 'exp'")
    bracket = math.sqrt(max(t_left, 0.0)) * math.sqrt(max(t_right, 0.0))
    ctx = f"alpha={alpha:.6g}"
    return make_check(
        name, abs_mid**2, t_left * t_right,
        context=ctx, tol=tol, scale=_sq_scale(abs_mid, bracket),
    )


def _require_nonneg_coeffs(series: PowerSeries, upto: int = 64) -> None:
    for n in range(series.start_index, upto + 1):
        c = series.coeff(n)
        if c.imag != 0.0 or c.real < 0.0:
            raise ValueError(f"{series.name} has a non-nonnegative coefficient at {n}")


def _bracket_of(series: PowerSeries, left, right, arg, tol) -> tuple[float, float, complex]:
    t_l = _psd_trace_of(series.absolute(), left, tol)
    t_r = _psd_trace_of(series.absolute(), right, tol)
    mid = complex(np.trace(eval_matrix_spectral(series, arg, tol)))
    return t_l, t_r, mid


def check_series_bracket_pair(
    t, a, alpha: float, f: PowerSeries, g: PowerSeries, tol: ToleranceProfile = DEFAULT_TOL
) -> tuple[InequalityCheck, InequalityCheck]:
    """Superadditivity and coefficient-dominance of the series bracket
    sqrt(tr f(|A|^2 |T|^(2a))) sqrt(tr f(|A|^2 |T|^(2(1-a)))) - |tr f(|A|^2 T)|
    over two nonnegative-coefficient series f, g.

    First check: bracket(f + g) >= bracket(f) + bracket(g).  Second check:
    bracket(f) >= bracket(g) when coeff_f(j) >= coeff_g(j) on the probed range
    (reported not-applicable otherwise).
    """
    if not 0.0 <= alpha <= 1.0:
        raise ValueError("alpha must lie in [0, 1]")
    _require_nonneg_coeffs(f)
    _require_nonneg_coeffs(g)
    t, a = require_double_commuting(t, a, tol)
    left, right, arg = _product_args(t, a, alpha, tol)
    radius = min(f.radius, g.radius)
    tr1 = float(np.trace(left).real)
    tr2 = float(np.trace(right).real)
    if not (tr1 < radius and tr2 < radius):
        raise PreconditionFailed(
            f"trace budget ({tr1!r}, {tr2!r}) not inside radius {radius!r}"
        )
    fl, fr, fm = _bracket_of(f, left, right, arg, tol)
    gl, gr, gm = _bracket_of(g, left, right, arg, tol)
    bra_f = math.sqrt(fl) * math.sqrt(fr) - abs(fm)
    bra_g = math.sqrt(gl) * math.sqrt(gr) - abs(gm)
    bra_sum = math.sqrt(fl + gl) * math.sqrt(fr + gr) - abs(fm + gm)
    scale = math.sqrt(fl + gl) * math.sqrt(fr + gr) + abs(fm) + abs(gm)
    ctx = f"f={f.name} g={g.name} alpha={alpha:.6g}"
    superadd = make_check(
        "series-sum-superadd", bra_f + bra_g, bra_sum, context=ctx, tol=tol, scale=scale
    )
    dominated = all(
        f.coeff(j).real >= g.coeff(j).real for j in range(0, 129)
    )
    if dominated:
        dom = make_check(
            "series-dominance", bra_g, bra_f, context=ctx, tol=tol,
            scale=math.sqrt(fl) * math.sqrt(fr) + abs(fm) + abs(gm),
        )
    else:
        dom = not_applicable("series-dominance", f"{f.name} does not dominate {g.name}")
    return superadd, dom
