"""Dense complex matrix algebra: adjoints, decompositions, operator modulus,
fractional powers, Schatten norms, and traces.

Conventions used throughout the package:

* matrices are square complex128 arrays, vectors are 1-d complex128 arrays;
* ``<x, y>`` is the inner product linear in the first argument (``y^H x``);
* ``hs_norm`` is the Hilbert-Schmidt (Frobenius) norm, ``op_norm`` the largest
  singular value, ``tr_norm`` the sum of singular values;
* eigen/singular values are sorted descending (by absolute value for complex
  spectra), ties broken by first occurrence, and each basis column carries a
  fixed phase: its largest-magnitude component is real positive.  This makes
  every decomposition deterministic for a given input.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .checks import DEFAULT_TOL, ToleranceProfile
from .errors import (
    DimensionMismatch,
    NoConvergence,
    NotHermitian,
    NotNormal,
    NotPsd,
    NotUnitary,
)

Matrix = np.ndarray
Vector = np.ndarray

_TINY = 1e-300


def as_matrix(a) -> Matrix:
    """Validate and coerce to a square, finite complex matrix (never a view of a smaller dtype)."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {m.shape}")
    if m.shape[0] < 1:
        raise DimensionMismatch("matrix dimension must be >= 1")
    if not (np.isfinite(m.real).all() and np.isfinite(m.imag).all()):
        raise ValueError("matrix entries must be finite")
    return m


def as_vector(x, dim: int | None = None) -> Vector:
    v = np.asarray(x, dtype=np.complex128)
    if v.ndim != 1:
        raise DimensionMismatch(f"expected a vector, got shape {v.shape}")
    if dim is not None and v.shape[0] != dim:
        raise DimensionMismatch(f"vector length {v.shape[0]} != matrix dimension {dim}")
    if not (np.isfinite(v.real).all() and np.isfinite(v.imag).all()):
        raise ValueError("vector entries must be finite")
    return v


def inner(x: Vector, y: Vector) -> complex:
    """<x, y> = y^H x."""
    return complex(np.vdot(y, x))


def hs_norm(a: Matrix) -> float:
    return float(np.linalg.norm(a))


def op_norm(a: Matrix) -> float:
    s = singular_values(a)
    return float(s[0])


def adjoint(a: Matrix) -> Matrix:
    a = as_matrix(a)
    return a.conj().T.copy()


def hermitize(a: Matrix) -> Matrix:
    return (a + a.conj().T) / 2.0


def is_hermitian(a: Matrix, tol: ToleranceProfile = DEFAULT_TOL) -> bool:
    a = as_matrix(a)
    return hs_norm(a - a.conj().T) <= tol.decomposition * max(hs_norm(a), _TINY)


def is_normal(a: Matrix, tol: ToleranceProfile = DEFAULT_TOL) -> bool:
    a = as_matrix(a)
    ah = a.conj().T
    scale = max(hs_norm(a) ** 2, _TINY)
    return hs_norm(a @ ah - ah @ a) <= tol.decomposition * scale


def is_unitary(a: Matrix, tol: ToleranceProfile = DEFAULT_TOL) -> bool:
    a = as_matrix(a)
    gram = a.conj().T @ a
    return float(np.abs(gram - np.eye(a.shape[0])).max()) <= tol.decomposition


def eigmin_hermitian(a: Matrix) -> float:
    h = hermitize(as_matrix(a))
    return float(np.linalg.eigvalsh(h)[0])


def is_psd(a: Matrix, tol: ToleranceProfile = DEFAULT_TOL) -> bool:
    a = as_matrix(a)
    if not is_hermitian(a, tol):
        return False
    return eigmin_hermitian(a) >= -tol.decomposition * max(hs_norm(a), _TINY)


def require_psd(a: Matrix, tol: ToleranceProfile = DEFAULT_TOL, who: str = "operator") -> Matrix:
    a = as_matrix(a)
    if not is_hermitian(a, tol):
        raise NotPsd(f"{who} is not Hermitian within tolerance")
    if eigmin_hermitian(a) < -tol.decomposition * max(hs_norm(a), _TINY):
        raise NotPsd(f"{who} has a negative eigenvalue beyond tolerance")
    return a


def require_unitary(a: Matrix, tol: ToleranceProfile = DEFAULT_TOL, who: str = "basis") -> Matrix:
    a = as_matrix(a)
    if not is_unitary(a, tol):
        raise NotUnitary(f"{who} is not unitary within tolerance")
    return a


def require_normal(a: Matrix, tol: ToleranceProfile = DEFAULT_TOL, who: str = "operator") -> Matrix:
    a = as_matrix(a)
    if not is_normal(a, tol):
        raise NotNormal(f"{who} does not commute with its adjoint within tolerance")
    return a


def require_same_dim(*mats: Matrix) -> int:
    dims = {m.shape[0] for m in mats}
    if len(dims) != 1:
        raise DimensionMismatch(f"operands have mixed dimensions {sorted(dims)}")
    return dims.pop()


@dataclass(frozen=True)
class SpectralData:
    """A deterministic spectral factorization A = basis @ diag(values) @ right^H.

    kind is one of "hermitian-eigen" (right is basis), "normal-eigen"
    (right is basis) or "singular" (right is the second unitary factor).
    """

    kind: str
    basis: Matrix
    values: np.ndarray
    right: Matrix | None = None

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def reconstruct(self) -> Matrix:
        v = self.right if self.right is not None else self.basis
        return (self.basis * self.values) @ v.conj().T


def _phase_fix_columns(u: Matrix) -> tuple[Matrix, np.ndarray]:
    """Rotate each column so its largest-magnitude entry is real positive."""
    u = u.copy()
    idx = np.argmax(np.abs(u), axis=0)
    lead = u[idx, np.arange(u.shape[1])]
    mags = np.abs(lead)
    phases = np.where(mags > 0, lead / np.where(mags > 0, mags, 1.0), 1.0)
    u *= phases.conj()
    return u, phases


def hermitian_eig(a: Matrix, tol: ToleranceProfile = DEFAULT_TOL) -> SpectralData:
    """Eigendecomposition of a Hermitian matrix, eigenvalues descending."""
    a = as_matrix(a)
    if not is_hermitian(a, tol):
        raise NotHermitian("matrix is not selfadjoint within tolerance")
    h = hermitize(a)
    try:
        w, u = np.linalg.eigh(h)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise NoConvergence(str(exc)) from exc
    order = np.argsort(-w, kind="stable")
    w = w[order]
    u = u[:, order]
    u, _ = _phase_fix_columns(u)
    return SpectralData(kind="hermitian-eigen", basis=u, values=w)


def normal_eig(a: Matrix, tol: ToleranceProfile = DEFAULT_TOL) -> SpectralData:
    """Unitary diagonalization of a normal matrix, |eigenvalue| descending."""
    a = require_normal(a, tol)
    try:
        t, q = scipy.linalg.schur(a, output="complex")
    except Exception as exc:  # pragma: no cover - LAPACK failure
        raise NoConvergence(str(exc)) from exc
    w = np.diag(t).copy()
    order = np.argsort(-np.abs(w), kind="stable")
    w = w[order]
    q = q[:, order]
    q, _ = _phase_fix_columns(q)
    res = hs_norm(a - (q * w) @ q.conj().T)
    if res > 10 * tol.decomposition * max(hs_norm(a), _TINY):
        raise NotNormal("unitary diagonalization residual exceeds tolerance")
    return SpectralData(kind="normal-eigen", basis=q, values=w)


def svd(a: Matrix) -> SpectralData:
    """Singular value decomposition A = basis @ diag(values) @ right^H."""
    a = as_matrix(a)
    try:
        u, s, vh = np.linalg.svd(a)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise NoConvergence(str(exc)) from exc
    u, phases = _phase_fix_columns(u)
    # Compensate in the right factor so basis * values @ right^H stays equal to A.
    v = vh.conj().T * phases.conj()
    return SpectralData(kind="singular", basis=u, values=s, right=v)


def singular_values(a: Matrix) -> np.ndarray:
    a = as_matrix(a)
    try:
        return np.linalg.svd(a, compute_uv=False)
    except np.linalg.LinAlgError as exc:  # pragma: no cover
        raise NoConvergence(str(exc)) from exc


def modulus(a: Matrix) -> Matrix:
    """|A| = psd square root of A^H A."""
    sd = svd(a)
    v = sd.right
    return hermitize((v * sd.values) @ v.conj().T)


def modulus_power(a: Matrix, p: float) -> Matrix:
    """|A|^p through one SVD; 0^0 := 1 so p = 0 yields the identity."""
    sd = svd(a)
    v = sd.right
    return hermitize((v * _pow_nonneg(sd.values, p)) @ v.conj().T)


def modulus_power_pair(a: Matrix, p_left: float, p_right: float) -> tuple[Matrix, Matrix]:
    """(|A|^p_left, |A^H|^p_right) from a single SVD of A."""
    sd = svd(a)
    v, u = sd.right, sd.basis
    left = hermitize((v * _pow_nonneg(sd.values, p_left)) @ v.conj().T)
    right = hermitize((u * _pow_nonneg(sd.values, p_right)) @ u.conj().T)
    return left, right


def _pow_nonneg(values: np.ndarray, p: float) -> np.ndarray:
    if p < 0:
        raise ValueError("exponent must be nonnegative")
    if p == 0:
        return np.ones_like(values)
    return values**p


def frac_power(p_mat: Matrix, s: float, tol: ToleranceProfile = DEFAULT_TOL) -> Matrix:
    """P^s for Hermitian psd P; eigenvalues in [-eps, 0) are clamped to zero."""
    if s < 0:
        raise ValueError("exponent must be nonnegative")
    sd = hermitian_eig(p_mat, tol)
    w = sd.values
    thresh = tol.decomposition * max(hs_norm(p_mat), _TINY)
    if w.min(initial=0.0) < -thresh:
        raise NotPsd(f"eigenvalue {w.min():.3e} below -{thresh:.3e}")
    w = np.maximum(w, 0.0)
    u = sd.basis
    return hermitize((u * _pow_nonneg(w, s)) @ u.conj().T)


def trace(a: Matrix) -> complex:
    a = as_matrix(a)
    return complex(np.trace(a))


def trace_via_basis(a: Matrix, basis: Matrix, tol: ToleranceProfile = DEFAULT_TOL) -> complex:
    """Sum of <A b_i, b_i> over the columns of a unitary basis.

    Computed through the basis columns (not as a similarity trace) so it can
    serve as an independent oracle for basis invariance of the trace.
    """
    a = as_matrix(a)
    basis = require_unitary(basis, tol)
    require_same_dim(a, basis)
    ab = a @ basis
    return complex(np.einsum("ij,ij->", basis.conj(), ab))


def schatten(a: Matrix) -> tuple[float, float, float]:
    """(operator norm, Hilbert-Schmidt norm, trace norm) from singular values."""
    s = singular_values(a)
    return float(s[0]), float(np.sqrt(np.sum(s**2))), float(np.sum(s))


def hs_inner(a: Matrix, b: Matrix) -> complex:
    """<A, B>_hs = tr(B^H A)."""
    a = as_matrix(a)
    b = as_matrix(b)
    require_same_dim(a, b)
    return complex(np.vdot(b, a))
