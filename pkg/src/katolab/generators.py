"""Seeded, reproducible construction of structured operators and bases.

All randomness flows through numpy's PCG64 generator seeded by a
``SeedPlan``: ``SeedSequence(master_seed, spawn_key=(stream_index,))``.
Identical (seed, parameters) give bitwise-identical draws; distinct stream
indices give independent streams.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .checks import DEFAULT_TOL, ToleranceProfile
from .errors import DegenerateDraw
from .linalg import Matrix, as_matrix, hs_norm, require_normal, singular_values

GENERATOR_NAME = "numpy-pcg64/seedsequence-spawn"

OPERATOR_CLASSES = (
    "general",
    "selfadjoint",
    "positive",
    "unitary",
    "normal",
    "nilpotent-like",
)


@dataclass(frozen=True)
class SeedPlan:
    """Master seed plus a stream index; together they pin one random stream."""

    master_seed: int
    stream_index: int = 0

    def rng(self) -> np.random.Generator:
        ss = np.random.SeedSequence(self.master_seed, spawn_key=(self.stream_index,))
        return np.random.default_rng(ss)


def draw_ginibre(n: int, rng: np.random.Generator) -> Matrix:
    """n x n matrix of iid standard complex normals."""
    return (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2.0)


def draw_vector(n: int, rng: np.random.Generator) -> np.ndarray:
    return (rng.standard_normal(n) + 1j * rng.standard_normal(n)) / np.sqrt(2.0)


def draw_disk_points(n: int, rng: np.random.Generator, radius: float = 1.0) -> np.ndarray:
    """Points uniform in the complex disk of the given radius."""
    r = radius * np.sqrt(rng.uniform(0.0, 1.0, n))
    theta = rng.uniform(0.0, 2.0 * np.pi, n)
    return r * np.exp(1j * theta)


def draw_orthonormal_basis(n: int, rng: np.random.Generator) -> Matrix:
    """Haar-ish random unitary via QR of a Ginibre draw with phase-normalized R."""
    for _ in range(8):
        g = draw_ginibre(n, rng)
        q, r = np.linalg.qr(g)
        d = np.diag(r)
        if np.abs(d).min(initial=1.0) < 1e-12:
            continue  # numerically singular draw; redraw from the same stream
        return q * (d / np.abs(d))
    raise DegenerateDraw("repeated numerically singular draws")


def draw_matrix(n: int, op_class: str, rng: np.random.Generator) -> Matrix:
    if n < 1:
        raise ValueError("dimension must be >= 1")
    if op_class == "general":
        return draw_ginibre(n, rng)
    if op_class == "selfadjoint":
        g = draw_ginibre(n, rng)
        return (g + g.conj().T) / 2.0
    if op_class == "positive":
        u = draw_orthonormal_basis(n, rng)
        lam = rng.uniform(0.0, 1.0, n)
        m = (u * lam) @ u.conj().T
        return (m + m.conj().T) / 2.0
    if op_class == "unitary":
        return draw_orthonormal_basis(n, rng)
    if op_class == "normal":
        u = draw_orthonormal_basis(n, rng)
        lam = draw_disk_points(n, rng)
        return (u * lam) @ u.conj().T
    if op_class == "nilpotent-like":
        return np.triu(draw_ginibre(n, rng), k=1)
    raise ValueError(f"unknown operator class {op_class!r}")


def draw_double_commuting_pair(n: int, rng: np.random.Generator) -> tuple[Matrix, Matrix]:
    """Two normal matrices sharing one random eigenbasis, so TA = AT and TA^H = A^H T."""
    u = draw_orthonormal_basis(n, rng)
    t = draw_disk_points(n, rng)
    a = draw_disk_points(n, rng)
    uh = u.conj().T
    return (u * t) @ uh, (u * a) @ uh


def gen_matrix(n: int, op_class: str, seed: SeedPlan) -> Matrix:
    return draw_matrix(n, op_class, seed.rng())


def gen_double_commuting_pair(n: int, seed: SeedPlan) -> tuple[Matrix, Matrix]:
    return draw_double_commuting_pair(n, seed.rng())


def gen_orthonormal_basis(n: int, seed: SeedPlan) -> Matrix:
    return draw_orthonormal_basis(n, seed.rng())


def scale_to_trace_budget(
    n_mat: Matrix,
    alpha: float,
    budget: float,
    margin: float,
    tol: ToleranceProfile = DEFAULT_TOL,
) -> Matrix:
    """Scale a normal matrix N -> cN so that both tr(|cN|^(2a)) and
    tr(|cN|^(2(1-a))) come out at margin * budget.

    The scalar map c -> max of the two traces is strictly increasing, so c is
    found by bisection; the returned scale is the lower end of the final
    bracket, keeping both traces <= margin * budget.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie in (0, 1)")
    if budget <= 0.0:
        raise ValueError("budget must be positive")
    if not 0.0 < margin < 1.0:
        raise ValueError("margin must lie in (0, 1)")
    n_mat = require_normal(as_matrix(n_mat), tol)
    if hs_norm(n_mat) == 0.0:
        return n_mat.copy()
    sigma = singular_values(n_mat)
    p1, p2 = 2.0 * alpha, 2.0 * (1.0 - alpha)
    s1 = float(np.sum(sigma**p1))
    s2 = float(np.sum(sigma**p2))
    target = margin * budget

    def max_trace(c: float) -> float:
        return max(c**p1 * s1, c**p2 * s2)

    lo, hi = 0.0, 1.0
    for _ in range(256):
        if max_trace(hi) >= target:
            break
        lo, hi = hi, hi * 2.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if max_trace(mid) > target:
            hi = mid
        else:
            lo = mid
    return lo * n_mat
