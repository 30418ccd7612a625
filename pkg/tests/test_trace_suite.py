"""Trace inequality checkers: frozen hand values, reduction coherence,
exponent symmetry, scalar equality, and the sharpness search."""

import numpy as np
import pytest
from dataclasses import FrozenInstanceError

from katolab.campaign import sharpness_search
from katolab.checks import STATUS_NOT_APPLICABLE
from katolab.errors import NotNormal, NotUnitary, UnknownChecker
from katolab.generators import SeedPlan, draw_matrix, draw_orthonormal_basis
from katolab.linalg import singular_values, trace
from katolab.trace_suite import (
    AlphaGrid,
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

C = lambda m: np.asarray(m, dtype=np.complex128)
SHIFT = C([[0, 1], [0, 0]])


def test_alpha_grid_default_and_validation():
    grid = AlphaGrid()
    assert grid.points[0] == 0.0 and grid.points[-1] == 1.0
    assert len(grid.points) == 21
    assert abs(grid.points[1] - 0.05) < 1e-12
    with pytest.raises(ValueError):
        AlphaGrid(points=(0.2, 0.1))
    with pytest.raises(ValueError):
        AlphaGrid(points=(0.0, 1.5))


def test_trace_kato_identity_equality():
    c = check_trace_kato(np.eye(3, dtype=complex), 0.5)
    assert c.lhs == 9.0 and c.rhs == 9.0


def test_trace_kato_shift():
    c = check_trace_kato(SHIFT, 0.5)
    assert c.lhs == 0.0 and abs(c.rhs - 1.0) < 1e-14


def test_trace_kato_scalar_equality_all_alphas():
    z = C([[0.7 - 1.3j]])
    for alpha in np.linspace(0, 1, 11):
        c = check_trace_kato(z, float(alpha))
        assert abs(c.rel_slack) <= 1e-10


def test_trace_kato_endpoint_flagged_in_context():
    assert "endpoint" in check_trace_kato(SHIFT, 0.0).context
    assert "endpoint" not in check_trace_kato(SHIFT, 0.5).context


def test_basis_bound_diagonal_equality():
    for alpha in (0.0, 0.25, 0.5, 1.0):
        c = check_basis_bound(C(np.diag([2.0, 3.0])), np.eye(2, dtype=complex), alpha)
        assert abs(c.lhs - 5.0) < 1e-14 and abs(c.rhs - 5.0) < 1e-12


def test_basis_bound_shift_zero():
    c = check_basis_bound(SHIFT, np.eye(2, dtype=complex), 0.5)
    assert c.lhs == 0.0 and c.rhs == 0.0 and c.passed


def test_basis_bound_zero_matrix():
    c = check_basis_bound(np.zeros((3, 3), dtype=complex), np.eye(3, dtype=complex), 0.3)
    assert c.lhs == 0.0 and c.rhs == 0.0 and c.passed


def test_basis_bound_rejects_nonunitary():
    with pytest.raises(NotUnitary):
        check_basis_bound(SHIFT, C([[1, 0], [0, 2]]), 0.5)


def test_basis_inf_normal_eigenbasis_ties():
    # In an eigenbasis of a normal matrix both sides equal the absolute eigenvalue sum.
    t = C(np.diag([1.0, -1.0]))
    c = check_basis_inf_bound(t, np.eye(2, dtype=complex))
    assert abs(c.lhs - 2.0) < 1e-12 and abs(c.rhs - 2.0) < 1e-12


def test_basis_inf_shift_interior_minimum():
    c = check_basis_inf_bound(SHIFT, np.eye(2, dtype=complex))
    assert c.lhs <= 1e-6 and abs(c.rhs - 1.0) < 1e-12 and c.passed


def test_basis_inf_zero():
    c = check_basis_inf_bound(np.zeros((2, 2), dtype=complex), np.eye(2, dtype=complex))
    assert c.lhs == 0.0 and c.rhs == 0.0 and c.passed


def test_sqrt_basis_bound_matches_half_exponent(rng):
    t = draw_matrix(5, "general", rng)
    basis = draw_orthonormal_basis(5, rng)
    a = check_sqrt_basis_bound(t, basis)
    b = check_basis_bound(t, basis, 0.5)
    assert abs(a.lhs - b.lhs) <= 1e-12
    assert abs(a.rhs - b.rhs) <= 1e-10 * max(b.rhs, 1.0)


def test_normal_trace_hand_values():
    sq, ab = check_normal_trace(C(np.diag([1.0, -1.0])), 0.3)
    assert sq.lhs == 0.0 and abs(sq.rhs - 4.0) < 1e-12
    assert ab.lhs == 0.0 and abs(ab.rhs - 2.0) < 1e-12


def test_normal_trace_psd_equality(rng):
    p = draw_matrix(4, "positive", rng)
    _, ab = check_normal_trace(p, 0.5)
    assert abs(ab.rel_slack) <= 1e-10


def test_normal_trace_scalar_equality():
    sq, _ = check_normal_trace(C([[1.3 - 0.4j]]), 0.7)
    assert abs(sq.rel_slack) <= 1e-10


def test_normal_trace_rejects_nonnormal():
    with pytest.raises(NotNormal):
        check_normal_trace(SHIFT, 0.5)


def test_product_trace_identity_reduces_to_trace_kato(rng):
    t = draw_matrix(4, "general", rng)
    eye = np.eye(4, dtype=complex)
    for alpha in (0.0, 0.3, 0.5, 1.0):
        a = check_product_trace(t, eye, eye, alpha)[0]
        b = check_trace_kato(t, alpha)
        assert abs(a.lhs - b.lhs) <= 1e-10 * max(b.lhs, 1.0)
        assert abs(a.rhs - b.rhs) <= 1e-10 * max(b.rhs, 1.0)


def test_product_trace_scalar_equality():
    a, b, t = C([[1 + 1j]]), C([[2 - 1j]]), C([[0.5j]])
    for alpha in (0.1, 0.5, 0.9):
        first, _ = check_product_trace(t, a, b, alpha)
        assert abs(first.rel_slack) <= 1e-10


def test_product_trace_min_form_identity_equality():
    eye = np.eye(2, dtype=complex)
    _, second = check_product_trace(eye, eye, eye, 0.5)
    assert second.lhs == 4.0 and second.rhs == 4.0


def test_product_trace_half_matches_half_exponent(rng):
    t, a, b = (draw_matrix(4, "general", rng) for _ in range(3))
    half = check_product_trace_half(t, a, b)
    generic = check_product_trace(t, a, b, 0.5)[0]
    assert abs(half.lhs - generic.lhs) <= 1e-10 * max(generic.lhs, 1.0)
    assert abs(half.rhs - generic.rhs) <= 1e-10 * max(generic.rhs, 1.0)


def test_normal_product_hand_values():
    eye = np.eye(2, dtype=complex)
    first, second, third = check_normal_product(C(np.diag([1.0, -1.0])), eye, eye, 0.5)
    assert first.lhs == 0.0
    assert abs(second.rhs - 4.0) < 1e-12
    assert abs(third.rhs - 4.0) < 1e-12


def test_normal_product_scalar_equality():
    first, _, _ = check_normal_product(C([[0.5 - 2j]]), C([[1j]]), C([[2.0]]), 0.25)
    assert abs(first.rel_slack) <= 1e-10


def test_normal_product_min_matches_product_min(rng):
    nm = draw_matrix(3, "normal", rng)
    eye = np.eye(3, dtype=complex)
    a = check_normal_product(nm, eye, eye, 0.5)[2]
    b = check_product_trace(nm, eye, eye, 0.5)[1]
    assert abs(a.lhs - b.lhs) <= 1e-10 * max(b.lhs, 1.0)
    assert abs(a.rhs - b.rhs) <= 1e-10 * max(b.rhs, 1.0)


def test_weighted_trace_identity_weight_reduces(rng):
    t = draw_matrix(4, "general", rng)
    eye = np.eye(4, dtype=complex)
    gram, _, _, _ = check_weighted_trace_bounds(t, eye, 0.4)
    base = check_trace_kato(t, 0.4)
    assert abs(gram.lhs - base.lhs) <= 1e-10 * max(base.lhs, 1.0)
    assert abs(gram.rhs - base.rhs) <= 1e-10 * max(base.rhs, 1.0)


def test_weighted_trace_scalar_equalities():
    checks = check_weighted_trace_bounds(C([[0.7 + 0.2j]]), C([[1.5 - 0.5j]]), 0.3)
    for c in checks:
        assert c.status == "checked"
        assert abs(c.rel_slack) <= 1e-10


def test_weighted_trace_hand_case():
    checks = check_weighted_trace_bounds(C(np.diag([1.0, -1.0])), C(np.diag([1.0, 0.0])), 0.5)
    gram = checks[0]
    assert abs(gram.lhs - 1.0) < 1e-12 and abs(gram.rhs - 1.0) < 1e-12


def test_weighted_trace_normal_variants_flagged(rng):
    t = draw_matrix(3, "general", rng)  # almost surely not normal
    b = draw_matrix(3, "general", rng)
    checks = check_weighted_trace_bounds(t, b, 0.5)
    assert checks[2].status == STATUS_NOT_APPLICABLE
    assert checks[3].status == STATUS_NOT_APPLICABLE
    nm = draw_matrix(3, "normal", rng)
    checks = check_weighted_trace_bounds(nm, b, 0.5)
    assert all(c.status == "checked" for c in checks)


def test_alpha_symmetry_under_adjoint():
    for trial in range(50):
        rng = SeedPlan(404, trial).rng()
        n = 1 + trial % 6
        t = draw_matrix(n, "general", rng)
        alpha = (trial % 11) / 10
        a = check_trace_kato(t, alpha)
        b = check_trace_kato(t.conj().T, 1.0 - alpha)
        assert abs(a.lhs - b.lhs) <= 1e-10 * max(a.lhs, 1.0)
        assert abs(a.rhs - b.rhs) <= 1e-10 * max(a.rhs, 1.0)


def test_trace_kato_rhs_matches_singular_sums(rng):
    # Independent oracle for the right side at the symmetric exponent.
    t = draw_matrix(5, "general", rng)
    s = singular_values(t)
    c = check_trace_kato(t, 0.5)
    assert abs(c.rhs - float(np.sum(s)) ** 2) <= 1e-10 * max(c.rhs, 1.0)
    assert abs(c.lhs - abs(trace(t)) ** 2) <= 1e-12 * max(c.lhs, 1.0)


def test_scalar_equality_every_checker():
    rng = SeedPlan(888).rng()
    t = draw_matrix(1, "general", rng)
    b = draw_matrix(1, "general", rng)
    a_m = draw_matrix(1, "general", rng)
    basis = draw_orthonormal_basis(1, rng)
    for alpha in (0.0, 0.25, 0.5, 0.75, 1.0):
        assert abs(check_trace_kato(t, alpha).rel_slack) <= 1e-10
        assert abs(check_basis_bound(t, basis, alpha).rel_slack) <= 1e-10
        for c in check_product_trace(t, a_m, b, alpha):
            assert abs(c.rel_slack) <= 1e-10
        for c in check_weighted_trace_bounds(t, b, alpha):
            assert abs(c.rel_slack) <= 1e-10
    assert abs(check_basis_inf_bound(t, basis).rel_slack) <= 1e-10
    assert abs(check_sqrt_basis_bound(t, basis).rel_slack) <= 1e-10
    assert abs(check_product_trace_half(t, a_m, b).rel_slack) <= 1e-10
    nm = draw_matrix(1, "normal", rng)
    for c in check_normal_trace(nm, 0.5):
        assert abs(c.rel_slack) <= 1e-10
    for c in check_normal_product(nm, a_m, b, 0.5):
        assert abs(c.rel_slack) <= 1e-10


def test_sharpness_search_scalar_and_determinism():
    r = sharpness_search("trace-kato", 1, 50, SeedPlan(31))
    assert abs(r.best_ratio - 1.0) <= 1e-9
    r2 = sharpness_search("trace-kato", 1, 50, SeedPlan(31))
    assert r.best_ratio == r2.best_ratio and r.witness == r2.witness


def test_sharpness_search_bound_holds():
    r = sharpness_search("trace-kato", 2, 1000, SeedPlan(32))
    assert 0.0 < r.best_ratio <= 1.0 + 1e-9


def test_sharpness_search_unknown_checker():
    with pytest.raises(UnknownChecker):
        sharpness_search("no-such-checker", 2, 10, SeedPlan(1))


def test_records_are_immutable():
    c = check_trace_kato(SHIFT, 0.5)
    with pytest.raises(FrozenInstanceError):
        c.lhs = 0.0
