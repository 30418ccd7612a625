"""The trace functional on the psd cone: value oracles, order properties,
homogeneity, gram and invertible-factor forms, tuple extension, weight bounds."""

import numpy as np
import pytest

from katolab.checks import STATUS_NOT_APPLICABLE
from katolab.errors import NotApplicable, NotOrdered, NotPsd, Singular
from katolab.functional import (
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
    sigma,
    tuple_check,
    tuple_sigma,
    weight_bounds,
)
from katolab.generators import SeedPlan, draw_matrix, draw_orthonormal_basis
from katolab.linalg import hermitize

C = lambda m: np.asarray(m, dtype=np.complex128)
EYE2 = np.eye(2, dtype=complex)
SIGN = C(np.diag([1.0, -1.0]))


def test_sigma_identity_middle_vanishes(rng):
    a = draw_matrix(3, "general", rng)
    p = draw_matrix(3, "positive", rng)
    fin = FunctionalInput(a, np.eye(3, dtype=complex), 0.4, p)
    assert abs(sigma(fin)) <= 1e-10


def test_sigma_hand_value():
    fin = FunctionalInput(EYE2, SIGN, 0.5, EYE2)
    assert abs(sigma(fin) - 2.0) <= 1e-12


def test_sigma_zero_weight():
    fin = FunctionalInput(EYE2, SIGN, 0.5, np.zeros((2, 2), dtype=complex))
    assert sigma(fin) == 0.0


def test_sigma_rejects_indefinite_weight():
    with pytest.raises(NotPsd):
        sigma(FunctionalInput(EYE2, SIGN, 0.5, SIGN))


def test_sigma_homogeneity():
    for trial in range(30):
        rng = SeedPlan(550, trial).rng()
        n = 1 + trial % 6
        a = draw_matrix(n, "general", rng)
        t = draw_matrix(n, "general", rng)
        p = draw_matrix(n, "positive", rng)
        alpha = (trial % 5) / 4
        base = sigma(FunctionalInput(a, t, alpha, p))
        for c in (0.5, 2.0, 10.0):
            scaled = sigma(FunctionalInput(a, t, alpha, c * p))
            assert abs(scaled - c * base) <= 1e-10 * max(abs(base) * c, 1.0)


def test_superadditive_linear_case_equality():
    c = check_superadditive(EYE2, SIGN, 0.5, EYE2, EYE2)
    assert abs(c.lhs - 4.0) <= 1e-12 and abs(c.rhs - 4.0) <= 1e-12
    assert c.passed


def test_superadditive_zero_summand(rng):
    a, t = draw_matrix(3, "general", rng), draw_matrix(3, "general", rng)
    p = draw_matrix(3, "positive", rng)
    c = check_superadditive(a, t, 0.3, p, np.zeros((3, 3), dtype=complex))
    assert abs(c.slack) <= 1e-10 * max(c.rhs, 1.0)


def test_superadditive_random_campaign():
    for trial in range(80):
        rng = SeedPlan(551, trial).rng()
        n = 1 + trial % 8
        a, t = draw_matrix(n, "general", rng), draw_matrix(n, "general", rng)
        p, q = draw_matrix(n, "positive", rng), draw_matrix(n, "positive", rng)
        assert check_superadditive(a, t, (trial % 5) / 4, p, q).rel_slack >= -1e-9


def test_monotone_equal_weights():
    p = C(np.diag([2.0, 0.5]))
    c = check_monotone(EYE2, SIGN, 0.5, p, p)
    assert abs(c.slack) <= 1e-12


def test_monotone_zero_floor_is_nonnegativity(rng):
    a, t = draw_matrix(3, "general", rng), draw_matrix(3, "general", rng)
    p = draw_matrix(3, "positive", rng)
    c = check_monotone(a, t, 0.6, p, np.zeros((3, 3), dtype=complex))
    assert c.lhs == 0.0 and c.rhs >= -1e-9


def test_monotone_hand_case():
    c = check_monotone(EYE2, SIGN, 0.5, 2 * EYE2, EYE2)
    assert abs(c.lhs - 2.0) <= 1e-12 and abs(c.rhs - 4.0) <= 1e-12


def test_monotone_rejects_unordered():
    with pytest.raises(NotOrdered):
        check_monotone(EYE2, SIGN, 0.5, C(np.diag([1.0, 0.0])), C(np.diag([0.0, 1.0])))


def test_sandwich_scaling_case():
    # P = cQ with m <= c <= M; sigma is linear in the weight.
    q = C(np.diag([1.0, 2.0]))
    hi, lo = check_sandwich(EYE2, SIGN, 0.5, 1.5 * q, q, 1.0, 2.0)
    assert hi.passed and lo.passed


def test_sandwich_degenerate_equal_bounds():
    hi, lo = check_sandwich(EYE2, SIGN, 0.5, EYE2, EYE2, 1.0, 1.0)
    assert abs(hi.slack) <= 1e-12 and abs(lo.slack) <= 1e-12


def test_sandwich_spectral_bounds_of_weight(rng):
    # Q = identity with m, M the extreme eigenvalues of P.
    p = C(np.diag([1.0, 3.0]))
    hi, lo = check_sandwich(EYE2, SIGN, 0.5, p, EYE2, 1.0, 3.0)
    assert hi.passed and lo.passed


def test_sandwich_rejects_bad_constants():
    with pytest.raises(ValueError):
        check_sandwich(EYE2, SIGN, 0.5, EYE2, EYE2, 2.0, 1.0)
    with pytest.raises(NotOrdered):
        check_sandwich(EYE2, SIGN, 0.5, 5 * EYE2, EYE2, 1.0, 2.0)


def test_gram_forms_hand_case():
    v, u = C(np.diag([2.0, 0.0])), C(np.diag([1.0, 0.0]))
    superadd, mono = check_gram_forms(EYE2, SIGN, 0.5, v, u)
    # All three brackets vanish for this weight pattern.
    assert abs(superadd.lhs) <= 1e-12 and abs(superadd.rhs) <= 1e-12
    assert abs(mono.lhs) <= 1e-12 and abs(mono.rhs) <= 1e-12
    assert superadd.passed and mono.passed


def test_gram_forms_equal_factors_equality(rng):
    a, t = draw_matrix(3, "general", rng), draw_matrix(3, "general", rng)
    v = draw_matrix(3, "general", rng)
    _, mono = check_gram_forms(a, t, 0.5, v, v)
    assert abs(mono.slack) <= 1e-10 * max(mono.rhs, 1.0)


def test_gram_forms_zero_second_factor(rng):
    a, t = draw_matrix(3, "general", rng), draw_matrix(3, "general", rng)
    v = draw_matrix(3, "general", rng)
    superadd, mono = check_gram_forms(a, t, 0.5, v, np.zeros((3, 3), dtype=complex))
    assert superadd.passed and mono.passed
    assert superadd.rhs >= -1e-9


def test_gram_forms_not_applicable_when_unordered():
    v, u = C(np.diag([1.0, 0.0])), C(np.diag([0.0, 1.0]))
    _, mono = check_gram_forms(EYE2, SIGN, 0.5, v, u)
    assert mono.status == STATUS_NOT_APPLICABLE


def test_invertible_sandwich_scalar_factor(rng):
    a, t = draw_matrix(3, "general", rng), draw_matrix(3, "general", rng)
    u = 1.7 * np.eye(3, dtype=complex)
    hi, lo = check_invertible_sandwich(a, t, 0.5, u)
    assert abs(hi.slack) <= 1e-9 * max(hi.rhs, 1.0)
    assert abs(lo.slack) <= 1e-9 * max(lo.rhs, 1.0)


def test_invertible_sandwich_unitary_equality(rng):
    a, t = draw_matrix(3, "general", rng), draw_matrix(3, "general", rng)
    u = draw_orthonormal_basis(3, rng)
    hi, lo = check_invertible_sandwich(a, t, 0.5, u)
    assert abs(hi.slack) <= 1e-9 * max(hi.rhs, 1.0)
    assert abs(lo.slack) <= 1e-9 * max(lo.rhs, 1.0)


def test_invertible_sandwich_random(rng):
    a, t = draw_matrix(4, "general", rng), draw_matrix(4, "general", rng)
    w1, w2 = draw_orthonormal_basis(4, rng), draw_orthonormal_basis(4, rng)
    u = (w1 * np.linspace(0.5, 1.5, 4)) @ w2.conj().T
    hi, lo = check_invertible_sandwich(a, t, 0.3, u)
    assert hi.passed and lo.passed


def test_invertible_sandwich_rejects_singular(rng):
    a, t = draw_matrix(2, "general", rng), draw_matrix(2, "general", rng)
    with pytest.raises(Singular):
        check_invertible_sandwich(a, t, 0.5, C(np.diag([1.0, 0.0])))


# ---------------------------------------------------------------------------
# tuples


def _tuple_of(n, k, seed, with_z=True, with_w=True):
    rng = SeedPlan(seed).rng()
    ts = tuple(draw_matrix(n, "general", rng) for _ in range(k))
    a_s = tuple(draw_matrix(n, "general", rng) for _ in range(k))
    ps = tuple(draw_matrix(n, "positive", rng) for _ in range(k))
    zs = tuple(complex(z) for z in (rng.standard_normal(k) + 1j * rng.standard_normal(k)))
    ws = tuple(float(w) for w in rng.uniform(0.0, 2.0, k))
    return OperatorTuple(
        ts, a_s, ps, zs if with_z else (), ws if with_w else ()
    )


def test_single_component_tuple_matches_sigma():
    tup = _tuple_of(3, 1, 99, with_z=False, with_w=False)
    fin = FunctionalInput(tup.a_ops[0], tup.t_ops[0], 0.35, tup.p_ops[0])
    assert abs(tuple_sigma(tup, 0.35) - sigma(fin)) <= 1e-12


def test_tuple_check_single_component_matches_sigma_parts():
    # With one component and z = 1 the squared bound carries exactly the
    # functional: sqrt(rhs) - sqrt(lhs) is sigma of the same inputs.
    tup = _tuple_of(2, 1, 100, with_z=False, with_w=False)
    c = tuple_check(tup, 0.5)
    fin = FunctionalInput(tup.a_ops[0], tup.t_ops[0], 0.5, tup.p_ops[0])
    gap = np.sqrt(c.rhs) - np.sqrt(c.lhs)
    assert abs(gap - sigma(fin)) <= 1e-10 * max(abs(gap), 1.0)


def test_tuple_check_identity_middle_equality_for_nonneg_z():
    # Diagonal data, identity middle factors, nonnegative scalars: equality,
    # verified against a plain loop oracle.
    eye = np.eye(2, dtype=complex)
    a1, a2 = C(np.diag([1.0, 2.0])), C(np.diag([0.5, 1.5]))
    p1, p2 = C(np.diag([1.0, 0.3])), C(np.diag([0.7, 2.0]))
    zs = (0.8, 1.7)
    tup = OperatorTuple((eye, eye), (a1, a2), (p1, p2), zs)
    c = tuple_check(tup, 0.4)
    mid = 0.0
    for z, p, a in zip(zs, (p1, p2), (a1, a2)):
        for i in range(2):
            mid += z * (p[i, i] * a[i, i] * np.conj(a[i, i])).real
    assert abs(c.lhs - mid**2) <= 1e-10 * max(mid**2, 1.0)
    assert abs(c.rhs - mid**2) <= 1e-10 * max(mid**2, 1.0)


def test_tuple_check_zero_weights():
    tup = OperatorTuple((EYE2,), (EYE2,), (EYE2,), (0.0,))
    c = tuple_check(tup, 0.5)
    assert c.lhs == 0.0 and c.rhs == 0.0 and c.passed


def test_tuple_sigma_identity_middles_vanish():
    eye = np.eye(3, dtype=complex)
    rng = SeedPlan(101).rng()
    tup = OperatorTuple(
        (eye, eye),
        (draw_matrix(3, "general", rng), draw_matrix(3, "general", rng)),
        (draw_matrix(3, "positive", rng), draw_matrix(3, "positive", rng)),
    )
    assert abs(tuple_sigma(tup, 0.5)) <= 1e-10


def test_tuple_sigma_two_component_diagonal_oracle():
    # Hand arithmetic on diagonal data.
    t1, t2 = C(np.diag([1.0, -1.0])), C(np.diag([2.0, 0.5]))
    a1 = a2 = EYE2
    p1, p2 = C(np.diag([1.0, 2.0])), C(np.diag([0.5, 0.5]))
    tup = OperatorTuple((t1, t2), (a1, a2), (p1, p2))
    alpha = 0.5
    left = sum(p[i, i].real * abs(t[i, i]) for p, t in ((p1, t1), (p2, t2)) for i in range(2))
    mid = abs(sum(p[i, i].real * t[i, i] for p, t in ((p1, t1), (p2, t2)) for i in range(2)))
    expected = left - mid  # both trace factors coincide at the symmetric exponent
    assert abs(tuple_sigma(tup, alpha) - expected) <= 1e-12


def test_tuple_order_properties():
    for trial in range(40):
        rng = SeedPlan(553, trial).rng()
        n, k = 1 + trial % 5, 2 + trial % 2
        ts = tuple(draw_matrix(n, "general", rng) for _ in range(k))
        a_s = tuple(draw_matrix(n, "general", rng) for _ in range(k))
        qs = tuple(draw_matrix(n, "positive", rng) for _ in range(k))
        rs = tuple(draw_matrix(n, "positive", rng) for _ in range(k))
        alpha = (trial % 5) / 4
        tup_q = OperatorTuple(ts, a_s, qs)
        assert check_tuple_superadditive(tup_q, rs, alpha).rel_slack >= -1e-9
        tup_p = OperatorTuple(ts, a_s, tuple(q + r for q, r in zip(qs, rs)))
        assert check_tuple_monotone(tup_p, qs, alpha).rel_slack >= -1e-9


def test_tuple_sandwich_constructive():
    rng = SeedPlan(554).rng()
    n, k = 3, 2
    ts = tuple(draw_matrix(n, "general", rng) for _ in range(k))
    a_s = tuple(draw_matrix(n, "general", rng) for _ in range(k))
    qs, ps = [], []
    m, big_m = 0.5, 0.5
    for _ in range(k):
        q = draw_matrix(n, "positive", rng) + 0.05 * np.eye(n, dtype=complex)
        r = draw_matrix(n, "positive", rng)
        qs.append(q)
        ps.append(m * q + r)
        lam_max = float(np.linalg.eigvalsh(hermitize(r))[-1])
        lam_min = float(np.linalg.eigvalsh(hermitize(q))[0])
        big_m = max(big_m, m + lam_max / lam_min * 1.01 + 1e-6)
    tup = OperatorTuple(ts, a_s, tuple(ps))
    hi, lo = check_tuple_sandwich(tup, tuple(qs), m, big_m, 0.5)
    assert hi.passed and lo.passed


def test_weight_bounds_equal_weights_equality():
    tup = _tuple_of(3, 2, 102, with_z=False, with_w=False)
    tup = OperatorTuple(tup.t_ops, tup.a_ops, tup.p_ops, (), (1.7, 1.7))
    hi, lo = weight_bounds(tup, 0.5)
    assert abs(hi.slack) <= 1e-10 * max(abs(hi.rhs), 1.0)
    assert abs(lo.slack) <= 1e-10 * max(abs(lo.rhs), 1.0)


def test_weight_bounds_single_component_double_equality():
    tup = _tuple_of(2, 1, 103, with_z=False, with_w=False)
    tup = OperatorTuple(tup.t_ops, tup.a_ops, tup.p_ops, (), (0.9,))
    hi, lo = weight_bounds(tup, 0.3)
    assert abs(hi.slack) <= 1e-10 * max(abs(hi.rhs), 1.0)
    assert abs(lo.slack) <= 1e-10 * max(abs(lo.rhs), 1.0)


def test_weight_bounds_diagonal_oracle():
    # p = (1, 2) on diagonal 2x2 data, explicit sums at the symmetric exponent.
    t1, t2 = C(np.diag([1.0, -1.0])), C(np.diag([0.5, 2.0]))
    a1, a2 = C(np.diag([1.0, 1.0])), C(np.diag([2.0, 0.0]))
    ws = (1.0, 2.0)
    tup = OperatorTuple((t1, t2), (a1, a2), (EYE2, EYE2), (), ws)

    def bracket(weights):
        left = mid = 0.0
        for w, a, t in zip(weights, (a1, a2), (t1, t2)):
            for i in range(2):
                left += w * abs(a[i, i]) ** 2 * abs(t[i, i])
        mid = abs(
            sum(
                w * abs(a[i, i]) ** 2 * t[i, i]
                for w, a, t in zip(weights, (a1, a2), (t1, t2))
                for i in range(2)
            )
        )
        return left - mid

    hi, lo = weight_bounds(tup, 0.5)
    assert abs(lo.rhs - bracket(ws)) <= 1e-12
    assert abs(hi.rhs - 2.0 * bracket((1.0, 1.0))) <= 1e-12
    assert abs(lo.lhs - 1.0 * bracket((1.0, 1.0))) <= 1e-12
    assert hi.passed and lo.passed


def test_weight_bounds_all_zero_rejected():
    tup = _tuple_of(2, 2, 104, with_z=False, with_w=False)
    tup = OperatorTuple(tup.t_ops, tup.a_ops, tup.p_ops, (), (0.0, 0.0))
    with pytest.raises(NotApplicable):
        weight_bounds(tup, 0.5)


def test_operator_tuple_validation():
    with pytest.raises(ValueError):
        OperatorTuple((), ())
    with pytest.raises(ValueError):
        OperatorTuple((EYE2,), (EYE2, EYE2))
    with pytest.raises(ValueError):
        OperatorTuple((EYE2,), (EYE2,), p_weights=(-1.0,))
