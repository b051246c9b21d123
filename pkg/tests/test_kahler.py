"""Pairing matrices, the Kahler-type package, volume polynomial, log-concavity.

The displayed two-sided shift inequality is checked exactly as stated, and
the suite freezes its true outcome: it holds at unit bias but genuinely
fails for q != 1 from n = 3 on (first at eta = (0,3,0)). The violation
values are pinned as regression oracles; the exchange-form inequality,
which moves one unit i -> j while the other factor moves j -> i, is
verified to hold everywhere as a consistency check on the same numbers.
"""

import random
from fractions import Fraction

import pytest

from qkly.algebra import KlyElement, compositions, kly_degree, kly_multiply
from qkly.kahler import (
    DegreeRangeError,
    LefschetzClass,
    check_hl,
    check_hr,
    check_log_concavity,
    check_poincare,
    pairing_matrix,
    primitive_basis,
    probability_polynomial,
    volume_polynomial,
)
from qkly.linalg import det
from qkly.qcartan import QContext, q_factorial

F = Fraction


def _ones(n):
    return LefschetzClass((1,) * n)


def test_pairing_matrix_examples():
    ctx = QContext(2, F(2))
    ell = _ones(2)
    assert pairing_matrix(ctx, 1, ell).data == [[F(1), F(3)], [F(3), F(2)]]
    assert pairing_matrix(ctx, 0, ell).data == [[F(9)]]


def test_pairing_matrix_top_entry_positive():
    rng = random.Random(31)
    for n in (1, 2, 3):
        for q in (F(1, 2), F(3)):
            ctx = QContext(n, q)
            coeffs = tuple(F(rng.randint(1, 9), rng.randint(1, 4)) for _ in range(n))
            m = pairing_matrix(ctx, 0, LefschetzClass(coeffs))
            assert m.data[0][0] > 0


def test_pairing_matrix_degree_range():
    with pytest.raises(DegreeRangeError):
        pairing_matrix(QContext(2, F(2)), 2, _ones(2))


def test_lefschetz_class_rejects_boundary():
    with pytest.raises(ValueError):
        LefschetzClass((1, 0))
    with pytest.raises(ValueError):
        LefschetzClass((1, -2))


def test_poincare_n2():
    ctx = QContext(2, F(2))
    assert det(pairing_matrix(ctx, 1, _ones(2))) == F(-7)
    assert check_poincare(ctx) == {0: True, 1: True}


def test_poincare_small_grid():
    for n in (1, 2, 3, 4):
        for q in (F(1, 2), F(1), F(2), F(3)):
            assert all(check_poincare(QContext(n, q)).values())


def test_hl_examples():
    ctx = QContext(2, F(2))
    res = check_hl(ctx, _ones(2))
    assert res == {0: True, 1: True}
    res4 = check_hl(QContext(4, F(3)), _ones(4))
    assert all(res4.values())


def test_hr_n2_primitive_value_63():
    ctx = QContext(2, F(2))
    ell = _ones(2)
    basis = primitive_basis(ctx, 1, ell)
    assert len(basis) == 1
    v = basis[0]
    # primitive direction is proportional to 5 u1 - 4 u2
    c1 = v.terms.get(frozenset({1}), F(0))
    c2 = v.terms.get(frozenset({2}), F(0))
    assert c1 * (-4) == c2 * 5
    hand = KlyElement(ctx, {frozenset({1}): F(5), frozenset({2}): F(-4)})
    assert kly_degree(kly_multiply(hand, hand)) == F(-63)
    assert check_hr(ctx, ell) == {0: True, 1: True}


def test_hr_n1_trivial():
    for q in (F(1, 3), F(1), F(4)):
        assert check_hr(QContext(1, q), LefschetzClass((1,))) == {0: True}


def test_primitive_dimensions():
    # Lefschetz decomposition: dim of the primitive part is C(n,k) - C(n,k-1)
    import math
    for n in (2, 3, 4):
        ctx = QContext(n, F(2))
        ell = _ones(n)
        for k in range(n // 2 + 1):
            expected = math.comb(n, k) - (math.comb(n, k - 1) if k else 0)
            assert len(primitive_basis(ctx, k, ell)) == expected


def test_random_ell_package():
    rng = random.Random(2024)
    for n in (2, 3):
        for q in (F(1, 2), F(2)):
            ctx = QContext(n, q)
            for _ in range(20):
                coeffs = tuple(F(rng.randint(1, 12), rng.randint(1, 5))
                               for _ in range(n))
                ell = LefschetzClass(coeffs)
                assert all(check_hl(ctx, ell).values())
                assert all(check_hr(ctx, ell).values())


def test_scaling_invariance():
    rng = random.Random(8)
    ctx = QContext(3, F(2))
    for _ in range(5):
        coeffs = tuple(F(rng.randint(1, 9)) for _ in range(3))
        ell = LefschetzClass(coeffs)
        scaled = LefschetzClass(tuple(F(7, 2) * c for c in coeffs))
        assert check_hl(ctx, ell) == check_hl(ctx, scaled)
        assert check_hr(ctx, ell) == check_hr(ctx, scaled)


def test_volume_polynomial_n2():
    vol = volume_polynomial(QContext(2, F(2)))
    assert vol == {(2, 0): F(1), (1, 1): F(6), (0, 2): F(2)}


def test_volume_polynomial_n1():
    for q in (F(1, 2), F(5)):
        assert volume_polynomial(QContext(1, q)) == {(1,): F(1)}


def test_volume_polynomial_n3_unit_bias_entry():
    vol = volume_polynomial(QContext(3, F(1)))
    assert vol[(1, 2, 0)] == F(12)


def test_volume_coefficients_nonnegative_and_multilinear_entry():
    import math
    for n in (2, 3, 4):
        for q in (F(1, 2), F(2)):
            ctx = QContext(n, q)
            vol = volume_polynomial(ctx)
            assert all(c >= 0 for c in vol.values())
            assert vol[tuple([1] * n)] == math.factorial(n) * q_factorial(n, q)


def test_probability_polynomial_relates_to_volume():
    import math
    ctx = QContext(3, F(2))
    vol = volume_polynomial(ctx)
    probs = probability_polynomial(ctx)
    fact = q_factorial(3, F(2))
    assert probs[(1, 1, 1)] == F(1)
    for eta, p in probs.items():
        multinomial = math.factorial(3)
        for c in eta:
            multinomial //= math.factorial(c)
        assert vol.get(eta, F(0)) == multinomial * p * fact


def test_log_concavity_clean_cases():
    assert check_log_concavity(QContext(2, F(2))) == []
    assert check_log_concavity(QContext(2, F(1, 2))) == []
    for n in (1, 2, 3, 4):
        assert check_log_concavity(QContext(n, F(1))) == []


def test_log_concavity_holding_instances():
    # (2,0) at i=1: left shift exits, so the right side is 0
    ctx = QContext(2, F(2))
    p = F(1, 3)
    assert p * p >= 0
    # (1,2,0) at i=2 under unit bias: 4/9 >= (1/3) * 1
    from qkly.algebra import prob_exact
    ctx3 = QContext(3, F(1))
    assert prob_exact(ctx3, (1, 2, 0)) ** 2 >= \
        prob_exact(ctx3, (2, 1, 0)) * prob_exact(ctx3, (1, 1, 1))


def test_log_concavity_known_failure_n3():
    # The two-sided shift inequality fails off unit bias; the engine must
    # report it rather than mask it. Values triple-checked by hand,
    # by the exact chain, and by simulation.
    violations = check_log_concavity(QContext(3, F(2)))
    assert len(violations) == 1
    v = violations[0]
    assert v.eta == (0, 3, 0)
    assert v.site == 2
    assert v.lhs == F(16, 49)
    assert v.rhs == F(18, 49)


def test_log_concavity_failure_counts_and_mirror_symmetry():
    for n, expected in ((3, 1), (4, 8)):
        for q in (F(2), F(1, 2)):
            assert len(check_log_concavity(QContext(n, q))) == expected


def test_exchange_form_log_concavity_holds():
    # one unit i -> j against one unit j -> i; this variant has no
    # counterexamples anywhere on the tested grid
    for n in (2, 3, 4):
        for q in (F(1, 2), F(2), F(3)):
            ctx = QContext(n, q)
            probs = probability_polynomial(ctx)

            def p(vec):
                if any(c < 0 for c in vec):
                    return F(0)
                return probs.get(tuple(vec), F(0))

            for eta in compositions(n, n):
                base = p(eta) ** 2
                for i in range(n):
                    for j in range(n):
                        if i == j:
                            continue
                        up = list(eta)
                        up[i] += 1
                        up[j] -= 1
                        down = list(eta)
                        down[i] -= 1
                        down[j] += 1
                        assert base >= p(up) * p(down)
