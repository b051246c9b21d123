"""q-integers, q-factorials, and the tridiagonal displacement matrix."""

from fractions import Fraction

import pytest

from qkly.linalg import det
from qkly.qcartan import (
    QContext,
    cartan_matrix,
    cartan_report,
    principal_submatrix,
    q_factorial,
    q_int,
)

F = Fraction

Q_GRID = [F(1, 3), F(1, 2), F(1), F(2), F(3)]


def test_q_int_examples():
    for q in Q_GRID:
        assert q_int(1, q) == F(1)
        assert q_int(0, q) == F(0)
    assert q_int(3, F(2)) == F(7)
    assert q_int(2, F(1, 2)) == F(3, 2)
    assert q_int(4, F(1)) == F(4)


def test_q_int_rejects_negative():
    with pytest.raises(ValueError):
        q_int(-1, F(2))


def test_q_factorial_examples():
    for q in Q_GRID:
        assert q_factorial(0, q) == F(1)
    assert q_factorial(2, F(2)) == F(3)
    assert q_factorial(3, F(2)) == F(21)
    assert q_factorial(4, F(1)) == F(24)


def test_q_int_difference_identity():
    # (a)_q - (b)_q = q^b (a-b)_q
    for q in Q_GRID + [F(7)]:
        for a in range(13):
            for b in range(a):
                assert q_int(a, q) - q_int(b, q) == q ** b * q_int(a - b, q)


def test_qcontext_validation():
    QContext(1, F(1, 7))
    with pytest.raises(ValueError):
        QContext(0, F(2))
    with pytest.raises(ValueError):
        QContext(2, F(0))
    with pytest.raises(ValueError):
        QContext(2, F(-1))


def test_matrix_entries_n1():
    for q in Q_GRID:
        m = cartan_matrix(QContext(1, q))
        assert m.data == [[q + 1]]


def test_matrix_entries_n2_bias2():
    m = cartan_matrix(QContext(2, F(2)))
    assert m.data == [[F(3), F(-1)], [F(-2), F(3)]]


def test_matrix_n3_unit_bias_is_type_a_cartan():
    m = cartan_matrix(QContext(3, F(1)))
    assert m.data == [
        [F(2), F(-1), F(0)],
        [F(-1), F(2), F(-1)],
        [F(0), F(-1), F(2)],
    ]


def test_determinant_formula():
    for n in range(1, 9):
        for q in Q_GRID:
            assert det(cartan_matrix(QContext(n, q))) == q_int(n + 1, q)


def test_principal_submatrix():
    m = cartan_matrix(QContext(3, F(2)))
    sub = principal_submatrix(m, [1, 3])
    assert sub.data == [[F(3), F(0)], [F(0), F(3)]]
    sub2 = principal_submatrix(m, [2, 3])
    assert sub2.data == [[F(3), F(-1)], [F(-2), F(3)]]


def test_report_n2_bias2():
    rep = cartan_report(QContext(2, F(2)))
    assert rep.det_value == F(7)
    assert rep.det_ok
    assert rep.submatrices_nonsingular
    assert rep.inverse_positive
    assert rep.submatrix_inverses_nonnegative
    assert rep.ok


def test_report_n1_all_q():
    for q in Q_GRID:
        rep = cartan_report(QContext(1, q))
        assert rep.ok and rep.det_value == q + 1


def test_report_n3_bias2_det():
    rep = cartan_report(QContext(3, F(2)))
    assert rep.ok and rep.det_value == F(15)


def test_report_exhaustive_small():
    for n in (2, 3, 4):
        for q in (F(1, 2), F(2)):
            assert cartan_report(QContext(n, q)).ok


def test_report_size_guard():
    with pytest.raises(ValueError):
        cartan_report(QContext(13, F(2)))
