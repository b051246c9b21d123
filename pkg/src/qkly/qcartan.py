"""q-integers, q-factorials, and the tridiagonal q-Cartan matrix.

The matrix A(n, q) has q+1 on the diagonal, -1 on the superdiagonal and
-q on the subdiagonal. Its determinant is the q-integer (n+1)_q, all of
its principal submatrices are nonsingular, its inverse is entrywise
positive and every principal submatrix inverse is entrywise nonnegative;
`cartan_report` checks all of that exhaustively.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .linalg import Matrix, det, inverse

SUBSET_LIMIT = 12


@dataclass(frozen=True)
class QContext:
    """Number of sites n >= 1 together with a positive rational q."""

    n: int
    q: Fraction

    def __post_init__(self):
        object.__setattr__(self, "q", Fraction(self.q))
        if not isinstance(self.n, int) or self.n < 1:
            raise ValueError("n must be an integer >= 1")
        if self.q <= 0:
            raise ValueError("q must be a positive rational")


def q_int(m: int, q) -> Fraction:
    """(m)_q = 1 + q + ... + q^(m-1), summed term by term (safe at q = 1)."""
    if m < 0:
        raise ValueError("q-integer of a negative index")
    q = Fraction(q)
    total = Fraction(0)
    power = Fraction(1)
    for _ in range(m):
        total += power
        power *= q
    return total


def q_factorial(m: int, q) -> Fraction:
    """(m)_q! = (1)_q (2)_q ... (m)_q."""
    if m < 0:
        raise ValueError("q-factorial of a negative index")
    q = Fraction(q)
    out = Fraction(1)
    for i in range(1, m + 1):
        out *= q_int(i, q)
    return out


def cartan_matrix(ctx: QContext) -> Matrix:
    n, q = ctx.n, ctx.q
    data = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        data[i][i] = q + 1
        if i + 1 < n:
            data[i][i + 1] = Fraction(-1)
        if i - 1 >= 0:
            data[i][i - 1] = -q
    return Matrix(data)


def principal_submatrix(mat: Matrix, sites) -> Matrix:
    """Rows and columns restricted to the given 1-based site labels."""
    idx = [s - 1 for s in sorted(sites)]
    return mat.submatrix(idx, idx)


@dataclass
class CartanReport:
    det_value: Fraction
    det_ok: bool
    submatrices_nonsingular: bool
    inverse_positive: bool
    submatrix_inverses_nonnegative: bool

    @property
    def ok(self) -> bool:
        return (self.det_ok and self.submatrices_nonsingular
                and self.inverse_positive and self.submatrix_inverses_nonnegative)


def cartan_report(ctx: QContext) -> CartanReport:
    """Exhaustive check over all 2^n principal submatrices; refuses n > 12."""
    n = ctx.n
    if n > SUBSET_LIMIT:
        raise ValueError(f"refusing exhaustive subset check for n > {SUBSET_LIMIT}")
    a = cartan_matrix(ctx)
    d = det(a)
    det_ok = d == q_int(n + 1, ctx.q)
    inv = inverse(a)
    inverse_positive = all(x > 0 for row in inv.data for x in row)
    submatrices_nonsingular = True
    submatrix_inverses_nonnegative = True
    for r in range(1, n + 1):
        for sites in itertools.combinations(range(1, n + 1), r):
            sub = principal_submatrix(a, sites)
            if det(sub) == 0:
                submatrices_nonsingular = False
                submatrix_inverses_nonnegative = False
                continue
            sub_inv = inverse(sub)
            if any(x < 0 for row in sub_inv.data for x in row):
                submatrix_inverses_nonnegative = False
    return CartanReport(
        det_value=d,
        det_ok=det_ok,
        submatrices_nonsingular=submatrices_nonsingular,
        inverse_positive=inverse_positive,
        submatrix_inverses_nonnegative=submatrix_inverses_nonnegative,
    )
