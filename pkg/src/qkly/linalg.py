"""Exact linear algebra over the rationals.

Every value is a `fractions.Fraction`; no floating point enters any
computation. The kernel provides dense matrices, linear solving,
fraction-free determinants, inverses, kernels, ranks, an exact
definiteness test for symmetric matrices based on congruence pivoting,
and a phase-one simplex for nonnegative feasibility questions.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm


class LinAlgError(ValueError):
    """Base class for failures of the exact kernel."""


class SingularMatrixError(LinAlgError):
    """Square matrix without a unique solution / not invertible."""


class InconsistentSystemError(LinAlgError):
    """Linear system with no solution at all."""


class NotSymmetricError(LinAlgError):
    """Definiteness asked of a matrix that is not symmetric."""


POSITIVE_DEFINITE = "positive-definite"
POSITIVE_SEMIDEFINITE = "positive-semidefinite"
NEGATIVE_DEFINITE = "negative-definite"
NEGATIVE_SEMIDEFINITE = "negative-semidefinite"
INDEFINITE = "indefinite"
ZERO = "zero"


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


class Matrix:
    """Dense rational matrix, row-major.

    The entry list is owned by the instance; construction copies and
    coerces everything to Fraction. An explicit ``cols`` is only needed
    when there are zero rows.
    """

    __slots__ = ("rows", "cols", "data")

    def __init__(self, data, cols: int | None = None):
        self.data = [[_frac(x) for x in row] for row in data]
        self.rows = len(self.data)
        if self.rows:
            self.cols = len(self.data[0])
        else:
            self.cols = 0 if cols is None else cols
        if any(len(row) != self.cols for row in self.data):
            raise LinAlgError("rows of unequal length")

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls([[Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)], cols=n)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Matrix":
        return cls([[Fraction(0)] * cols for _ in range(rows)], cols=cols)

    @classmethod
    def from_columns(cls, columns, rows: int | None = None) -> "Matrix":
        if columns:
            height = len(columns[0])
            return cls([[_frac(col[i]) for col in columns] for i in range(height)])
        return cls([[] for _ in range(rows or 0)], cols=0)

    @property
    def shape(self):
        return (self.rows, self.cols)

    def __getitem__(self, key):
        i, j = key
        return self.data[i][j]

    def row(self, i):
        return list(self.data[i])

    def column(self, j):
        return [row[j] for row in self.data]

    def transpose(self) -> "Matrix":
        return Matrix([[self.data[i][j] for i in range(self.rows)] for j in range(self.cols)],
                      cols=self.rows)

    def matmul(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise LinAlgError("shape mismatch in product")
        out = []
        for i in range(self.rows):
            left = self.data[i]
            out.append([sum((left[k] * other.data[k][j] for k in range(self.cols)), Fraction(0))
                        for j in range(other.cols)])
        return Matrix(out, cols=other.cols)

    __matmul__ = matmul

    def matvec(self, v):
        if self.cols != len(v):
            raise LinAlgError("shape mismatch in matrix-vector product")
        vv = [_frac(x) for x in v]
        return [sum((row[j] * vv[j] for j in range(self.cols)), Fraction(0)) for row in self.data]

    def submatrix(self, row_idx, col_idx) -> "Matrix":
        return Matrix([[self.data[i][j] for j in col_idx] for i in row_idx], cols=len(col_idx))

    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_symmetric(self) -> bool:
        if not self.is_square():
            return False
        return all(self.data[i][j] == self.data[j][i]
                   for i in range(self.rows) for j in range(i + 1, self.cols))

    def copy(self) -> "Matrix":
        return Matrix(self.data, cols=self.cols)

    def __eq__(self, other):
        return (isinstance(other, Matrix) and self.shape == other.shape
                and self.data == other.data)

    def __repr__(self):
        return f"Matrix({self.data!r})"


def _rref(rows, ncols):
    """Full Gauss-Jordan on a list of row lists, pivoting in the first
    ``ncols`` columns only. Mutates ``rows``; returns [(row, col)] pivots."""
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        pv = rows[r][c]
        rows[r] = [x / pv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append((r, c))
        r += 1
        if r == len(rows):
            break
    return pivots


def solve(m: Matrix, b):
    """Solve m x = b exactly.

    Returns one solution vector when the system is consistent (free
    variables, if any, are set to zero). Raises InconsistentSystemError
    when no solution exists, and SingularMatrixError when a square system
    is consistent but the solution is not unique.
    """
    if m.rows != len(b):
        raise LinAlgError("right-hand side has wrong length")
    aug = [row[:] + [_frac(bi)] for row, bi in zip(m.data, b)]
    if not aug:
        return [Fraction(0)] * m.cols
    pivots = _rref(aug, m.cols)
    pivot_rows = {r for r, _ in pivots}
    for i, row in enumerate(aug):
        if i not in pivot_rows and row[m.cols]:
            raise InconsistentSystemError("no solution")
    if m.is_square() and len(pivots) < m.cols:
        raise SingularMatrixError("singular square system")
    x = [Fraction(0)] * m.cols
    for r, c in pivots:
        x[c] = aug[r][m.cols]
    return x


def det(m: Matrix) -> Fraction:
    """Determinant via fraction-free (Bareiss) elimination on an
    integerized copy."""
    if not m.is_square():
        raise LinAlgError("determinant of a non-square matrix")
    n = m.rows
    if n == 0:
        return Fraction(1)
    scale = 1
    a = []
    for row in m.data:
        den = 1
        for x in row:
            den = lcm(den, x.denominator)
        scale *= den
        a.append([int(x * den) for x in row])
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k]), None)
            if swap is None:
                return Fraction(0)
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return Fraction(sign * a[n - 1][n - 1], scale)


def inverse(m: Matrix) -> Matrix:
    if not m.is_square():
        raise LinAlgError("inverse of a non-square matrix")
    n = m.rows
    aug = [row[:] + [Fraction(1 if i == j else 0) for j in range(n)]
           for i, row in enumerate(m.data)]
    pivots = _rref(aug, n)
    if len(pivots) < n:
        raise SingularMatrixError("matrix is singular")
    return Matrix([row[n:] for row in aug], cols=n)


def nullspace(m: Matrix):
    """Basis of the right kernel, one vector per free column."""
    rows = [row[:] for row in m.data]
    pivots = _rref(rows, m.cols)
    pivot_cols = [c for _, c in pivots]
    free = [c for c in range(m.cols) if c not in pivot_cols]
    basis = []
    for f in free:
        v = [Fraction(0)] * m.cols
        v[f] = Fraction(1)
        for r, c in pivots:
            v[c] = -rows[r][f]
        basis.append(v)
    return basis


def rank(m) -> int:
    """Rank, computed on an integerized copy with gcd-normalized rows to
    keep intermediate entries small."""
    rows = m.data if isinstance(m, Matrix) else [list(r) for r in m]
    work = []
    for row in rows:
        fr = [_frac(x) for x in row]
        den = 1
        for x in fr:
            den = lcm(den, x.denominator)
        ints = [int(x * den) for x in fr]
        g = 0
        for v in ints:
            g = gcd(g, abs(v))
        if g:
            work.append([v // g for v in ints])
    if not work:
        return 0
    ncols = len(work[0])
    rk = 0
    for c in range(ncols):
        p = next((i for i in range(rk, len(work)) if work[i][c]), None)
        if p is None:
            continue
        work[rk], work[p] = work[p], work[rk]
        pivrow = work[rk]
        pv = pivrow[c]
        for i in range(rk + 1, len(work)):
            if work[i][c]:
                f = work[i][c]
                row = [a * pv - b * f for a, b in zip(work[i], pivrow)]
                g = 0
                for v in row:
                    g = gcd(g, abs(v))
                work[i] = [v // g for v in row] if g else row
        rk += 1
        if rk == len(work):
            break
    return rk


def definiteness(s: Matrix) -> str:
    """Classify a symmetric rational matrix exactly.

    Congruence pivoting on nonzero diagonal entries yields the inertia
    (Sylvester); an all-zero diagonal with a nonzero off-diagonal entry is
    indefinite outright. Returns one of the six module-level labels.
    """
    if not isinstance(s, Matrix) or not s.is_square():
        raise NotSymmetricError("need a square symmetric matrix")
    if not s.is_symmetric():
        raise NotSymmetricError("matrix is not symmetric")
    a = [row[:] for row in s.data]
    active = list(range(s.rows))
    npos = nneg = nzero = 0
    while active:
        piv = next((i for i in active if a[i][i]), None)
        if piv is None:
            if any(a[i][j] for i in active for j in active):
                return INDEFINITE
            nzero += len(active)
            break
        d = a[piv][piv]
        if d > 0:
            npos += 1
        else:
            nneg += 1
        active.remove(piv)
        for i in active:
            if a[i][piv]:
                f = a[i][piv] / d
                for j in active:
                    a[i][j] -= f * a[piv][j]
    if npos and nneg:
        return INDEFINITE
    if npos:
        return POSITIVE_DEFINITE if nzero == 0 else POSITIVE_SEMIDEFINITE
    if nneg:
        return NEGATIVE_DEFINITE if nzero == 0 else NEGATIVE_SEMIDEFINITE
    return ZERO


def lp_feasible(rows, rhs) -> bool:
    """Exact feasibility of {x >= 0 : A x = b}.

    Phase-one simplex with Bland's rule, entirely over Fraction. Returns
    True iff the system admits a nonnegative solution.
    """
    m = len(rows)
    if m == 0:
        return True
    n = len(rows[0])
    T = []
    base = []
    for i in range(m):
        r = [_frac(v) for v in rows[i]]
        bi = _frac(rhs[i])
        if bi < 0:
            r = [-v for v in r]
            bi = -bi
        T.append(r + [Fraction(0)] * m + [bi])
        base.append(n + i)
    for i in range(m):
        T[i][n + i] = Fraction(1)
    # phase-one reduced cost row for minimizing the artificial sum
    width = n + m + 1
    obj = [Fraction(0)] * width
    for i in range(m):
        for j in range(width):
            obj[j] += T[i][j]
    for j in range(n, n + m):
        obj[j] -= 1
    while True:
        e = next((j for j in range(n + m) if obj[j] > 0), None)
        if e is None:
            break
        leave = None
        best = None
        for i in range(m):
            if T[i][e] > 0:
                ratio = T[i][-1] / T[i][e]
                if best is None or ratio < best or (ratio == best and base[i] < base[leave]):
                    best = ratio
                    leave = i
        if leave is None:
            raise LinAlgError("phase-one objective unbounded")
        piv = T[leave][e]
        T[leave] = [v / piv for v in T[leave]]
        prow = T[leave]
        for i in range(m):
            if i != leave and T[i][e]:
                f = T[i][e]
                T[i] = [a - f * p for a, p in zip(T[i], prow)]
        if obj[e]:
            f = obj[e]
            obj = [a - f * p for a, p in zip(obj, prow)]
        base[leave] = e
    return obj[-1] == 0
