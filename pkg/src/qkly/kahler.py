"""Kahler-package checks for the displacement algebra.

With a strictly positive class l = sum a_i u_i, the degree pairings
deg(l^(n-2k) m m') must be nondegenerate in every degree (hard
Lefschetz), the paired primitive forms must be definite with alternating
sign (Hodge-Riemann), and the plain degree pairing between complementary
degrees must be nondegenerate (Poincare duality). All checks are exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .algebra import KlyElement, compositions, kly_degree, monomial_degree, prob_exact, subsets_of_size
from .linalg import Matrix, POSITIVE_DEFINITE, definiteness, det, nullspace
from .qcartan import QContext, q_factorial


class DegreeRangeError(ValueError):
    pass


@dataclass(frozen=True)
class LefschetzClass:
    """Coefficients of a candidate Lefschetz class; all must be > 0."""

    coefficients: tuple

    def __post_init__(self):
        coeffs = tuple(Fraction(c) for c in self.coefficients)
        object.__setattr__(self, "coefficients", coeffs)
        if not coeffs:
            raise ValueError("empty coefficient vector")
        if any(c <= 0 for c in coeffs):
            raise ValueError("Lefschetz classes need strictly positive coefficients")

    def to_element(self, ctx: QContext) -> KlyElement:
        if len(self.coefficients) != ctx.n:
            raise ValueError("coefficient count must equal n")
        return KlyElement(ctx, {frozenset([i + 1]): c
                                for i, c in enumerate(self.coefficients)})


def _check_k(ctx, k):
    if not 0 <= k <= ctx.n // 2:
        raise DegreeRangeError(f"k must lie in [0, {ctx.n // 2}]")


def pairing_matrix(ctx: QContext, k: int, ell: LefschetzClass) -> Matrix:
    """Matrix of (m, m') -> deg(l^(n-2k) m m') over the size-k basis."""
    _check_k(ctx, k)
    le = ell.to_element(ctx)
    mid = le ** (ctx.n - 2 * k)
    basis = [KlyElement.basis(ctx, s) for s in subsets_of_size(ctx.n, k)]
    prods = [b * mid for b in basis]
    return Matrix([[kly_degree(prods[i] * basis[j]) for j in range(len(basis))]
                   for i in range(len(basis))])


def dual_pairing_matrix(ctx: QContext, k: int) -> Matrix:
    """Degree pairing between the size-k and size-(n-k) bases."""
    rows = [KlyElement.basis(ctx, s) for s in subsets_of_size(ctx.n, k)]
    cols = [KlyElement.basis(ctx, s) for s in subsets_of_size(ctx.n, ctx.n - k)]
    return Matrix([[kly_degree(r * c) for c in cols] for r in rows])


def check_poincare(ctx: QContext) -> dict:
    return {k: det(dual_pairing_matrix(ctx, k)) != 0 for k in range(ctx.n // 2 + 1)}


def check_hl(ctx: QContext, ell: LefschetzClass) -> dict:
    return {k: det(pairing_matrix(ctx, k, ell)) != 0 for k in range(ctx.n // 2 + 1)}


def primitive_basis(ctx: QContext, k: int, ell: LefschetzClass):
    """Kernel of multiplication by l^(n-2k+1) from degree k, as elements."""
    _check_k(ctx, k)
    le = ell.to_element(ctx)
    lift = le ** (ctx.n - 2 * k + 1)
    basis_k = subsets_of_size(ctx.n, k)
    top = ctx.n - k + 1
    basis_m = subsets_of_size(ctx.n, top) if top <= ctx.n else []
    index_m = {s: i for i, s in enumerate(basis_m)}
    columns = []
    for s in basis_k:
        img = KlyElement.basis(ctx, s) * lift
        col = [Fraction(0)] * len(basis_m)
        for t, c in img.terms.items():
            col[index_m[t]] = c
        columns.append(col)
    if basis_m:
        mat = Matrix.from_columns(columns)
    else:
        mat = Matrix.zeros(0, len(basis_k))
    kernel = nullspace(mat)
    out = []
    for vec in kernel:
        terms = {s: c for s, c in zip(basis_k, vec) if c}
        out.append(KlyElement(ctx, terms))
    return out


def check_hr(ctx: QContext, ell: LefschetzClass) -> dict:
    """(-1)^k deg(l^(n-2k) p p') must be positive definite on primitives."""
    le = ell.to_element(ctx)
    verdicts = {}
    for k in range(ctx.n // 2 + 1):
        prim = primitive_basis(ctx, k, ell)
        if not prim:
            verdicts[k] = True
            continue
        mid = le ** (ctx.n - 2 * k)
        sign = Fraction(-1 if k % 2 else 1)
        gram = [[sign * kly_degree(prim[i] * prim[j] * mid)
                 for j in range(len(prim))] for i in range(len(prim))]
        verdicts[k] = definiteness(Matrix(gram)) == POSITIVE_DEFINITE
    return verdicts


def volume_polynomial(ctx: QContext) -> dict:
    """Coefficients of deg((x_1 u_1 + ... + x_n u_n)^n): the coefficient of
    x^eta is (n! / prod eta_i!) * monomial_degree(eta)."""
    n = ctx.n
    out = {}
    for eta in compositions(n, n):
        multi = math.factorial(n)
        for e in eta:
            multi //= math.factorial(e)
        out[eta] = multi * monomial_degree(ctx, eta)
    return out


def probability_polynomial(ctx: QContext) -> dict:
    """Coefficients of sum_eta p(eta) x^eta over exponent vectors of mass n."""
    return {eta: prob_exact(ctx, eta) for eta in compositions(ctx.n, ctx.n)}


@dataclass
class LogConcavityViolation:
    eta: tuple
    site: int
    lhs: Fraction
    rhs: Fraction


def _shifted_prob(ctx, eta, i, offset):
    j = i + offset
    if not 1 <= j <= ctx.n:
        return Fraction(0)
    shifted = list(eta)
    shifted[i - 1] -= 1
    shifted[j - 1] += 1
    return prob_exact(ctx, tuple(shifted))


def check_log_concavity(ctx: QContext):
    """p(eta)^2 >= p(eta shifted left) * p(eta shifted right) for every
    mass-n exponent vector and every site with multiplicity >= 2; shifts
    landing outside {1..n} count as probability 0. Returns violations."""
    violations = []
    for eta in compositions(ctx.n, ctx.n):
        p = prob_exact(ctx, eta)
        for i in range(1, ctx.n + 1):
            if eta[i - 1] < 2:
                continue
            lhs = p * p
            rhs = _shifted_prob(ctx, eta, i, -1) * _shifted_prob(ctx, eta, i, +1)
            if lhs < rhs:
                violations.append(LogConcavityViolation(eta, i, lhs, rhs))
    return violations
