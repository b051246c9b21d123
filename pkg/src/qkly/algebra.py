"""The displacement algebra on n generators u_1..u_n.

Relations (q+1) u_i^2 = u_i u_{i+1} + q u_i u_{i-1} with u_0 = u_{n+1} = 0
make the squarefree monomials u_S, S a subset of {1..n}, a linear basis.
Products are computed by reducing the exponent vector of a pair of basis
monomials through the exact absorption engine; the reduction of the full
monomial u_1...u_n has degree-map value (n)_q!.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache

from .absorption import LEFTMOST, reduce_measure
from .qcartan import QContext, q_factorial


class DegreeError(ValueError):
    """Degree map applied to an element that is not homogeneous of top degree."""


class MassError(ValueError):
    """Exponent vector whose total mass does not match the requested use."""


@lru_cache(maxsize=None)
def _reduced(n: int, q: Fraction, eta: tuple):
    res = reduce_measure(QContext(n, q), eta, LEFTMOST)
    return tuple(sorted(res.probabilities.items()))


def subsets_of_size(n: int, k: int):
    """Size-k subsets of {1..n} as frozensets, in lexicographic order."""
    return [frozenset(c) for c in itertools.combinations(range(1, n + 1), k)]


def compositions(total: int, parts: int):
    """All tuples of `parts` nonnegative integers summing to `total`."""
    if parts == 1:
        yield (total,)
        return
    for head in range(total + 1):
        for rest in compositions(total - head, parts - 1):
            yield (head,) + rest


class KlyElement:
    """Linear combination of squarefree basis monomials."""

    __slots__ = ("ctx", "terms")

    def __init__(self, ctx: QContext, terms=None):
        self.ctx = ctx
        clean = {}
        for s, c in (terms or {}).items():
            s = frozenset(s)
            if not s <= frozenset(range(1, ctx.n + 1)):
                raise ValueError("basis subset outside the site range")
            c = Fraction(c)
            if c:
                clean[s] = clean.get(s, Fraction(0)) + c
        self.terms = {s: c for s, c in clean.items() if c}

    @classmethod
    def zero(cls, ctx):
        return cls(ctx, {})

    @classmethod
    def unit(cls, ctx):
        return cls(ctx, {frozenset(): Fraction(1)})

    @classmethod
    def generator(cls, ctx, i: int):
        if not 1 <= i <= ctx.n:
            raise ValueError("generator index out of range")
        return cls(ctx, {frozenset([i]): Fraction(1)})

    @classmethod
    def basis(cls, ctx, subset):
        return cls(ctx, {frozenset(subset): Fraction(1)})

    def is_zero(self):
        return not self.terms

    def homogeneous_degree(self):
        """Common size of all support subsets, or None for mixed/zero."""
        sizes = {len(s) for s in self.terms}
        return sizes.pop() if len(sizes) == 1 else None

    def coefficient(self, subset) -> Fraction:
        return self.terms.get(frozenset(subset), Fraction(0))

    def _check_ctx(self, other):
        if self.ctx != other.ctx:
            raise ValueError("elements live over different contexts")

    def __add__(self, other):
        self._check_ctx(other)
        out = dict(self.terms)
        for s, c in other.terms.items():
            out[s] = out.get(s, Fraction(0)) + c
        return KlyElement(self.ctx, out)

    def __neg__(self):
        return KlyElement(self.ctx, {s: -c for s, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = Fraction(c)
        return KlyElement(self.ctx, {s: c * v for s, v in self.terms.items()})

    def __rmul__(self, other):
        return self.scale(other)

    def __mul__(self, other):
        if not isinstance(other, KlyElement):
            return self.scale(other)
        self._check_ctx(other)
        n, q = self.ctx.n, self.ctx.q
        out = {}
        for s, cs in self.terms.items():
            for t, ct in other.terms.items():
                c = cs * ct
                if not (s & t):
                    u = s | t
                    out[u] = out.get(u, Fraction(0)) + c
                    continue
                if len(s) + len(t) > n:
                    continue
                eta = tuple((i in s) + (i in t) for i in range(1, n + 1))
                for sq, p in _reduced(n, q, eta):
                    u = frozenset(i + 1 for i, v in enumerate(sq) if v)
                    out[u] = out.get(u, Fraction(0)) + c * p
        return KlyElement(self.ctx, out)

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        out = KlyElement.unit(self.ctx)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        return (isinstance(other, KlyElement) and self.ctx == other.ctx
                and self.terms == other.terms)

    def __repr__(self):
        if not self.terms:
            return "KlyElement(0)"
        bits = []
        for s in sorted(self.terms, key=lambda x: (len(x), sorted(x))):
            name = "1" if not s else "u" + "".join(f"[{i}]" for i in sorted(s))
            bits.append(f"{self.terms[s]}*{name}")
        return "KlyElement(" + " + ".join(bits) + ")"


def kly_multiply(a: KlyElement, b: KlyElement) -> KlyElement:
    return a * b


def kly_degree(a: KlyElement) -> Fraction:
    """Degree map: defined on the top graded piece only.

    Sends the full squarefree monomial to (n)_q!; elements of lower or
    mixed degree raise DegreeError rather than returning 0.
    """
    if a.is_zero():
        return Fraction(0)
    n = a.ctx.n
    if any(len(s) != n for s in a.terms):
        raise DegreeError("degree map needs a homogeneous top-degree element")
    full = frozenset(range(1, n + 1))
    return a.terms.get(full, Fraction(0)) * q_factorial(n, a.ctx.q)


def monomial_degree(ctx: QContext, eta) -> Fraction:
    """Degree of u^eta for an exponent vector of total mass n, computed by
    multiplying out the generators one site at a time."""
    eta = tuple(int(x) for x in eta)
    if len(eta) != ctx.n:
        raise MassError("eta must have one entry per site")
    if any(x < 0 for x in eta):
        raise MassError("exponents must be nonnegative")
    if sum(eta) != ctx.n:
        raise MassError("degree map needs total mass n")
    out = KlyElement.unit(ctx)
    for i, mult in enumerate(eta, start=1):
        g = KlyElement.generator(ctx, i)
        for _ in range(mult):
            out = out * g
    return kly_degree(out)


def prob_exact(ctx: QContext, eta) -> Fraction:
    """Probability that the displacement process started at eta fills all
    of {1..n}: monomial_degree(eta) / (n)_q!."""
    return monomial_degree(ctx, eta) / q_factorial(ctx.n, ctx.q)


def structure_constants(ctx: QContext, s, t) -> KlyElement:
    """Expansion of u_S u_T in the squarefree basis."""
    return KlyElement.basis(ctx, s) * KlyElement.basis(ctx, t)
