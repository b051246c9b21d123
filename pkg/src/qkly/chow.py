"""Chow rings of finite projective spaces PG(n, q) at desk scale.

Variables are the proper nonzero linear subspaces of F_q^(n+1), held in
reduced row echelon form so each subspace has one canonical key. The
ring is presented by two ideals: differences of inclusive hyperplane
sums, and products of incomparable subspaces. Graded pieces are built
by exact sparse elimination over chain-supported monomials; nothing is
floated and no Groebner machinery is involved.

On top of the ring sit the degree-1 classes alpha (a hyperplane sum),
L_i and gamma_i (q-integer weighted combinations), the degree map
normalized by deg(alpha^n) = 1, and the dictionary checks relating all
of this to the displacement algebra: gamma_i = q^i L_i, the quadratic
relation for gamma, the mirrored relation for L, and the candidate
generator assignments tested by `verify_theorem1`.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from .algebra import compositions, monomial_degree
from .qcartan import QContext, q_factorial, q_int

FIELD_SIZES = (2, 3, 4, 5)
DIM_LIMIT = 3


class SizeGuardError(ValueError):
    pass


def _field_tables(q: int):
    """Addition/multiplication tables for F_q, q in {2, 3, 4, 5}.

    The three prime sizes are plain modular arithmetic; size 4 is the
    field of polynomials over F_2 modulo x^2 + x + 1, elements encoded
    by their coefficient bits.
    """
    if q in (2, 3, 5):
        add = [[(a + b) % q for b in range(q)] for a in range(q)]
        mul = [[(a * b) % q for b in range(q)] for a in range(q)]
    elif q == 4:
        def poly_mul(a, b):
            r = 0
            while b:
                if b & 1:
                    r ^= a
                b >>= 1
                a <<= 1
                if a & 4:
                    a ^= 0b111
            return r

        add = [[a ^ b for b in range(4)] for a in range(4)]
        mul = [[poly_mul(a, b) for b in range(4)] for a in range(4)]
    else:
        raise SizeGuardError(f"field size must be one of {FIELD_SIZES}")
    neg = [next(b for b in range(q) if add[a][b] == 0) for a in range(q)]
    inv = [0] + [next(b for b in range(1, q) if mul[a][b] == 1) for a in range(1, q)]
    return add, mul, neg, inv


class GaloisField:
    """Table-driven arithmetic in F_q for the four supported sizes."""

    def __init__(self, q: int):
        self.q = q
        self.add_t, self.mul_t, self.neg_t, self.inv_t = _field_tables(q)

    def add(self, a, b):
        return self.add_t[a][b]

    def sub(self, a, b):
        return self.add_t[a][self.neg_t[b]]

    def mul(self, a, b):
        return self.mul_t[a][b]

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("no inverse of zero")
        return self.inv_t[a]


@dataclass(frozen=True)
class Flat:
    """A subspace given by its reduced row echelon basis rows."""

    rows: tuple

    @property
    def rank(self) -> int:
        return len(self.rows)

    def label(self) -> str:
        return "/".join("".join(str(x) for x in row) for row in self.rows)


def _contains(field: GaloisField, small: Flat, big: Flat) -> bool:
    """Whether every basis row of `small` lies in the row space of `big`.

    `big` is already in echelon form, so one elimination sweep per row
    settles membership.
    """
    pivots = []
    for row in big.rows:
        c = next(j for j, x in enumerate(row) if x)
        pivots.append((c, row))
    for row in small.rows:
        work = list(row)
        for c, brow in pivots:
            if work[c]:
                f = work[c]
                work = [field.sub(x, field.mul(f, y)) for x, y in zip(work, brow)]
        if any(work):
            return False
    return True


def gaussian_binomial(m: int, k: int, q) -> Fraction:
    if k < 0 or k > m:
        return Fraction(0)
    return q_factorial(m, q) / (q_factorial(k, q) * q_factorial(m - k, q))


@dataclass
class FlatLattice:
    """All proper nonzero subspaces with precomputed order data."""

    n: int
    q: int
    field: GaloisField
    flats: list
    rank_of: list
    by_rank: dict
    below: list
    comparable: list
    hyperplanes: list

    def counts_ok(self) -> bool:
        for r in range(1, self.n + 1):
            if len(self.by_rank.get(r, ())) != gaussian_binomial(self.n + 1, r, self.q):
                return False
        return True


def enumerate_flats(n: int, q: int) -> FlatLattice:
    """Every rank 1..n subspace of F_q^(n+1), each exactly once.

    Echelon matrices are enumerated directly: pick pivot columns, then
    fill the free entries (right of each pivot, outside pivot columns)
    in all possible ways.
    """
    if q not in FIELD_SIZES:
        raise SizeGuardError(f"field size must be one of {FIELD_SIZES}")
    if not 1 <= n <= DIM_LIMIT:
        raise SizeGuardError(f"dimension must be between 1 and {DIM_LIMIT}")
    field = GaloisField(q)
    ncols = n + 1
    flats = []
    for r in range(1, n + 1):
        for pivots in itertools.combinations(range(ncols), r):
            free = [(i, c) for i in range(r) for c in range(pivots[i] + 1, ncols)
                    if c not in pivots]
            for values in itertools.product(range(q), repeat=len(free)):
                rows = [[0] * ncols for _ in range(r)]
                for i in range(r):
                    rows[i][pivots[i]] = 1
                for (i, c), v in zip(free, values):
                    rows[i][c] = v
                flats.append(Flat(tuple(tuple(row) for row in rows)))
    rank_of = [f.rank for f in flats]
    by_rank = {}
    for idx, f in enumerate(flats):
        by_rank.setdefault(f.rank, []).append(idx)
    below = [set() for _ in flats]
    for i, fi in enumerate(flats):
        for j, fj in enumerate(flats):
            if fi.rank <= fj.rank and _contains(field, fi, fj):
                below[j].add(i)
    comparable = [set() for _ in flats]
    for i in range(len(flats)):
        for j in below[i]:
            comparable[i].add(j)
            comparable[j].add(i)
    return FlatLattice(n=n, q=q, field=field, flats=flats, rank_of=rank_of,
                       by_rank=by_rank, below=[frozenset(b) for b in below],
                       comparable=[frozenset(c) for c in comparable],
                       hyperplanes=list(by_rank.get(n, ())))


def _reduce_row(vec: dict, pivots: dict) -> dict:
    """Canonical representative of a sparse vector modulo the pivot rows."""
    vec = {c: v for c, v in vec.items() if v}
    while True:
        hit = min((c for c in vec if c in pivots), default=None)
        if hit is None:
            return vec
        coef = vec.pop(hit)
        for c2, v2 in pivots[hit].items():
            if c2 == hit:
                continue
            nv = vec.get(c2, Fraction(0)) - coef * v2
            if nv:
                vec[c2] = nv
            else:
                vec.pop(c2, None)


def _insert_row(vec: dict, pivots: dict) -> bool:
    """Grow an inter-reduced pivot set by one vector; True if independent."""
    vec = _reduce_row(vec, pivots)
    if not vec:
        return False
    p = min(vec)
    pv = vec[p]
    vec = {c: v / pv for c, v in vec.items()}
    for prow in pivots.values():
        if p in prow:
            coef = prow.pop(p)
            for c2, v2 in vec.items():
                if c2 == p:
                    continue
                nv = prow.get(c2, Fraction(0)) - coef * v2
                if nv:
                    prow[c2] = nv
                else:
                    prow.pop(c2, None)
    pivots[p] = vec
    return True


class ChowClass:
    """Homogeneous element, stored as a normal-formed sparse vector over
    the chain monomials of its degree."""

    __slots__ = ("ring", "degree", "vec")

    def __init__(self, ring, degree, vec):
        self.ring = ring
        self.degree = degree
        self.vec = vec

    def is_zero(self) -> bool:
        return not self.vec

    def __add__(self, other):
        if self.degree != other.degree:
            raise ValueError("degrees differ")
        out = dict(self.vec)
        for c, v in other.vec.items():
            nv = out.get(c, Fraction(0)) + v
            if nv:
                out[c] = nv
            else:
                out.pop(c, None)
        return ChowClass(self.ring, self.degree, out)

    def __sub__(self, other):
        return self + other.scale(Fraction(-1))

    def scale(self, s) -> "ChowClass":
        s = Fraction(s)
        if not s:
            return ChowClass(self.ring, self.degree, {})
        return ChowClass(self.ring, self.degree, {c: s * v for c, v in self.vec.items()})

    def __rmul__(self, s):
        return self.scale(s)

    def __mul__(self, other):
        if not isinstance(other, ChowClass):
            return self.scale(other)
        return self.ring.multiply(self, other)

    def __eq__(self, other):
        return (isinstance(other, ChowClass) and self.degree == other.degree
                and self.vec == other.vec)

    def __repr__(self):
        return f"ChowClass(degree={self.degree}, terms={len(self.vec)})"


class ChowRing:
    """Graded ring of the subspace lattice, one degree at a time.

    Monomials supported on non-chains vanish outright, so each degree-k
    piece is the span of chain monomials (weakly increasing id tuples,
    pairwise comparable) modulo the pushed-forward hyperplane-difference
    relations. Those relation rows are eliminated once per degree and
    cached; normal forms and dimensions fall out of the pivot set.
    """

    def __init__(self, lattice: FlatLattice):
        self.lattice = lattice
        self.n = lattice.n
        self.q = lattice.q
        self._chains = {0: [()]}
        self._chain_index = {0: {(): 0}}
        self._pivots = {0: {}}

    def chains(self, k: int):
        if k not in self._chains:
            if not 0 <= k <= self.n:
                raise ValueError("degree out of range")
            prev = self.chains(k - 1)
            comp = self.lattice.comparable
            out = []
            for m in prev:
                start = m[-1] if m else 0
                for j in range(start, len(self.lattice.flats)):
                    if all(x in comp[j] for x in m):
                        out.append(m + (j,))
            self._chains[k] = out
            self._chain_index[k] = {m: i for i, m in enumerate(out)}
        return self._chains[k]

    def _relation_pivots(self, k: int):
        if k not in self._pivots:
            if not 0 <= k <= self.n:
                raise ValueError("degree out of range")
            lat = self.lattice
            idx = self._chain_index_for(k)
            comp = lat.comparable
            h0 = lat.hyperplanes[0]
            pivots = {}
            for m in self.chains(k - 1):
                mset = set(m)
                base = {}
                for f in lat.below[h0]:
                    if mset <= comp[f]:
                        key = tuple(sorted(m + (f,)))
                        base[idx[key]] = base.get(idx[key], Fraction(0)) + 1
                for h in lat.hyperplanes:
                    if h == h0:
                        continue
                    row = {c: -v for c, v in base.items()}
                    for f in lat.below[h]:
                        if mset <= comp[f]:
                            key = tuple(sorted(m + (f,)))
                            row[idx[key]] = row.get(idx[key], Fraction(0)) + 1
                    _insert_row(row, pivots)
            self._pivots[k] = pivots
        return self._pivots[k]

    def _chain_index_for(self, k: int):
        self.chains(k)
        return self._chain_index[k]

    def normal_form(self, vec: dict, k: int) -> dict:
        return _reduce_row(vec, self._relation_pivots(k))

    def make_class(self, vec: dict, k: int) -> ChowClass:
        return ChowClass(self, k, self.normal_form(vec, k))

    def zero(self, k: int) -> ChowClass:
        return ChowClass(self, k, {})

    def graded_dim(self, k: int) -> int:
        if k == 0:
            return 1
        return len(self.chains(k)) - len(self._relation_pivots(k))

    def basis_monomials(self, k: int):
        """Chain monomials (as flat-id tuples) representing a basis."""
        pivots = self._relation_pivots(k)
        return [m for i, m in enumerate(self.chains(k)) if i not in pivots]

    def class_x(self, flat_id: int) -> ChowClass:
        idx = self._chain_index_for(1)
        return self.make_class({idx[(flat_id,)]: Fraction(1)}, 1)

    def hyperplane_sum_raw(self, h: int) -> dict:
        idx = self._chain_index_for(1)
        return {idx[(f,)]: Fraction(1) for f in self.lattice.below[h]}

    def class_alpha(self) -> ChowClass:
        return self.make_class(self.hyperplane_sum_raw(self.lattice.hyperplanes[0]), 1)

    def alpha_hyperplane_independent(self) -> bool:
        forms = [self.normal_form(self.hyperplane_sum_raw(h), 1)
                 for h in self.lattice.hyperplanes]
        return all(f == forms[0] for f in forms)

    def _divisor_class(self, alpha_weight: Fraction, flat_weight) -> ChowClass:
        lat = self.lattice
        idx = self._chain_index_for(1)
        vec = {c: alpha_weight * v
               for c, v in self.hyperplane_sum_raw(lat.hyperplanes[0]).items()}
        for f, flat in enumerate(lat.flats):
            w = flat_weight(self.n + 1 - flat.rank)
            if w:
                c = idx[(f,)]
                nv = vec.get(c, Fraction(0)) - w
                if nv:
                    vec[c] = nv
                else:
                    vec.pop(c, None)
        return self.make_class(vec, 1)

    def class_L(self, i: int) -> ChowClass:
        if not 1 <= i <= self.n:
            raise ValueError("index out of range")
        q = self.q
        return self._divisor_class(
            q_int(self.n + 1 - i, q),
            lambda codim: q_int(codim - i, q) if codim >= i else Fraction(0))

    def class_gamma(self, i: int) -> ChowClass:
        if not 1 <= i <= self.n:
            raise ValueError("index out of range")
        q = self.q
        return self._divisor_class(
            q_int(self.n + 1, q) - q_int(i, q),
            lambda codim: q_int(codim, q) - q_int(i, q) if codim >= i else Fraction(0))

    def multiply(self, a: ChowClass, b: ChowClass) -> ChowClass:
        k = a.degree + b.degree
        if k > self.n:
            return self.zero(k)
        lat = self.lattice
        comp = lat.comparable
        ca, cb = self.chains(a.degree), self.chains(b.degree)
        idx = self._chain_index_for(k)
        out = {}
        for ia, va in a.vec.items():
            ma = ca[ia]
            for ib, vb in b.vec.items():
                mb = cb[ib]
                if all(y in comp[x] for x in ma for y in mb):
                    c = idx[tuple(sorted(ma + mb))]
                    out[c] = out.get(c, Fraction(0)) + va * vb
        return self.make_class(out, k)

    def power(self, a: ChowClass, e: int) -> ChowClass:
        out = self.make_class({0: Fraction(1)}, 0)
        for _ in range(e):
            out = self.multiply(out, a)
        return out

    def top_anchor(self):
        """Index of the single top-degree basis monomial and the value
        alpha^n takes on it."""
        basis = [i for i in range(len(self.chains(self.n)))
                 if i not in self._relation_pivots(self.n)]
        if len(basis) != 1:
            raise ValueError(f"top degree has dimension {len(basis)}, expected 1")
        t = basis[0]
        coeff = self.power(self.class_alpha(), self.n).vec.get(t, Fraction(0))
        if not coeff:
            raise ValueError("alpha^n vanishes; degree map has no anchor")
        return t, coeff

    def chow_degree(self, c: ChowClass) -> Fraction:
        if c.degree != self.n:
            raise ValueError("degree map needs a top-degree class")
        t, anchor = self.top_anchor()
        return c.vec.get(t, Fraction(0)) / anchor


def verify_gamma_L(ring: ChowRing) -> dict:
    """gamma_i == q^i L_i in degree 1, per index."""
    q = Fraction(ring.q)
    out = {}
    for i in range(1, ring.n + 1):
        diff = ring.class_gamma(i) - ring.class_L(i).scale(q ** i)
        out[i] = diff.is_zero()
    return out


def _relation_holds(ring, v, i, weight_up, weight_down) -> bool:
    """(q+1) v_i^2 == weight_up * v_i v_{i+1} + weight_down * v_i v_{i-1},
    with v_0 = v_{n+1} = 0."""
    q = Fraction(ring.q)
    zero = ring.zero(1)
    n = ring.n
    vi = v[i]
    up = v[i + 1] if i + 1 <= n else zero
    down = v[i - 1] if i - 1 >= 1 else zero
    lhs = ring.multiply(vi, vi).scale(q + 1)
    rhs = ring.multiply(vi, up).scale(weight_up) + ring.multiply(vi, down).scale(weight_down)
    return (lhs - rhs).is_zero()


def verify_klyachko_relation(ring: ChowRing) -> dict:
    """(q+1) gamma_i^2 == gamma_i gamma_{i+1} + q gamma_i gamma_{i-1}."""
    q = Fraction(ring.q)
    v = {i: ring.class_gamma(i) for i in range(1, ring.n + 1)}
    return {i: _relation_holds(ring, v, i, Fraction(1), q) for i in range(1, ring.n + 1)}


def verify_L_relation(ring: ChowRing) -> dict:
    """(q+1) L_i^2 == q L_i L_{i+1} + L_i L_{i-1} (the mirrored weights)."""
    q = Fraction(ring.q)
    v = {i: ring.class_L(i) for i in range(1, ring.n + 1)}
    return {i: _relation_holds(ring, v, i, q, Fraction(1)) for i in range(1, ring.n + 1)}


@dataclass
class CandidateResult:
    name: str
    relations_ok: bool
    graded_dims: list | None = None
    dims_ok: bool = False
    degree_constant: Fraction | None = None
    degrees_ok: bool = False

    @property
    def passes(self):
        return self.relations_ok and self.dims_ok and self.degrees_ok


@dataclass
class Theorem1Report:
    candidates: list
    passing: list
    unique: bool


def _candidate_images(ring: ChowRing, name: str):
    n = ring.n
    L = {i: ring.class_L(i) for i in range(1, n + 1)}
    L[0] = ring.zero(1)
    if name == "identity":
        return [L[i] for i in range(1, n + 1)]
    if name == "shift":
        return [L[n - i] for i in range(1, n + 1)]
    if name == "reversal":
        return [L[n + 1 - i] for i in range(1, n + 1)]
    raise ValueError(f"unknown candidate {name}")


def verify_theorem1(ring: ChowRing) -> Theorem1Report:
    """Try each generator assignment u_i -> L-image and test, in order:
    the displacement quadratic relations in degree 2, the graded
    dimensions C(n, k) of the generated subalgebra, and agreement of the
    top-degree monomial values with the displacement degrees up to one
    global constant (reported)."""
    n = ring.n
    qfrac = Fraction(ring.q)
    ctx = QContext(n, qfrac)
    results = []
    for name in ("identity", "shift", "reversal"):
        images = _candidate_images(ring, name)
        v = {i + 1: images[i] for i in range(n)}
        relations_ok = all(
            _relation_holds(ring, v, i, Fraction(1), qfrac) for i in range(1, n + 1))
        res = CandidateResult(name=name, relations_ok=relations_ok)
        if relations_ok:
            dims = []
            for k in range(n + 1):
                pivots = {}
                count = 0
                for eta in compositions(k, n):
                    cls = ring.make_class({0: Fraction(1)}, 0)
                    for site, e in enumerate(eta, start=1):
                        for _ in range(e):
                            cls = ring.multiply(cls, v[site])
                    if _insert_row(dict(cls.vec), pivots):
                        count += 1
                dims.append(count)
            res.graded_dims = dims
            res.dims_ok = dims == [math.comb(n, k) for k in range(n + 1)]
            pairs = []
            for eta in compositions(n, n):
                cls = ring.make_class({0: Fraction(1)}, 0)
                for site, e in enumerate(eta, start=1):
                    for _ in range(e):
                        cls = ring.multiply(cls, v[site])
                pairs.append((ring.chow_degree(cls), monomial_degree(ctx, eta)))
            const = next((c / k for c, k in pairs if k), None)
            res.degree_constant = const
            res.degrees_ok = const is not None and all(
                c == const * k for c, k in pairs)
        results.append(res)
    passing = [r.name for r in results if r.passes]
    return Theorem1Report(candidates=results, passing=passing,
                          unique=len(passing) == 1)
