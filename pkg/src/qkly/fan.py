"""The complete simplicial fan attached to the q-Cartan matrix.

Cones are indexed by disjoint pairs (J, K) of subsets of {1..n}: the cone
sigma_{J,K} is spanned by the standard basis vectors e_i for i in J and
the negated Cartan columns -alpha_k for k in K. The collection is a
complete simplicial fan whose pairwise intersections obey
sigma_{J,K} cap sigma_{P,Q} = sigma_{J cap P, K cap Q}; codimension-one
cones sit in exactly two maximal cones, and the resulting wall relations
have nonnegative coefficients on the -alpha rays. The Stanley-Reisner
presentation of the fan, after eliminating the linear relations, yields
exactly the displacement-algebra quadrics.

Intersection checking is exact: a violating pair would give a nonzero
nonnegative kernel vector of the stacked generator matrix supported on a
non-shared generator, and that is a phase-one simplex feasibility
question over Fraction.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import compositions, monomial_degree
from .linalg import (InconsistentSystemError, Matrix, det, inverse, lp_feasible,
                     nullspace, rank, solve)
from .qcartan import QContext, cartan_matrix, q_factorial, q_int

FAN_PAIRWISE_LIMIT = 6


@dataclass(frozen=True)
class ConeId:
    """Disjoint index sets: J labels e-generators, K labels -alpha ones."""

    J: frozenset
    K: frozenset

    def __post_init__(self):
        object.__setattr__(self, "J", frozenset(self.J))
        object.__setattr__(self, "K", frozenset(self.K))
        if self.J & self.K:
            raise ValueError("J and K must be disjoint")

    def dim(self) -> int:
        return len(self.J) + len(self.K)


def all_cones(n: int):
    cones = []
    for assignment in itertools.product((0, 1, 2), repeat=n):
        j = frozenset(i + 1 for i, a in enumerate(assignment) if a == 1)
        k = frozenset(i + 1 for i, a in enumerate(assignment) if a == 2)
        cones.append(ConeId(j, k))
    return cones


def maximal_cones(n: int):
    return [c for c in all_cones(n) if c.dim() == n]


def codim1_cones(n: int):
    return [c for c in all_cones(n) if c.dim() == n - 1]


def _alpha_columns(ctx: QContext):
    a = cartan_matrix(ctx)
    return {k: [a.data[i][k - 1] for i in range(ctx.n)] for k in range(1, ctx.n + 1)}


def _generator_columns(ctx: QContext, cone: ConeId):
    """Ordered (label, column) pairs: e_i for sorted J, then -alpha_k for
    sorted K. Labels are ("e", i) and ("a", k)."""
    n = ctx.n
    alphas = _alpha_columns(ctx)
    cols = []
    for i in sorted(cone.J):
        cols.append((("e", i), [Fraction(1 if r == i - 1 else 0) for r in range(n)]))
    for k in sorted(cone.K):
        cols.append((("a", k), [-x for x in alphas[k]]))
    return cols


def cone_generators(ctx: QContext, cone: ConeId) -> Matrix:
    cols = [col for _, col in _generator_columns(ctx, cone)]
    return Matrix.from_columns(cols, rows=ctx.n) if cols else Matrix.zeros(ctx.n, 0)


def cone_contains(ctx: QContext, cone: ConeId, point) -> bool:
    """Exact membership: point = G lam with lam >= 0 for the generator
    matrix G (columns independent in a simplicial fan)."""
    point = [Fraction(x) for x in point]
    gens = cone_generators(ctx, cone)
    if gens.cols == 0:
        return all(x == 0 for x in point)
    try:
        lam = solve(gens, point)
    except InconsistentSystemError:
        return False
    return all(x >= 0 for x in lam)


@dataclass
class FanReport:
    simplicial: bool
    dimension_law: bool
    intersection_law: bool
    intersection_failures: list = field(default_factory=list)

    @property
    def ok(self):
        return self.simplicial and self.dimension_law and self.intersection_law


def _pair_intersection_ok(ctx, c1, c2, gcols):
    """The intersection of two cones must be the cone on their shared
    generators: any nonnegative kernel vector of [G1 | -G2] must vanish on
    every non-shared generator coordinate."""
    if (c1.J <= c2.J and c1.K <= c2.K) or (c2.J <= c1.J and c2.K <= c1.K):
        return True
    labels1, cols1 = zip(*gcols[c1]) if gcols[c1] else ((), ())
    labels2, cols2 = zip(*gcols[c2]) if gcols[c2] else ((), ())
    shared1 = [(lab[0] == "e" and lab[1] in c2.J) or (lab[0] == "a" and lab[1] in c2.K)
               for lab in labels1]
    shared2 = [(lab[0] == "e" and lab[1] in c1.J) or (lab[0] == "a" and lab[1] in c1.K)
               for lab in labels2]
    non_shared = [i for i, s in enumerate(shared1 + list(shared2)) if not s]
    if not non_shared:
        return True
    columns = list(cols1) + [[-x for x in col] for col in cols2]
    width = len(columns)
    rows = [[columns[j][r] for j in range(width)] for r in range(ctx.n)]
    rows.append([Fraction(1 if j in non_shared else 0) for j in range(width)])
    rhs = [Fraction(0)] * ctx.n + [Fraction(1)]
    return not lp_feasible(rows, rhs)


def check_fan(ctx: QContext) -> FanReport:
    """Simpliciality, the dimension law, and the pairwise intersection law,
    exhaustively over all 3^n cones. Refuses n > 6."""
    n = ctx.n
    if n > FAN_PAIRWISE_LIMIT:
        raise ValueError(f"exhaustive pairwise mode is limited to n <= {FAN_PAIRWISE_LIMIT}")
    cones = all_cones(n)
    gcols = {c: _generator_columns(ctx, c) for c in cones}
    simplicial = True
    dimension_law = True
    for c in cones:
        cols = [col for _, col in gcols[c]]
        r = rank([list(row) for row in zip(*cols)]) if cols else 0
        if r != c.dim():
            simplicial = False
            dimension_law = False
    failures = []
    for a in range(len(cones)):
        for b in range(a, len(cones)):
            if not _pair_intersection_ok(ctx, cones[a], cones[b], gcols):
                failures.append((cones[a], cones[b]))
    return FanReport(simplicial=simplicial, dimension_law=dimension_law,
                     intersection_law=not failures, intersection_failures=failures)


@dataclass
class CompletenessReport:
    wall_count_ok: bool
    coverage_ok: bool
    samples: int
    uncovered: list = field(default_factory=list)

    @property
    def ok(self):
        return self.wall_count_ok and self.coverage_ok


def check_complete(ctx: QContext, samples: int, seed: int) -> CompletenessReport:
    """Each codimension-one cone must lie in exactly the two maximal cones
    obtained by adding its missing index to J or to K, and every sampled
    rational point must land in some maximal cone."""
    n = ctx.n
    maxes = maximal_cones(n)
    inverses = {c: inverse(cone_generators(ctx, c)) for c in maxes}

    def containing_maxes(point):
        hits = []
        for c in maxes:
            lam = inverses[c].matvec(point)
            if all(x >= 0 for x in lam):
                hits.append(c)
        return hits

    wall_count_ok = True
    for wall in codim1_cones(n):
        missing = next(iter(frozenset(range(1, n + 1)) - wall.J - wall.K))
        expected = {ConeId(wall.J | {missing}, wall.K), ConeId(wall.J, wall.K | {missing})}
        found = set()
        gens = [col for _, col in _generator_columns(ctx, wall)]
        for c in maxes:
            inv = inverses[c]
            if all(all(x >= 0 for x in inv.matvec(g)) for g in gens) if gens else True:
                found.add(c)
        if found != expected:
            wall_count_ok = False

    rng = random.Random(seed)
    uncovered = []
    for _ in range(samples):
        point = [Fraction(rng.randint(-999, 999), rng.randint(1, 9)) for _ in range(n)]
        if not containing_maxes(point):
            uncovered.append(point)
    return CompletenessReport(wall_count_ok=wall_count_ok,
                              coverage_ok=not uncovered,
                              samples=samples, uncovered=uncovered)


@dataclass
class WallData:
    wall: ConeId
    missing: int
    coefficients: dict
    sign_ok: bool


def iter_walls(ctx: QContext):
    """(wall, missing index) pairs over all codimension-one cones."""
    n = ctx.n
    for wall in codim1_cones(n):
        missing = next(iter(frozenset(range(1, n + 1)) - wall.J - wall.K))
        yield wall, missing


def wall_relation(ctx: QContext, wall: ConeId, missing: int) -> WallData:
    """The unique linear relation among the n+1 rays of the two maximal
    cones through a wall, normalized to a primitive integer vector with a
    positive coefficient on e_missing.

    The expected sign pattern (checked, reported as sign_ok): positive on
    e_missing and -alpha_missing, nonnegative on every -alpha ray.
    """
    n = ctx.n
    if wall.dim() != n - 1:
        raise ValueError("wall must have codimension one")
    if missing in wall.J or missing in wall.K or not 1 <= missing <= n:
        raise ValueError("missing index already used by the wall")
    alphas = _alpha_columns(ctx)
    labels = []
    cols = []
    for i in sorted(wall.J | {missing}):
        labels.append(("e", i))
        cols.append([Fraction(1 if r == i - 1 else 0) for r in range(n)])
    for k in sorted(wall.K | {missing}):
        labels.append(("a", k))
        cols.append([-x for x in alphas[k]])
    mat = Matrix.from_columns(cols, rows=n)
    kernel = nullspace(mat)
    if len(kernel) != 1:
        raise ValueError("wall ray matrix kernel is not one-dimensional")
    vec = kernel[0]
    e_pos = labels.index(("e", missing))
    if vec[e_pos] < 0:
        vec = [-x for x in vec]
    den = 1
    for x in vec:
        den = den * x.denominator // math.gcd(den, x.denominator)
    ints = [int(x * den) for x in vec]
    g = 0
    for v in ints:
        g = math.gcd(g, abs(v))
    ints = [v // g for v in ints]
    coeffs = {lab: Fraction(v) for lab, v in zip(labels, ints)}
    sign_ok = (coeffs[("e", missing)] > 0 and coeffs[("a", missing)] > 0
               and all(coeffs[("a", k)] >= 0 for k in wall.K | {missing}))
    return WallData(wall=wall, missing=missing, coefficients=coeffs, sign_ok=sign_ok)


@dataclass
class AmpleReport:
    ok: bool
    failures: list = field(default_factory=list)


def check_ample(ctx: QContext, weights) -> AmpleReport:
    """Toric Kleiman positivity for the divisor sum a_j D_{-alpha_j}: on
    every wall relation the weighted -alpha coefficients must sum to a
    strictly positive number."""
    weights = [Fraction(w) for w in weights]
    if len(weights) != ctx.n:
        raise ValueError("need one weight per site")
    if any(w <= 0 for w in weights):
        raise ValueError("weights must be strictly positive")
    failures = []
    for wall, missing in iter_walls(ctx):
        data = wall_relation(ctx, wall, missing)
        total = sum((weights[k - 1] * data.coefficients[("a", k)]
                     for k in (wall.K | {missing})), Fraction(0))
        if total <= 0:
            failures.append((wall, missing, total))
    return AmpleReport(ok=not failures, failures=failures)


@dataclass
class SrReport:
    quadrics: list
    relations_match: bool
    graded_dims: list
    dims_ok: bool

    @property
    def ok(self):
        return self.relations_match and self.dims_ok


def _pair_index(n):
    pairs = [(i, j) for i in range(1, n + 1) for j in range(i, n + 1)]
    return pairs, {p: t for t, p in enumerate(pairs)}


def _eliminated_quadric_rows(ctx):
    """Stanley-Reisner quadrics after eliminating the e-ray variables.

    The only minimal non-faces of the fan are the pairs {e_i, -alpha_i},
    and the lattice relations identify the e_i variable with the i-th row
    of A applied to the -alpha variables. Substituting gives one quadric
    per site, expressed here as a coefficient row over unordered pairs.
    """
    n = ctx.n
    a = cartan_matrix(ctx)
    pairs, pidx = _pair_index(n)
    rows = []
    for i in range(1, n + 1):
        row = [Fraction(0)] * len(pairs)
        for k in range(1, n + 1):
            c = a.data[i - 1][k - 1]
            if c:
                row[pidx[(min(i, k), max(i, k))]] += c
        rows.append(row)
    return pairs, rows


def _relation_rows(ctx):
    n, q = ctx.n, ctx.q
    pairs, pidx = _pair_index(n)
    rows = []
    for i in range(1, n + 1):
        row = [Fraction(0)] * len(pairs)
        row[pidx[(i, i)]] += q + 1
        if i + 1 <= n:
            row[pidx[(i, i + 1)]] += Fraction(-1)
        if i - 1 >= 1:
            row[pidx[(i - 1, i)]] += -q
        rows.append(row)
    return rows


def _quotient_dim(ctx, quad_rows, k):
    """Dimension in degree k of polynomials in n variables modulo the
    ideal generated by the given quadrics."""
    n = ctx.n
    mons = list(itertools.combinations_with_replacement(range(1, n + 1), k))
    if k < 2:
        return len(mons)
    midx = {m: i for i, m in enumerate(mons)}
    lower = list(itertools.combinations_with_replacement(range(1, n + 1), k - 2))
    pairs, _ = _pair_index(n)
    rows = []
    for m in lower:
        for qrow in quad_rows:
            row = [Fraction(0)] * len(mons)
            for t, (i, j) in enumerate(pairs):
                c = qrow[t]
                if c:
                    key = tuple(sorted(m + (i, j)))
                    row[midx[key]] += c
            rows.append(row)
    return len(mons) - rank(rows)


def sr_presentation(ctx: QContext) -> SrReport:
    """Compare the eliminated Stanley-Reisner quadrics with the
    displacement-algebra relations (by exact degree-2 span equality) and
    verify the graded dimensions of the quadric quotient are C(n, k)."""
    pairs, quad_rows = _eliminated_quadric_rows(ctx)
    rel_rows = _relation_rows(ctx)
    r_quad = rank(quad_rows)
    r_rel = rank(rel_rows)
    r_union = rank(quad_rows + rel_rows)
    relations_match = r_quad == r_rel == r_union
    dims = [_quotient_dim(ctx, quad_rows, k) for k in range(ctx.n + 2)]
    expected = [math.comb(ctx.n, k) for k in range(ctx.n + 2)]
    quadrics = [{pairs[t]: c for t, c in enumerate(row) if c} for row in quad_rows]
    return SrReport(quadrics=quadrics, relations_match=relations_match,
                    graded_dims=dims, dims_ok=dims == expected)


def toric_top_integral(ctx: QContext, eta) -> Fraction:
    """Integral of the monomial in the -alpha ray divisors with exponents
    eta, normalized so the squarefree top monomial integrates to
    1/|det A|."""
    scale = abs(det(cartan_matrix(ctx)))
    return monomial_degree(ctx, eta) / q_factorial(ctx.n, ctx.q) / scale


@dataclass
class NormalizationReport:
    constant: Fraction | None
    constant_ok: bool
    det_scaled_value: Fraction
    factorial_squared_value: Fraction
    matches_det_scaled: bool
    matches_factorial_squared: bool


def normalization_probe(ctx: QContext) -> NormalizationReport:
    """Ratio integral(eta) / degree(eta) over all mass-n exponent vectors:
    must be a single constant; the report compares that constant with the
    two closed forms 1/((n)_q! (n+1)_q) and 1/((n)_q!)^2 without asserting
    either."""
    ratios = set()
    for eta in compositions(ctx.n, ctx.n):
        degv = monomial_degree(ctx, eta)
        if degv == 0:
            continue
        ratios.add(toric_top_integral(ctx, eta) / degv)
    constant_ok = len(ratios) == 1
    constant = next(iter(ratios)) if constant_ok else None
    fact = q_factorial(ctx.n, ctx.q)
    det_scaled = 1 / (fact * q_int(ctx.n + 1, ctx.q))
    fact_sq = 1 / (fact * fact)
    return NormalizationReport(
        constant=constant,
        constant_ok=constant_ok,
        det_scaled_value=det_scaled,
        factorial_squared_value=fact_sq,
        matches_det_scaled=constant == det_scaled,
        matches_factorial_squared=constant == fact_sq,
    )
