"""Acceptance gate: one test per stated criterion, one PASS/FAIL line each.

Exact criteria are asserted with zero tolerance. Criterion 10 is known to
fail off unit bias: the two-sided shift inequality it encodes has a genuine
counterexample at n = 3, q = 2, eta = (0, 3, 0), confirmed independently by
hand reduction, exact chain solve, and simulation. The check is implemented
exactly as stated and left to report the red result rather than being
weakened; see the decision notes that accompany the repository.
"""

import math
import random
from fractions import Fraction

from conftest import record_criterion

from qkly.absorption import LEFTMOST, RIGHTMOST, random_rule, reduce_measure, simulate_mc
from qkly.algebra import compositions, kly_degree, kly_multiply, monomial_degree, prob_exact
from qkly.algebra import KlyElement
from qkly.chow import ChowRing, enumerate_flats, verify_gamma_L, verify_klyachko_relation, verify_theorem1
from qkly.fan import check_ample, check_complete, check_fan, iter_walls, normalization_probe, sr_presentation, wall_relation
from qkly.kahler import LefschetzClass, check_hl, check_hr, check_log_concavity, check_poincare, primitive_basis
from qkly.qcartan import QContext, cartan_report, q_factorial, q_int

F = Fraction
Q_GRID = (F(1, 3), F(1, 2), F(1), F(2), F(3))


def _check(cid, ok, detail):
    line = record_criterion(cid, ok, detail)
    assert ok, line


def test_criterion_01_degree_anchor():
    checked = 0
    ok = True
    for n in range(1, 7):
        for q in Q_GRID:
            ctx = QContext(n, q)
            if monomial_degree(ctx, tuple([1] * n)) != q_factorial(n, q):
                ok = False
            checked += 1
    _check(1, ok, f"top squarefree degree equals the q-factorial in {checked} (n,q) cases")


def test_criterion_02_hand_probabilities():
    ok = True
    for q in Q_GRID:
        ctx = QContext(2, q)
        if prob_exact(ctx, (2, 0)) != 1 / (q + 1):
            ok = False
        if prob_exact(ctx, (0, 2)) != q / (q + 1):
            ok = False
    if prob_exact(QContext(3, F(1)), (1, 2, 0)) != F(2, 3):
        ok = False
    _check(2, ok, "two-site splits 1/(q+1), q/(q+1) on the grid; (1,2,0) gives 2/3 at q=1")


def test_criterion_03_rule_independence():
    rules = [LEFTMOST, RIGHTMOST] + [random_rule(s) for s in range(5)]
    ok = True
    cases = 0
    for n in range(1, 6):
        for q in (F(1, 2), F(2)):
            ctx = QContext(n, q)
            for eta in compositions(n, n):
                base = reduce_measure(ctx, eta, rules[0])
                for rule in rules[1:]:
                    other = reduce_measure(ctx, eta, rule)
                    if other.probabilities != base.probabilities or \
                            other.dead_mass != base.dead_mass:
                        ok = False
                cases += 1
    _check(3, ok, f"7 selection rules agree on {cases} exhaustive mass-n inputs, n <= 5")


MC_CONFIGS = [
    (2, F(2), (2, 0), 101), (2, F(2), (0, 2), 102),
    (2, F(1, 2), (2, 0), 103), (2, F(3), (0, 2), 104),
    (3, F(1), (1, 2, 0), 105), (3, F(2), (0, 3, 0), 106),
    (3, F(2), (1, 2, 0), 107), (3, F(2), (0, 2, 1), 108),
    (3, F(1, 2), (2, 1, 0), 109), (3, F(3), (0, 0, 3), 110),
    (4, F(1), (2, 2, 0, 0), 111), (4, F(2), (0, 2, 2, 0), 112),
    (4, F(1, 2), (1, 2, 1, 0), 113), (4, F(2), (0, 4, 0, 0), 114),
    (4, F(3), (1, 0, 2, 1), 115), (4, F(1, 3), (0, 1, 3, 0), 116),
    (5, F(2), (1, 2, 2, 0, 0), 117), (5, F(1, 2), (0, 2, 1, 2, 0), 118),
    (5, F(1), (0, 0, 5, 0, 0), 119), (5, F(3), (2, 1, 0, 1, 1), 120),
]


def test_criterion_04_monte_carlo_consistency():
    hits = 0
    worst = None
    for n, q, eta, seed in MC_CONFIGS:
        ctx = QContext(n, q)
        exact = prob_exact(ctx, eta)
        eta_map = {i + 1: c for i, c in enumerate(eta) if c}
        target = {i: 1 for i in range(1, n + 1)}
        res = simulate_mc(q / (q + 1), 1 / (q + 1), eta_map, target,
                          trials=10 ** 5, seed=seed, window=3,
                          max_steps=10 ** 5)
        diff = abs(float(res.estimate) - float(exact))
        if diff < 4 * res.stderr:
            hits += 1
        else:
            worst = (n, str(q), eta, diff, res.stderr)
    ok = hits >= 19
    detail = f"{hits}/20 configurations inside 4 standard errors at 1e5 trials"
    if worst:
        detail += f"; outlier {worst}"
    _check(4, ok, detail)


def test_criterion_05_matrix_lemma():
    ok = True
    for n in range(1, 7):
        for q in Q_GRID:
            rep = cartan_report(QContext(n, q))
            if not (rep.ok and rep.det_value == q_int(n + 1, q)):
                ok = False
    _check(5, ok, "determinant, submatrix nonsingularity, and inverse sign "
                  "properties hold for n <= 6 across the grid")


def test_criterion_06_fan_validity():
    ok = True
    for n in range(1, 6):
        for q in (F(1, 2), F(1), F(2), F(3)):
            ctx = QContext(n, q)
            if not check_fan(ctx).ok:
                ok = False
            if not check_complete(ctx, samples=10 ** 4, seed=5000 + 10 * n).ok:
                ok = False
    _check(6, ok, "fan axioms plus two-cones-per-wall and 1e4-point coverage, "
                  "n <= 5, four bias values")


def test_criterion_07_kleiman_positivity():
    ok = True
    rng = random.Random(606)
    for n in range(1, 6):
        for q in (F(1, 2), F(1), F(2), F(3)):
            ctx = QContext(n, q)
            for wall, missing in iter_walls(ctx):
                if not wall_relation(ctx, wall, missing).sign_ok:
                    ok = False
            if not check_ample(ctx, tuple([1] * n)).ok:
                ok = False
            for _ in range(10):
                weights = tuple(F(rng.randint(1, 24), rng.randint(1, 6))
                                for _ in range(n))
                if not check_ample(ctx, weights).ok:
                    ok = False
    _check(7, ok, "wall sign patterns and ampleness for unit plus 10 random "
                  "positive weight vectors per (n,q)")


def test_criterion_08_sr_isomorphism():
    ok = True
    for n in range(1, 6):
        for q in Q_GRID:
            rep = sr_presentation(QContext(n, q))
            expected = [math.comb(n, k) for k in range(n + 1)] + [0]
            if not (rep.ok and rep.graded_dims == expected):
                ok = False
    _check(8, ok, "eliminated quadrics match the displacement relations with "
                  "binomial graded dimensions, n <= 5")


def test_criterion_09_kahler_package():
    ok = True
    rng = random.Random(909)
    for n in range(1, 6):
        for q in (F(1, 2), F(2), F(3)):
            ctx = QContext(n, q)
            if not all(check_poincare(ctx).values()):
                ok = False
            ells = [LefschetzClass(tuple([1] * n))]
            for _ in range(20):
                ells.append(LefschetzClass(tuple(
                    F(rng.randint(1, 18), rng.randint(1, 6)) for _ in range(n))))
            for ell in ells:
                if not all(check_hl(ctx, ell).values()):
                    ok = False
                if not all(check_hr(ctx, ell).values()):
                    ok = False
    # the hand-checked primitive value at n = 2, bias 2
    ctx2 = QContext(2, F(2))
    ell2 = LefschetzClass((1, 1))
    basis = primitive_basis(ctx2, 1, ell2)
    prim_ok = len(basis) == 1
    if prim_ok:
        v = basis[0]
        c1 = v.terms.get(frozenset({1}), F(0))
        c2 = v.terms.get(frozenset({2}), F(0))
        prim_ok = c1 * (-4) == c2 * 5
    hand = KlyElement(ctx2, {frozenset({1}): F(5), frozenset({2}): F(-4)})
    value = -kly_degree(kly_multiply(hand, hand))
    if not (prim_ok and value == F(63)):
        ok = False
    _check(9, ok, "duality, Lefschetz, and Hodge-Riemann for 21 classes per "
                  f"(n,q), n <= 5; primitive square value {value} > 0")


def test_criterion_10_log_concavity():
    total = 0
    first = None
    for n in range(1, 6):
        for q in Q_GRID:
            violations = check_log_concavity(QContext(n, q))
            total += len(violations)
            if violations and first is None:
                v = violations[0]
                first = (n, str(q), v.eta, v.site, str(v.lhs), str(v.rhs))
    ok = total == 0
    detail = "zero violations of the two-sided shift inequality, n <= 5"
    if not ok:
        detail = (f"{total} violations on the stated grid; smallest is "
                  f"(n, q, eta, site, lhs, rhs) = {first}; unit bias is clean "
                  "and the exchange-form inequality holds everywhere, so the "
                  "displayed pairing itself is false off q = 1 (see notes)")
    _check(10, ok, detail)


def test_criterion_11_matroid_verification():
    ok = True
    constants = {}
    for n, q in ((2, 2), (2, 3)):
        ring = ChowRing(enumerate_flats(n, q))
        if not ring.lattice.counts_ok():
            ok = False
        if not ring.alpha_hyperplane_independent():
            ok = False
        if not all(verify_gamma_L(ring).values()):
            ok = False
        if not all(verify_klyachko_relation(ring).values()):
            ok = False
        report = verify_theorem1(ring)
        if not (report.unique and report.passing == ["reversal"]):
            ok = False
        winner = next(c for c in report.candidates if c.name == "reversal")
        if winner.graded_dims != [1, 2, 1] or not winner.degrees_ok:
            ok = False
        constants[(n, q)] = winner.degree_constant
    _check(11, ok, "flat counts, divisor identities, quadratic relations, and "
                   "a unique passing generator assignment on both planes; "
                   f"degree constants {constants}")


def test_criterion_12_normalization_probe():
    ok = True
    parts = []
    for n in range(1, 5):
        for q in Q_GRID:
            rep = normalization_probe(QContext(n, q))
            if not rep.constant_ok:
                ok = False
            if q == F(2):
                parts.append(
                    f"n={n}: ratio {rep.constant} vs det-scaled "
                    f"{rep.det_scaled_value} (match={rep.matches_det_scaled}) "
                    f"vs factorial-squared {rep.factorial_squared_value} "
                    f"(match={rep.matches_factorial_squared})")
    _check(12, ok, "integral/degree ratio is exponent-independent for n <= 4; "
                   + "; ".join(parts))
