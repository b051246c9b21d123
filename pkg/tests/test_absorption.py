"""Displacement process engine: exact absorption and the Monte Carlo path.

The truncated-tree test recomputes small absorption distributions by a
completely separate route (breadth-first expansion of the weighted rewrite
tree with an explicit tail bound), so the SCC-and-solve engine is checked
against something that shares none of its code.
"""

import math
from fractions import Fraction

import pytest

from qkly.absorption import (
    LEFTMOST,
    RIGHTMOST,
    InvalidProbabilityError,
    SelectionRule,
    random_rule,
    reduce_measure,
    simulate_mc,
)
from qkly.algebra import compositions
from qkly.qcartan import QContext

F = Fraction


def test_single_step_two_branches():
    res = reduce_measure(QContext(2, F(2)), (2, 0))
    assert res.probabilities == {(1, 1): F(1, 3)}
    assert res.dead_mass == F(2, 3)
    assert res.total() == F(1)


def test_squarefree_is_absorbed():
    for n, q in ((1, F(2)), (3, F(1, 2)), (4, F(3))):
        eta = tuple([1] * n)
        res = reduce_measure(QContext(n, q), eta)
        assert res.probabilities == {eta: F(1)}
        assert res.dead_mass == F(0)


def test_two_state_cycle_unit_bias():
    res = reduce_measure(QContext(3, F(1)), (1, 2, 0))
    assert res.probabilities == {(1, 1, 1): F(2, 3)}
    assert res.dead_mass == F(1, 3)


def test_partial_mass_outcomes():
    # mass 2 on three sites can absorb at any squarefree pair
    res = reduce_measure(QContext(3, F(1)), (0, 2, 0))
    assert set(res.probabilities) <= {(1, 1, 0), (0, 1, 1), (1, 0, 1)}
    assert res.total() == F(1)


def test_conservation_exhaustive_small():
    for n in (1, 2, 3):
        for q in (F(1, 2), F(1), F(3)):
            ctx = QContext(n, q)
            for mass in range(n + 3):
                for eta in compositions(mass, n):
                    res = reduce_measure(ctx, eta)
                    assert res.total() == F(1)
                    assert all(p >= 0 for p in res.probabilities.values())
                    assert all(set(k) <= {0, 1} for k in res.probabilities)


def test_rule_independence():
    rules = [LEFTMOST, RIGHTMOST] + [random_rule(s) for s in range(5)]
    for n in (2, 3, 4):
        for q in (F(1, 2), F(2)):
            ctx = QContext(n, q)
            for mass in range(6):
                for eta in compositions(mass, n):
                    results = [reduce_measure(ctx, eta, rule) for rule in rules]
                    first = results[0]
                    for other in results[1:]:
                        assert other.probabilities == first.probabilities
                        assert other.dead_mass == first.dead_mass


def test_rule_independence_n5():
    ctx = QContext(5, F(2))
    rules = [LEFTMOST, RIGHTMOST, random_rule(17)]
    for eta in compositions(5, 5):
        results = [reduce_measure(ctx, eta, rule) for rule in rules]
        assert all(r.probabilities == results[0].probabilities for r in results[1:])


def _expand_tree(n, q, eta, depth):
    """Leftmost-rule rewrite tree truncated at the given depth.

    Returns (absorbed distribution, dead mass, unresolved tail mass).
    """
    p_right = F(1) / (q + 1)
    p_left = q / (q + 1)
    frontier = {tuple(eta): F(1)}
    absorbed = {}
    dead = F(0)
    for _ in range(depth):
        nxt = {}
        for state, w in frontier.items():
            site = next((i for i, c in enumerate(state, start=1) if c >= 2), None)
            if site is None:
                absorbed[state] = absorbed.get(state, F(0)) + w
                continue
            for step, weight in ((1, p_right), (-1, p_left)):
                j = site + step
                if not 1 <= j <= n:
                    dead += w * weight
                    continue
                new = list(state)
                new[site - 1] -= 1
                new[j - 1] += 1
                key = tuple(new)
                nxt[key] = nxt.get(key, F(0)) + w * weight
        frontier = nxt
        if not frontier:
            break
    # whatever is still in flight settles somewhere; bound it, don't guess
    tail = sum(frontier.values(), F(0))
    return absorbed, dead, tail


def test_confluence_against_truncated_tree():
    for n in (2, 3):
        for q in (F(1, 2), F(1), F(2)):
            ctx = QContext(n, q)
            for mass in range(4):
                for eta in compositions(mass, n):
                    exact = reduce_measure(ctx, eta)
                    approx, dead, tail = _expand_tree(n, q, eta, 60)
                    assert tail < F(1, 10 ** 6)
                    for state, p in exact.probabilities.items():
                        assert abs(p - approx.get(state, F(0))) <= tail
                    assert abs(exact.dead_mass - dead) <= tail


def test_guards():
    with pytest.raises(ValueError):
        reduce_measure(QContext(2, F(2)), (13, 0))
    with pytest.raises(ValueError):
        reduce_measure(QContext(13, F(2)), (2,) + (0,) * 12)


def test_selection_rule_determinism():
    rule = random_rule(9)
    picks = [rule.select((0, 3, 2, 0), (2, 3)) for _ in range(5)]
    assert len(set(picks)) == 1
    assert picks[0] in (2, 3)


def test_selection_rule_rejects_unknown_kind():
    with pytest.raises(ValueError):
        SelectionRule("middle")


def test_mc_already_at_target():
    res = simulate_mc(F(1, 2), F(1, 2), {1: 1, 2: 1}, {1: 1, 2: 1},
                      trials=200, seed=4, window=2, max_steps=50)
    assert res.hits == 200
    assert res.completed == 200
    assert res.estimate == F(1)


def test_mc_determinism():
    kwargs = dict(trials=4000, seed=123, window=2, max_steps=1000)
    a = simulate_mc(F(2, 3), F(1, 3), {1: 2}, {1: 1, 2: 1}, **kwargs)
    b = simulate_mc(F(2, 3), F(1, 3), {1: 2}, {1: 1, 2: 1}, **kwargs)
    assert (a.hits, a.completed, a.timed_out) == (b.hits, b.completed, b.timed_out)
    c = simulate_mc(F(2, 3), F(1, 3), {1: 2}, {1: 1, 2: 1},
                    trials=4000, seed=124, window=2, max_steps=1000)
    assert (a.hits, a.completed) != (c.hits, c.completed)


def test_mc_matches_exact_two_site():
    res = simulate_mc(F(2, 3), F(1, 3), {1: 2}, {1: 1, 2: 1},
                      trials=20000, seed=5, window=2, max_steps=10000)
    est = float(res.estimate)
    assert abs(est - 1 / 3) < 4 * res.stderr
    assert res.timed_out == 0


def test_mc_matches_exact_three_site():
    res = simulate_mc(F(1, 2), F(1, 2), {1: 1, 2: 2}, {1: 1, 2: 1, 3: 1},
                      trials=20000, seed=6, window=2, max_steps=10000)
    assert abs(float(res.estimate) - 2 / 3) < 4 * res.stderr


def test_mc_rejects_bad_weights():
    with pytest.raises(InvalidProbabilityError):
        simulate_mc(F(1, 2), F(1, 3), {1: 2}, {1: 1, 2: 1},
                    trials=10, seed=1, window=1, max_steps=10)


def test_mc_timeout_accounting():
    res = simulate_mc(F(1, 2), F(1, 2), {1: 4}, {1: 1, 2: 1, 3: 1, 4: 1},
                      trials=50, seed=3, window=4, max_steps=1)
    assert res.timed_out == 50
    assert res.completed == 0
    assert res.estimate == F(0)
    assert math.isnan(res.stderr)
