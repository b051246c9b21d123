"""Random displacement of stacked unit masses.

A configuration is a finite nonnegative integer measure. While some site
carries at least two units, a selection rule picks one such site and a
single unit moves: one step right with probability 1/(q+1), one step left
with probability q/(q+1). The process stops when the configuration is
0/1-valued.

Two engines live here.

`reduce_measure` solves the boundary-killed chain on sites {1..n}
exactly: any unit stepping outside {1..n} sends the whole trajectory to a
dead sink. States reachable under the (fixed, deterministic) selection
rule form a finite graph; cycles are handled by condensing strongly
connected components and solving each component's linear system exactly,
never by iteration. The resulting distribution over 0/1-valued
configurations is what the algebra's product rule consumes, and it is
provably independent of the selection rule.

`simulate_mc` is a seeded Monte Carlo simulator of the free process on
the integers (no killing): trajectories run until they are 0/1-valued or
leave a window around the target's support, and the hit frequency for an
exact target configuration is reported with its standard error. Each
trial draws from its own RNG stream derived from (seed, trial index), so
results are bit-identical however trials are scheduled.
"""

from __future__ import annotations

import hashlib
import math
import random
from dataclasses import dataclass
from fractions import Fraction

import networkx as nx

from .linalg import Matrix, inverse
from .qcartan import QContext

MASS_LIMIT = 12
SITE_LIMIT = 12

_DEAD = "dead"


class InvalidProbabilityError(ValueError):
    pass


def _digest_int(key: str) -> int:
    return int.from_bytes(hashlib.blake2b(key.encode(), digest_size=8).digest(), "big")


@dataclass(frozen=True)
class SelectionRule:
    """Deterministic choice of which overloaded site fires next.

    kind is one of "leftmost", "rightmost", "random"; the random variant
    hashes (seed, state) so the same state always selects the same site,
    independent of how the state was reached.
    """

    kind: str
    seed: int | None = None

    def __post_init__(self):
        if self.kind not in ("leftmost", "rightmost", "random"):
            raise ValueError(f"unknown selection rule {self.kind!r}")
        if self.kind == "random" and self.seed is None:
            raise ValueError("random selection rule needs a seed")

    def select(self, state_key, candidates):
        if self.kind == "leftmost":
            return candidates[0]
        if self.kind == "rightmost":
            return candidates[-1]
        h = _digest_int(repr((self.seed, state_key)))
        return candidates[h % len(candidates)]


LEFTMOST = SelectionRule("leftmost")
RIGHTMOST = SelectionRule("rightmost")


def random_rule(seed: int) -> SelectionRule:
    return SelectionRule("random", seed)


@dataclass
class AbsorptionResult:
    """Exact absorption distribution: 0/1-valued outcomes plus dead mass."""

    probabilities: dict
    dead_mass: Fraction

    def total(self) -> Fraction:
        return sum(self.probabilities.values(), Fraction(0)) + self.dead_mass


def _successors(state, n, rule, p_right, p_left):
    candidates = tuple(i + 1 for i, c in enumerate(state) if c >= 2)
    site = rule.select(state, candidates)
    out = []
    if site == n:
        out.append((_DEAD, p_right))
    else:
        nxt = list(state)
        nxt[site - 1] -= 1
        nxt[site] += 1
        out.append((tuple(nxt), p_right))
    if site == 1:
        out.append((_DEAD, p_left))
    else:
        nxt = list(state)
        nxt[site - 1] -= 1
        nxt[site - 2] += 1
        out.append((tuple(nxt), p_left))
    return out


def reduce_measure(ctx: QContext, eta, rule: SelectionRule = LEFTMOST) -> AbsorptionResult:
    """Exact outcome distribution of the boundary-killed chain started at eta.

    eta is a length-n sequence of nonnegative integers. Refuses total
    mass > 12 or n > 12.
    """
    n = ctx.n
    eta = tuple(int(x) for x in eta)
    if len(eta) != n:
        raise ValueError("eta must assign a multiplicity to each of the n sites")
    if any(x < 0 for x in eta):
        raise ValueError("multiplicities must be nonnegative")
    if sum(eta) > MASS_LIMIT:
        raise ValueError(f"total mass above the exact-engine limit {MASS_LIMIT}")
    if n > SITE_LIMIT:
        raise ValueError(f"n above the exact-engine limit {SITE_LIMIT}")
    q = ctx.q
    p_right = 1 / (q + 1)
    p_left = q / (q + 1)
    if all(x <= 1 for x in eta):
        return AbsorptionResult(probabilities={eta: Fraction(1)}, dead_mass=Fraction(0))

    succ = {}
    stack = [eta]
    while stack:
        s = stack.pop()
        if s in succ:
            continue
        edges = _successors(s, n, rule, p_right, p_left)
        succ[s] = edges
        for t, _ in edges:
            if t is not _DEAD and any(c >= 2 for c in t) and t not in succ:
                stack.append(t)

    graph = nx.DiGraph()
    graph.add_nodes_from(succ)
    for s, edges in succ.items():
        for t, _ in edges:
            if t is not _DEAD and t in succ:
                graph.add_edge(s, t)

    cond = nx.condensation(graph)
    order = list(nx.topological_sort(cond))
    values = {}

    def edge_value(t, w, acc):
        # t is dead, absorbed (0/1-valued), or an already-solved transient
        if t is _DEAD:
            acc[_DEAD] = acc.get(_DEAD, Fraction(0)) + w
        elif t in values:
            for o, v in values[t].items():
                acc[o] = acc.get(o, Fraction(0)) + w * v
        else:
            acc[t] = acc.get(t, Fraction(0)) + w

    for comp_id in reversed(order):
        members = sorted(cond.nodes[comp_id]["members"])
        if len(members) == 1:
            s = members[0]
            acc = {}
            for t, w in succ[s]:
                edge_value(t, w, acc)
            values[s] = acc
        else:
            idx = {s: i for i, s in enumerate(members)}
            k = len(members)
            p_intra = [[Fraction(0)] * k for _ in range(k)]
            external = [{} for _ in range(k)]
            outcomes = set()
            for s in members:
                i = idx[s]
                for t, w in succ[s]:
                    if t is not _DEAD and t in idx:
                        p_intra[i][idx[t]] += w
                    else:
                        edge_value(t, w, external[i])
                outcomes.update(external[i])
            im_p = [[Fraction(1 if i == j else 0) - p_intra[i][j] for j in range(k)]
                    for i in range(k)]
            inv = inverse(Matrix(im_p))
            for s in members:
                i = idx[s]
                acc = {}
                for o in outcomes:
                    v = sum((inv.data[i][j] * external[j].get(o, Fraction(0))
                             for j in range(k)), Fraction(0))
                    if v:
                        acc[o] = v
                values[s] = acc

    result = values[eta]
    probs = {o: v for o, v in result.items() if o is not _DEAD and v != 0}
    return AbsorptionResult(probabilities=probs,
                            dead_mass=result.get(_DEAD, Fraction(0)))


@dataclass
class McResult:
    hits: int
    completed: int
    timed_out: int
    estimate: Fraction
    stderr: float


def simulate_mc(q_left, q_right, eta, target, *, trials: int, seed: int,
                window: int, max_steps: int,
                rule: SelectionRule = LEFTMOST) -> McResult:
    """Monte Carlo hit frequency of an exact 0/1 target on the integers.

    eta and target are {site: multiplicity} dicts with equal total mass;
    target must be 0/1-valued. A trajectory completes when its state is
    0/1-valued (hit iff it equals the target) or when a unit leaves
    [min(target)-window, max(target)+window]. Trajectories still running
    after max_steps are counted as timed out and excluded from the
    estimate.
    """
    q_left = Fraction(q_left)
    q_right = Fraction(q_right)
    if q_left <= 0 or q_right <= 0 or q_left + q_right != 1:
        raise InvalidProbabilityError("step probabilities must be positive and sum to 1")
    eta = {int(s): int(c) for s, c in eta.items() if int(c) != 0}
    target = {int(s): int(c) for s, c in target.items() if int(c) != 0}
    if any(c < 0 for c in eta.values()):
        raise ValueError("multiplicities must be nonnegative")
    if any(c != 1 for c in target.values()):
        raise ValueError("target must be 0/1-valued")
    if sum(eta.values()) != sum(target.values()):
        raise ValueError("start and target must carry the same total mass")
    if target:
        lo = min(target) - window
        hi = max(target) + window
    else:
        lo, hi = -window, window
    p_left = float(q_left)
    need_key = rule.kind == "random"

    hits = completed = timed_out = 0
    for t in range(trials):
        rng = random.Random(_digest_int(f"{seed}:{t}"))
        state = dict(eta)
        done = False
        for _ in range(max_steps):
            candidates = sorted(s for s, c in state.items() if c >= 2)
            if not candidates:
                completed += 1
                if state == target:
                    hits += 1
                done = True
                break
            key = tuple(sorted(state.items())) if need_key else None
            site = rule.select(key, candidates)
            dest = site - 1 if rng.random() < p_left else site + 1
            state[site] -= 1
            if not state[site]:
                del state[site]
            state[dest] = state.get(dest, 0) + 1
            if dest < lo or dest > hi:
                completed += 1
                done = True
                break
        if not done:
            timed_out += 1
    estimate = Fraction(hits, completed) if completed else Fraction(0)
    if completed:
        p = hits / completed
        stderr = math.sqrt(p * (1.0 - p) / completed)
    else:
        stderr = float("nan")
    return McResult(hits=hits, completed=completed, timed_out=timed_out,
                    estimate=estimate, stderr=stderr)
