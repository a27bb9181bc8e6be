"""Node-removal attacks on controllability.

A removal sequence turns a graph into a curve of driver densities, one value
per removal step; the mean of that curve is the robustness score. Curves are
exact rationals. Scores stay rational for small graphs and fall back to
compensated floating point for long curves, where exact denominators would
blow up without adding information.

The structural criterion is evaluated incrementally: removing one node
unmatches at most two bipartite vertices, so at most two targeted augmenting
searches restore a maximum matching. That makes a full N-step attack cost
about O(N * E) instead of N full matchings.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations

from . import rng as streams
from .controllability import (
    EXACT,
    STRUCTURAL,
    _check_criterion,
    adjacency_rank,
    maximum_matching,
)
from .graph import DirectedGraph

# Longest curve whose score is kept as an exact Fraction; matches the size
# range where exhaustive subset evaluation is feasible.
RATIONAL_SCORE_LIMIT = 19

_PERMUTATION_NODE_LIMIT = 7
_SUBSET_NODE_LIMIT = 20


@dataclass(frozen=True)
class ControllabilityCurve:
    """Driver density after each removal, steps 1..N-1."""

    values: tuple[Fraction, ...]
    criterion: str

    def __post_init__(self) -> None:
        for v in self.values:
            if not 0 < v <= 1:
                raise ValueError("curve values must lie in (0, 1]")


@dataclass(frozen=True)
class RobustnessScore:
    value: Fraction | float
    provenance: str
    std: float | None = None


@dataclass(frozen=True)
class RandomAttackResult:
    """Aggregate of uniformly random removal runs."""

    mean_density: tuple[float, ...]
    std_density: tuple[float, ...]
    score: RobustnessScore
    runs: int
    criterion: str


def validate_sequence(g: DirectedGraph, sequence) -> tuple[int, ...]:
    """An attack sequence is N-1 distinct original node ids."""
    seq = tuple(int(v) for v in sequence)
    n = g.node_count
    if len(seq) != n - 1:
        raise ValueError(f"sequence must remove exactly {n - 1} nodes")
    if len(set(seq)) != len(seq):
        raise ValueError("sequence repeats a node")
    for v in seq:
        if not 0 <= v < n:
            raise ValueError(f"node {v} out of range")
    return seq


class _MatchingAttack:
    """Maximum matching maintained under node deletions.

    Node ids stay the original ones; deleted nodes simply lose their
    adjacency. After deleting a node, the only vertices that can seed a new
    augmenting path are the tail and head that just lost their partner, so
    two targeted searches are enough to restore maximality.
    """

    def __init__(self, g: DirectedGraph) -> None:
        n = g.node_count
        self.n_alive = n
        self.out_adj = [list(a) for a in g.out_adjacency()]
        self.in_adj = [list(a) for a in g.in_adjacency()]
        self.match_out = [-1] * n
        self.match_in = [-1] * n
        start = maximum_matching(g)
        for u, v in start.pairs:
            self.match_out[u] = v
            self.match_in[v] = u
        self.size = start.size
        self._seen = [0] * n
        self._stamp = 0

    def driver_count(self) -> int:
        return max(1, self.n_alive - self.size)

    def remove(self, v: int) -> None:
        out_adj, in_adj = self.out_adj, self.in_adj
        match_out, match_in = self.match_out, self.match_in

        lost_head = match_out[v]
        if lost_head != -1:
            match_in[lost_head] = -1
            match_out[v] = -1
            self.size -= 1
        lost_tail = match_in[v]
        if lost_tail != -1:
            match_out[lost_tail] = -1
            match_in[v] = -1
            self.size -= 1

        for h in out_adj[v]:
            in_adj[h].remove(v)
        for t in in_adj[v]:
            out_adj[t].remove(v)
        out_adj[v] = []
        in_adj[v] = []
        self.n_alive -= 1

        if lost_tail != -1 and self._augment_from_tail(lost_tail):
            self.size += 1
        if lost_head != -1 and match_in[lost_head] == -1:
            if self._augment_from_head(lost_head):
                self.size += 1

    def _augment_from_tail(self, root: int) -> bool:
        adj = self.out_adj
        match_out, match_in = self.match_out, self.match_in
        self._stamp += 1
        stamp = self._stamp
        seen = self._seen
        parent = {}
        path = [root]
        pos = {root: 0}
        while path:
            u = path[-1]
            i = pos[u]
            lst = adj[u]
            advanced = False
            while i < len(lst):
                h = lst[i]
                i += 1
                if seen[h] == stamp:
                    continue
                seen[h] = stamp
                parent[h] = u
                t = match_in[h]
                if t == -1:
                    pos[u] = i
                    while True:
                        tail = parent[h]
                        nxt = match_out[tail]
                        match_out[tail] = h
                        match_in[h] = tail
                        if nxt == -1:
                            return True
                        h = nxt
                pos[u] = i
                path.append(t)
                pos[t] = 0
                advanced = True
                break
            if not advanced:
                pos[u] = i
                path.pop()
        return False

    def _augment_from_head(self, root: int) -> bool:
        adj = self.in_adj
        match_out, match_in = self.match_out, self.match_in
        self._stamp += 1
        stamp = self._stamp
        seen = self._seen
        parent = {}
        path = [root]
        pos = {root: 0}
        while path:
            u = path[-1]
            i = pos[u]
            lst = adj[u]
            advanced = False
            while i < len(lst):
                t = lst[i]
                i += 1
                if seen[t] == stamp:
                    continue
                seen[t] = stamp
                parent[t] = u
                h = match_out[t]
                if h == -1:
                    pos[u] = i
                    while True:
                        head = parent[t]
                        nxt = match_in[head]
                        match_in[head] = t
                        match_out[t] = head
                        if nxt == -1:
                            return True
                        t = nxt
                pos[u] = i
                path.append(h)
                pos[h] = 0
                advanced = True
                break
            if not advanced:
                pos[u] = i
                path.pop()
        return False


class _RankAttack:
    """Exact-criterion engine; recomputes the adjacency rank per step."""

    def __init__(self, g: DirectedGraph) -> None:
        self.alive = [True] * g.node_count
        self.n_alive = g.node_count
        self.out_adj = g.out_adjacency()

    def remove(self, v: int) -> None:
        self.alive[v] = False
        self.n_alive -= 1

    def driver_count(self) -> int:
        nodes = [u for u, a in enumerate(self.alive) if a]
        index = {u: i for i, u in enumerate(nodes)}
        rows = [[0] * len(nodes) for _ in nodes]
        for u in nodes:
            row = rows[index[u]]
            for h in self.out_adj[u]:
                if self.alive[h]:
                    row[index[h]] = 1
        from .controllability import rank_fraction_free, rank_mod_prime

        if len(nodes) <= 64:
            r = rank_fraction_free(rows) if nodes else 0
        else:
            r = rank_mod_prime(rows)
        return max(1, len(nodes) - r)


def _make_engine(g: DirectedGraph, criterion: str):
    _check_criterion(criterion)
    return _MatchingAttack(g) if criterion == STRUCTURAL else _RankAttack(g)


def curve(g: DirectedGraph, sequence, criterion: str = STRUCTURAL) -> ControllabilityCurve:
    """Driver-density curve of one removal sequence over original node ids."""
    seq = validate_sequence(g, sequence)
    engine = _make_engine(g, criterion)
    n = g.node_count
    values = []
    for i, v in enumerate(seq, start=1):
        engine.remove(v)
        values.append(Fraction(engine.driver_count(), n - i))
    return ControllabilityCurve(values=tuple(values), criterion=criterion)


def rc(curve_or_values) -> RobustnessScore:
    """Mean of a controllability curve; exact when the curve is short."""
    values = getattr(curve_or_values, "values", curve_or_values)
    if not values:
        raise ValueError("cannot score an empty curve")
    if len(values) <= RATIONAL_SCORE_LIMIT:
        value: Fraction | float = sum(values, Fraction(0)) / len(values)
    else:
        value = math.fsum(float(v) for v in values) / len(values)
    return RobustnessScore(value=value, provenance="single-sequence")


def iter_attack_curves(g: DirectedGraph, runs: int, seed: int, criterion: str = STRUCTURAL):
    """Yield the curve of each uniformly random removal run.

    Run k draws its permutation from the stream (seed, ATTACK, k), so any
    prefix of runs is reproducible independently of the rest.
    """
    if runs < 1:
        raise ValueError("runs must be at least 1")
    n = g.node_count
    for k in range(runs):
        gen = streams.spawn_rng(seed, streams.ATTACK, k)
        seq = tuple(int(x) for x in gen.permutation(n)[: n - 1])
        yield curve(g, seq, criterion)


def random_attack(
    g: DirectedGraph, runs: int, seed: int, criterion: str = STRUCTURAL
) -> RandomAttackResult:
    """Mean/std density curve and mean score over uniformly random attacks.

    Aggregation sums exact rationals per step before any float conversion,
    so the result is identical no matter how runs would be scheduled.
    """
    n = g.node_count
    sums = [Fraction(0)] * (n - 1)
    sq_sums = [Fraction(0)] * (n - 1)
    run_scores = []
    for c in iter_attack_curves(g, runs, seed, criterion):
        for i, v in enumerate(c.values):
            sums[i] += v
            sq_sums[i] += v * v
        run_scores.append(float(rc(c).value))
    mean = tuple(float(s / runs) for s in sums)
    std = tuple(
        math.sqrt(max(0.0, float(q / runs - (s / runs) ** 2)))
        for s, q in zip(sums, sq_sums)
    )
    mean_score = math.fsum(run_scores) / runs
    std_score = math.sqrt(
        max(0.0, math.fsum(x * x for x in run_scores) / runs - mean_score**2)
    )
    return RandomAttackResult(
        mean_density=mean,
        std_density=std,
        score=RobustnessScore(value=mean_score, provenance="monte-carlo", std=std_score),
        runs=runs,
        criterion=criterion,
    )


def _subset_deficiency(n: int, head_masks, alive: int, criterion: str) -> int:
    """Unmatched-node (or rank-defect) count of the alive-bitmask subgraph.

    This is the driver count before the floor of one; a perfectly matched
    (or full-rank) survivor yields zero.
    """
    size = bin(alive).count("1")
    if criterion == EXACT:
        nodes = [u for u in range(n) if alive >> u & 1]
        index = {u: i for i, u in enumerate(nodes)}
        rows = [[0] * size for _ in nodes]
        for u in nodes:
            m = head_masks[u] & alive
            for v in nodes:
                if m >> v & 1:
                    rows[index[u]][index[v]] = 1
        from .controllability import rank_fraction_free

        return size - rank_fraction_free(rows)
    # Kuhn matching over the surviving arcs.
    match_in = {}

    def try_tail(t: int, banned: set) -> bool:
        m = head_masks[t] & alive
        while m:
            low = m & -m
            m ^= low
            h = low.bit_length() - 1
            if h in banned:
                continue
            banned.add(h)
            if h not in match_in or try_tail(match_in[h], banned):
                match_in[h] = t
                return True
        return False

    matched = 0
    for t in range(n):
        if alive >> t & 1 and head_masks[t] & alive:
            if try_tail(t, set()):
                matched += 1
    return size - matched


def exhaustive_rc(
    g: DirectedGraph,
    mode: str,
    criterion: str = STRUCTURAL,
    floor_drivers: bool = True,
) -> RobustnessScore:
    """Exact expected score over all removal orders.

    'permutations' averages the score of every (N-1)-permutation directly;
    'subsets' uses the fact that after i uniform removals every size-i removed
    set is equally likely, so only per-size subset expectations are needed.
    Both are exact rationals and agree; the subset route reaches larger N.

    floor_drivers=True charges every survivor at least one driver, matching
    the per-curve definition. With floor_drivers=False a perfectly matched
    (full-rank) survivor contributes zero; that deficiency variant separates
    dense instances the floored mean cannot rank, and the catalog module
    uses it to flag optima. Both variants stay in (0, 1] because the final
    one-node survivor always needs a driver.
    """
    _check_criterion(criterion)
    n = g.node_count
    if n < 2:
        raise ValueError("need at least 2 nodes")
    head_masks = [0] * n
    for u, v in g.edges:
        head_masks[u] |= 1 << v
    full = (1 << n) - 1

    def count_for(alive: int) -> int:
        d = _subset_deficiency(n, head_masks, alive, criterion)
        return max(1, d) if floor_drivers else d

    provenance_tag = "" if floor_drivers else "-deficiency"

    if mode == "permutations":
        if n > _PERMUTATION_NODE_LIMIT:
            raise ValueError(
                f"permutation mode enumerates N! orders; limited to N <= {_PERMUTATION_NODE_LIMIT}"
            )
        memo: dict[int, int] = {}

        def drivers(alive: int) -> int:
            if alive not in memo:
                memo[alive] = count_for(alive)
            return memo[alive]

        total = Fraction(0)
        count = 0
        for seq in permutations(range(n), n - 1):
            alive = full
            acc = Fraction(0)
            for i, v in enumerate(seq, start=1):
                alive ^= 1 << v
                acc += Fraction(drivers(alive), n - i)
            total += acc / (n - 1)
            count += 1
        return RobustnessScore(
            value=total / count,
            provenance="exhaustive-permutations" + provenance_tag,
        )

    if mode == "subsets":
        if n > _SUBSET_NODE_LIMIT:
            raise ValueError(
                f"subset mode enumerates 2^N survivor sets; limited to N <= {_SUBSET_NODE_LIMIT}"
            )
        score = Fraction(0)
        for removed in range(1, n):
            survivors = n - removed
            total_nd = 0
            for kept in combinations(range(n), survivors):
                alive = 0
                for u in kept:
                    alive |= 1 << u
                total_nd += count_for(alive)
            score += Fraction(total_nd, math.comb(n, survivors) * survivors)
        return RobustnessScore(
            value=score / (n - 1),
            provenance="exhaustive-subsets" + provenance_tag,
        )

    raise ValueError(f"unknown mode {mode!r}")
