"""Shared builders and independent oracles.

The oracles deliberately avoid the library's own algorithms: rank is done
by rational Gaussian elimination, matching by exhaustive bitmask DP, and
path statistics by breadth-first search plus explicit predecessor counting.
Tests compare library output against these, never against itself.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

import pytest

from netctrl.graph import DirectedGraph


# --- builders ---------------------------------------------------------------


def cycle(n: int) -> DirectedGraph:
    return DirectedGraph(n, [(i, (i + 1) % n) for i in range(n)])


def chain(n: int) -> DirectedGraph:
    return DirectedGraph(n, [(i, i + 1) for i in range(n - 1)])


def out_star(n: int) -> DirectedGraph:
    return DirectedGraph(n, [(0, i) for i in range(1, n)])


def complete(n: int) -> DirectedGraph:
    return DirectedGraph(n, [(u, v) for u in range(n) for v in range(n) if u != v])


def random_digraph(gen, n: int, m: int) -> DirectedGraph:
    """Uniform simple digraph with exactly m arcs."""
    pairs = [(u, v) for u in range(n) for v in range(n) if u != v]
    if m > len(pairs):
        raise ValueError("too many arcs requested")
    picked = gen.choice(len(pairs), size=m, replace=False)
    return DirectedGraph(n, [pairs[i] for i in picked])


# --- oracles ----------------------------------------------------------------


def fraction_rank(rows: list[list[int]]) -> int:
    """Row-reduce over exact rationals and count the pivots."""
    work = [[Fraction(x) for x in row] for row in rows]
    rank = 0
    cols = len(work[0]) if work else 0
    row = 0
    for col in range(cols):
        pivot = next((r for r in range(row, len(work)) if work[r][col]), None)
        if pivot is None:
            continue
        work[row], work[pivot] = work[pivot], work[row]
        inv = 1 / work[row][col]
        work[row] = [x * inv for x in work[row]]
        for r in range(len(work)):
            if r != row and work[r][col]:
                factor = work[r][col]
                work[r] = [a - factor * b for a, b in zip(work[r], work[row])]
        row += 1
        rank += 1
    return rank


def brute_matching_size(g: DirectedGraph) -> int:
    """Largest arc set with all tails distinct and all heads distinct.

    Exhaustive DP over (tail index, used-head bitmask); tractable to N = 10
    or so, which covers every test that calls it.
    """
    n = g.node_count
    heads = [0] * n
    for u, v in g.edges:
        heads[u] |= 1 << v

    @lru_cache(maxsize=None)
    def best(i: int, used: int) -> int:
        if i == n:
            return 0
        top = best(i + 1, used)
        free = heads[i] & ~used
        while free:
            bit = free & -free
            free ^= bit
            top = max(top, 1 + best(i + 1, used | bit))
        return top

    result = best(0, 0)
    best.cache_clear()
    return result


def path_census(g: DirectedGraph):
    """(distance, shortest-path count) per ordered pair, by plain BFS.

    Unreachable pairs get distance None. Counts accumulate along BFS
    layers: sigma[t] sums sigma over predecessors one layer closer.
    """
    n = g.node_count
    adj = g.out_adjacency()
    dist: list[list[int | None]] = [[None] * n for _ in range(n)]
    sigma = [[0] * n for _ in range(n)]
    for s in range(n):
        dist[s][s] = 0
        sigma[s][s] = 1
        frontier = [s]
        d = 0
        while frontier:
            nxt = []
            for u in frontier:
                for v in adj[u]:
                    if dist[s][v] is None:
                        dist[s][v] = d + 1
                        nxt.append(v)
                    if dist[s][v] == d + 1:
                        sigma[s][v] += sigma[s][u]
            frontier = nxt
            d += 1
    return dist, sigma


def brute_average_path_length(g: DirectedGraph):
    """Mean distance over ordered reachable-or-not pairs; inf when any pair
    is unreachable."""
    import math

    n = g.node_count
    dist, _ = path_census(g)
    total = Fraction(0)
    for s in range(n):
        for t in range(n):
            if s == t:
                continue
            if dist[s][t] is None:
                return math.inf
            total += dist[s][t]
    return total / (n * (n - 1))


def brute_betweenness(g: DirectedGraph) -> list[float]:
    """Per-node raw shortest-path load, endpoints excluded.

    For every ordered pair (s, t) and interior node v, add
    sigma(s, v) * sigma(v, t) / sigma(s, t) when v sits on a shortest path.
    """
    n = g.node_count
    dist, sigma = path_census(g)
    load = [Fraction(0)] * n
    for s in range(n):
        for t in range(n):
            if s == t or dist[s][t] is None:
                continue
            for v in range(n):
                if v in (s, t) or dist[s][v] is None or dist[v][t] is None:
                    continue
                if dist[s][v] + dist[v][t] == dist[s][t]:
                    load[v] += Fraction(sigma[s][v] * sigma[v][t], sigma[s][t])
    return [float(x) for x in load]


def survivor(g: DirectedGraph, removals) -> DirectedGraph:
    """Rebuild the graph left after deleting the given nodes in order."""
    out = g
    for i, node in enumerate(removals):
        shifted = node - sum(1 for prior in removals[:i] if prior < node)
        out = out.remove_node(shifted)
    return out


@pytest.fixture
def rng():
    import numpy as np

    return np.random.default_rng(20260817)
