"""Topology diagnostics: heterogeneity, disconnection, degrees, path stats.

Degree heterogeneity is the moment ratio <k^2>/<k>^2 of one degree side,
kept as an exact rational. The removal-curve and disconnection routines
reuse the attack module's seeding scheme so a whole experiment derives from
one root seed. Shortest-path quantities are directed; clustering is scored
on the undirected shadow because arc direction has no agreed triangle
convention here.
"""

from __future__ import annotations

import math
from collections import Counter, deque
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import rng as streams
from .graph import IN, OUT, DirectedGraph

_SIDES = (OUT, IN)


@dataclass(frozen=True)
class Heterogeneity:
    """Moment ratio <k^2>/<k>^2 of one degree side; 1 for regular graphs."""

    value: Fraction
    side: str


@dataclass(frozen=True)
class HeterogeneityStep:
    """Curve point after `removed` deletions, averaged over defined runs.

    mean is None when the survivor had no arcs in every run (mean degree 0
    leaves the ratio undefined); defined_runs counts the runs that
    contributed.
    """

    removed: int
    removed_fraction: Fraction
    mean: Fraction | None
    defined_runs: int


@dataclass(frozen=True)
class BoxplotSummary:
    """Five-number summary with Tukey fences (1.5 IQR) for the whiskers."""

    low: float
    q1: float
    median: float
    q3: float
    high: float
    outliers: tuple[float, ...]


@dataclass(frozen=True)
class DisconnectionReport:
    """Per-run first removal counts that broke the graph, plus the boxplot."""

    thresholds: tuple[int, ...]
    fractions: tuple[Fraction, ...]
    boxplot: BoxplotSummary


@dataclass(frozen=True)
class FeatureBundle:
    mean_degree: Fraction
    average_path_length: Fraction | float
    average_betweenness: float
    clustering: Fraction
    h_out: Fraction
    h_in: Fraction


def _side_degrees(g: DirectedGraph, side: str) -> tuple[int, ...]:
    if side not in _SIDES:
        raise ValueError(f"side must be one of {_SIDES}")
    degrees = g.degrees()
    return degrees.out_degrees if side == OUT else degrees.in_degrees


def heterogeneity(g: DirectedGraph, side: str) -> Heterogeneity:
    """Exact <k^2>/<k>^2 of the chosen degree side; needs at least one arc."""
    ks = _side_degrees(g, side)
    if g.edge_count == 0:
        raise ValueError("heterogeneity is undefined with no arcs")
    n = g.node_count
    total = sum(ks)
    square_total = sum(k * k for k in ks)
    # <k^2>/<k>^2 = (sum k^2 / n) / (sum k / n)^2 = n * sum k^2 / (sum k)^2
    return Heterogeneity(Fraction(n * square_total, total * total), side)


def heterogeneity_curve(
    g: DirectedGraph,
    seed: int,
    runs: int,
    side: str,
) -> tuple[HeterogeneityStep, ...]:
    """Mean survivor heterogeneity after each uniform random removal step.

    Each run draws its own node permutation from a child stream of `seed`
    and deletes along it; after step i the ratio of the survivor's degree
    side is taken when it still has arcs. Points average the defined runs.
    """
    if side not in _SIDES:
        raise ValueError(f"side must be one of {_SIDES}")
    if runs < 1:
        raise ValueError("runs must be >= 1")
    n = g.node_count
    if n < 2:
        raise ValueError("removal curve needs at least 2 nodes")
    out_adj = g.out_adjacency()
    in_adj = g.in_adjacency()

    sums: list[Fraction] = [Fraction(0)] * (n - 1)
    defined = [0] * (n - 1)
    for run in range(runs):
        gen = streams.spawn_rng(seed, streams.HETEROGENEITY, run)
        order = gen.permutation(n)
        alive = [True] * n
        out_deg = [len(out_adj[v]) for v in range(n)]
        in_deg = [len(in_adj[v]) for v in range(n)]
        alive_count = n
        for step in range(n - 1):
            v = int(order[step])
            alive[v] = False
            alive_count -= 1
            for w in out_adj[v]:
                if alive[w]:
                    in_deg[w] -= 1
            for u in in_adj[v]:
                if alive[u]:
                    out_deg[u] -= 1
            degs = out_deg if side == OUT else in_deg
            total = 0
            square_total = 0
            for u in range(n):
                if alive[u]:
                    total += degs[u]
                    square_total += degs[u] * degs[u]
            if total:
                sums[step] += Fraction(alive_count * square_total, total * total)
                defined[step] += 1

    return tuple(
        HeterogeneityStep(
            removed=i + 1,
            removed_fraction=Fraction(i + 1, n),
            mean=sums[i] / defined[i] if defined[i] else None,
            defined_runs=defined[i],
        )
        for i in range(n - 1)
    )


class _UnionFind:
    __slots__ = ("parent",)

    def __init__(self, n: int) -> None:
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[ra] = rb
        return True


def _is_broken(g: DirectedGraph) -> bool:
    """Broken means weakly disconnected or arcless; one node is connected."""
    if g.node_count == 0:
        return True
    if g.edge_count == 0:
        return True
    return not g.is_weakly_connected()


def disconnection_step(g: DirectedGraph, sequence: tuple[int, ...]) -> int | None:
    """First i (1-based) whose removal prefix breaks the graph, else None.

    Deleting nodes in reverse with a union-find scores every prefix of the
    sequence in one linear pass instead of one connectivity sweep per step.
    """
    n = g.node_count
    if len(set(sequence)) != len(sequence) or any(
        not 0 <= v < n for v in sequence
    ):
        raise ValueError("sequence must be distinct node ids of the graph")
    if _is_broken(g):
        return 0

    position = {v: i for i, v in enumerate(sequence)}
    # Nodes never removed sit past the end of the sequence.
    removal_step = [position.get(v, len(sequence)) for v in range(n)]

    # Rebuild from the fully stripped state: insert nodes in reverse removal
    # order, union arcs whose two endpoints are both back, and record the
    # component and arc tallies seen after each prefix.
    nodes_by_step = sorted(range(n), key=lambda v: -removal_step[v])
    uf = _UnionFind(n)
    present = [False] * n
    components = 0
    arcs = 0
    out_adj = g.out_adjacency()
    in_adj = g.in_adjacency()
    broken_after: dict[int, bool] = {}
    idx = 0
    for prefix in range(len(sequence), 0, -1):
        while idx < n and removal_step[nodes_by_step[idx]] >= prefix:
            v = nodes_by_step[idx]
            present[v] = True
            components += 1
            for w in out_adj[v]:
                if present[w]:
                    arcs += 1
                    if uf.union(v, w):
                        components -= 1
            for u in in_adj[v]:
                if present[u]:
                    arcs += 1
                    if uf.union(u, v):
                        components -= 1
            idx += 1
        survivors = n - prefix
        broken_after[prefix] = survivors == 0 or arcs == 0 or components > 1

    for i in range(1, len(sequence) + 1):
        if broken_after[i]:
            return i
    return None


def disconnection_threshold(
    g: DirectedGraph, seed: int, runs: int
) -> DisconnectionReport:
    """Distribution over runs of the first removal count that breaks g.

    Every full permutation eventually strips all arcs, so each run yields a
    threshold of at most N-1. An input that is already broken short-circuits
    to zero for every run.
    """
    if runs < 1:
        raise ValueError("runs must be >= 1")
    n = g.node_count
    if n < 2:
        raise ValueError("threshold needs at least 2 nodes")
    if _is_broken(g):
        thresholds = (0,) * runs
    else:
        found: list[int] = []
        for run in range(runs):
            gen = streams.spawn_rng(seed, streams.DISCONNECT, run)
            order = tuple(int(v) for v in gen.permutation(n))[: n - 1]
            step = disconnection_step(g, order)
            assert step is not None  # arcless at the latest by step N-1
            found.append(step)
        thresholds = tuple(found)
    fractions = tuple(Fraction(t, n) for t in thresholds)
    return DisconnectionReport(thresholds, fractions, boxplot(fractions))


def boxplot(values: tuple[Fraction, ...] | tuple[float, ...]) -> BoxplotSummary:
    """Quartiles plus Tukey whiskers; points beyond 1.5 IQR are outliers."""
    if not values:
        raise ValueError("boxplot needs at least one value")
    data = np.sort(np.asarray([float(v) for v in values]))
    q1, median, q3 = (float(q) for q in np.percentile(data, (25, 50, 75)))
    reach = 1.5 * (q3 - q1)
    inside = data[(data >= q1 - reach) & (data <= q3 + reach)]
    outliers = data[(data < q1 - reach) | (data > q3 + reach)]
    return BoxplotSummary(
        low=float(inside[0]),
        q1=q1,
        median=median,
        q3=q3,
        high=float(inside[-1]),
        outliers=tuple(float(v) for v in outliers),
    )


def degree_distribution(g: DirectedGraph, side: str) -> dict[int, int]:
    """Histogram {degree: node count}; masses sum to N."""
    return dict(sorted(Counter(_side_degrees(g, side)).items()))


def _directed_distances(g: DirectedGraph, source: int) -> list[int]:
    out_adj = g.out_adjacency()
    dist = [-1] * g.node_count
    dist[source] = 0
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for w in out_adj[u]:
            if dist[w] < 0:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def average_path_length(g: DirectedGraph) -> Fraction | float:
    """Mean directed distance over ordered pairs; inf if any is unreachable."""
    n = g.node_count
    if n < 2:
        raise ValueError("path length needs at least 2 nodes")
    total = 0
    for s in range(n):
        dist = _directed_distances(g, s)
        if any(d < 0 for d in dist):
            return math.inf
        total += sum(dist)
    return Fraction(total, n * (n - 1))


def betweenness(g: DirectedGraph) -> tuple[float, ...]:
    """Per-node directed shortest-path betweenness, endpoints excluded.

    Raw pair sums (no normalization): node v scores sum over ordered pairs
    s != v != t of the fraction of s-t geodesics through v.
    """
    n = g.node_count
    out_adj = g.out_adjacency()
    score = [0.0] * n
    for s in range(n):
        sigma = [0] * n
        dist = [-1] * n
        preds: list[list[int]] = [[] for _ in range(n)]
        sigma[s] = 1
        dist[s] = 0
        order: list[int] = []
        queue = deque([s])
        while queue:
            u = queue.popleft()
            order.append(u)
            for w in out_adj[u]:
                if dist[w] < 0:
                    dist[w] = dist[u] + 1
                    queue.append(w)
                if dist[w] == dist[u] + 1:
                    sigma[w] += sigma[u]
                    preds[w].append(u)
        delta = [0.0] * n
        for w in reversed(order):
            for u in preds[w]:
                delta[u] += sigma[u] / sigma[w] * (1.0 + delta[w])
            if w != s:
                score[w] += delta[w]
    return tuple(score)


def clustering(g: DirectedGraph) -> Fraction:
    """Global transitivity of the undirected shadow: 3*triangles / triples."""
    n = g.node_count
    neighbors: list[set[int]] = [set() for _ in range(n)]
    for u, v in g.edges:
        neighbors[u].add(v)
        neighbors[v].add(u)
    triples = sum(len(nb) * (len(nb) - 1) // 2 for nb in neighbors)
    if triples == 0:
        return Fraction(0)
    closed = 0
    for u in range(n):
        for v in neighbors[u]:
            if v > u:
                closed += sum(1 for w in neighbors[u] & neighbors[v] if w > v)
    # closed counts each triangle once; transitivity wants closed triples,
    # three per triangle.
    return Fraction(3 * closed, triples)


def basic_features(g: DirectedGraph) -> FeatureBundle:
    """The summary row used when comparing graphs before and after repair."""
    n = g.node_count
    if n < 2:
        raise ValueError("features need at least 2 nodes")
    if g.edge_count == 0:
        raise ValueError("features need at least one arc")
    scores = betweenness(g)
    return FeatureBundle(
        mean_degree=Fraction(g.edge_count, n),
        average_path_length=average_path_length(g),
        average_betweenness=math.fsum(scores) / n,
        clustering=clustering(g),
        h_out=heterogeneity(g, OUT).value,
        h_in=heterogeneity(g, IN).value,
    )
