"""Random digraph generators with exact edge counts.

Each generator builds its characteristic structure first and then adjusts to
exactly M arcs by uniform additions or removals, so every model is compared
at identical (N, M). All draw orders are fixed and documented in the code;
given the same seed a generator returns the same graph on every run.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import rng as streams
from .graph import DirectedGraph

MODELS = ("er", "sw", "sf", "qsn", "rtn", "rrn")

# Consecutive failed growth attempts tolerated before falling back to
# uniform fill; keeps growth models from spinning on dense corner cases.
_GROWTH_RETRY_CAP = 10**6

# Consecutive rejected uniform-addition draws before switching to explicit
# enumeration of the absent arcs.
_REJECTION_STREAK = 200


@dataclass(frozen=True)
class GeneratorParams:
    """Shared parameter bundle for all models.

    Model-specific fields are ignored by models that do not use them. q=None
    asks the snapback model to solve for the probability that makes the
    expected pre-adjustment arc count equal edge_count.
    """

    model: str
    node_count: int
    edge_count: int
    seed: int
    base_ring_k: int = 2
    sigma: float = 0.999
    theta: float = 1.0
    snapback_stride: int = 2
    q: float | None = None

    def __post_init__(self) -> None:
        if self.model not in MODELS:
            raise ValueError(f"unknown model {self.model!r}")
        if self.node_count < 1:
            raise ValueError("node_count must be positive")
        if not 0 <= self.edge_count <= self.node_count * (self.node_count - 1):
            raise ValueError("edge_count out of range for a simple digraph")
        if not 0 <= self.sigma < 1:
            raise ValueError("sigma must lie in [0, 1)")
        if self.theta < 0:
            raise ValueError("theta must be non-negative")
        if self.snapback_stride < 1:
            raise ValueError("snapback_stride must be positive")
        if self.q is not None and not 0 <= self.q <= 1:
            raise ValueError("q must lie in [0, 1]")

    @property
    def pair_probability(self) -> Fraction:
        """Per-pair connection probability M / (N (N - 1))."""
        return Fraction(self.edge_count, self.node_count * (self.node_count - 1))


def generate(params: GeneratorParams) -> DirectedGraph:
    builder = {
        "er": gen_er,
        "sw": gen_sw,
        "sf": gen_sf,
        "qsn": gen_qsn,
        "rtn": gen_rtn,
        "rrn": gen_rrn,
    }[params.model]
    return builder(params)


def _trim_edges(edge_set: set, count: int, gen) -> None:
    pool = sorted(edge_set)
    for _ in range(count):
        i = int(gen.integers(len(pool)))
        edge = pool[i]
        pool[i] = pool[-1]
        pool.pop()
        edge_set.remove(edge)


def _fill_edges(edge_set: set, n: int, count: int, gen) -> None:
    """Add `count` arcs drawn uniformly among the absent ordered pairs."""
    missing = count
    streak = 0
    while missing:
        u = int(gen.integers(n))
        v = int(gen.integers(n))
        if u != v and (u, v) not in edge_set:
            edge_set.add((u, v))
            missing -= 1
            streak = 0
            continue
        streak += 1
        if streak >= _REJECTION_STREAK:
            # Dense region: enumerate what is absent and sample directly.
            absent = [
                (a, b)
                for a in range(n)
                for b in range(n)
                if a != b and (a, b) not in edge_set
            ]
            idx = gen.permutation(len(absent))[:missing]
            for i in idx:
                edge_set.add(absent[int(i)])
            return


def adjust_edge_count(g: DirectedGraph, edge_count: int, seed: int) -> DirectedGraph:
    """Uniformly add or remove arcs until the graph has exactly edge_count."""
    if not 0 <= edge_count <= g.max_edge_count:
        raise ValueError("target edge count out of range")
    edge_set = set(g.edges)
    gen = streams.spawn_rng(seed, streams.ADJUST)
    _adjust(edge_set, g.node_count, edge_count, gen)
    return DirectedGraph(g.node_count, edge_set)


def _adjust(edge_set: set, n: int, target: int, gen) -> None:
    if len(edge_set) > target:
        _trim_edges(edge_set, len(edge_set) - target, gen)
    elif len(edge_set) < target:
        _fill_edges(edge_set, n, target - len(edge_set), gen)


def gen_er(params: GeneratorParams) -> DirectedGraph:
    """Uniform pairwise attachment.

    Every unordered pair is visited once (row-major) and connected with
    probability M / (N (N - 1)) by an arc of uniformly random direction,
    then the count is adjusted to exactly M.
    """
    n, m = params.node_count, params.edge_count
    gen = streams.spawn_rng(params.seed, streams.GENERATE)
    p = float(params.pair_probability)
    edge_set: set[tuple[int, int]] = set()
    for i in range(n - 1):
        draws = gen.random(n - 1 - i) < p
        hits = np.flatnonzero(draws)
        if hits.size:
            flips = gen.integers(0, 2, hits.size)
            for j, flip in zip(hits, flips):
                pair = (i, int(j) + i + 1)
                edge_set.add(pair if flip == 0 else (pair[1], pair[0]))
    _adjust(edge_set, n, m, gen)
    return DirectedGraph(n, edge_set)


def gen_sw(params: GeneratorParams) -> DirectedGraph:
    """Ring substrate plus uniform random arcs.

    The substrate wires each node forward to its one- and two-step ring
    successors (2N arcs for the default base_ring_k=2); the remaining M - 2N
    arcs are drawn uniformly among the absent ordered pairs.
    """
    n, m = params.node_count, params.edge_count
    if params.base_ring_k != 2:
        raise ValueError("only the two-neighbour ring substrate is defined")
    if n < 3:
        raise ValueError("ring substrate needs at least 3 nodes")
    base = set()
    for i in range(n):
        base.add((i, (i + 1) % n))
        base.add((i, (i + 2) % n))
    if m < len(base):
        raise ValueError(f"edge_count must be at least {len(base)} for this substrate")
    gen = streams.spawn_rng(params.seed, streams.GENERATE)
    _fill_edges(base, n, m - len(base), gen)
    return DirectedGraph(n, base)


def attachment_weights(node_count: int, sigma: float, theta: float) -> np.ndarray:
    """Sampling weight per node: (u + 1 + theta) ** -sigma, earlier ids heavier."""
    return (np.arange(node_count) + 1.0 + theta) ** -sigma


def gen_sf(params: GeneratorParams) -> DirectedGraph:
    """Static-model scale-free attachment.

    Tails and heads are drawn independently in proportion to the attachment
    weights, redrawing the head until it differs from the tail; the arc is
    added when absent. Stalls fall back to uniform fill, and the count is
    adjusted to exactly M.
    """
    n, m = params.node_count, params.edge_count
    gen = streams.spawn_rng(params.seed, streams.GENERATE)
    weights = attachment_weights(n, params.sigma, params.theta)
    cumulative = np.cumsum(weights)
    total = float(cumulative[-1])

    def draw() -> int:
        # min() guards the one-in-2^53 case where r * total rounds up to total.
        idx = int(np.searchsorted(cumulative, gen.random() * total, side="right"))
        return min(idx, n - 1)

    edge_set: set[tuple[int, int]] = set()
    failures = 0
    while len(edge_set) < m and failures < _GROWTH_RETRY_CAP:
        u = draw()
        v = draw()
        while v == u:
            v = draw()
        if (u, v) in edge_set:
            failures += 1
            continue
        failures = 0
        edge_set.add((u, v))
    _adjust(edge_set, n, m, gen)
    return DirectedGraph(n, edge_set)


def solve_snapback_q(params: GeneratorParams) -> float:
    """Probability making the expected pre-adjustment arc count equal M."""
    slots = _snapback_slots(params.node_count, params.snapback_stride)
    if not slots:
        return 0.0
    wanted = params.edge_count - (params.node_count - 1)
    return min(1.0, max(0.0, wanted / len(slots)))


def _snapback_slots(n: int, stride: int) -> list[tuple[int, int]]:
    # 0-based: node u may snap back to u - l*stride for l = 1.. while >= 0.
    slots = []
    for u in range(stride, n):
        target = u - stride
        while target >= 0:
            slots.append((u, target))
            target -= stride
    return slots


def gen_qsn(params: GeneratorParams) -> DirectedGraph:
    """Directed chain with probabilistic stride snapbacks.

    Every node keeps an arc to its successor; each (node, earlier node at a
    stride multiple) slot independently gains a backward arc with probability
    q. Slots are visited in increasing (node, stride multiple) order.
    """
    n, m = params.node_count, params.edge_count
    gen = streams.spawn_rng(params.seed, streams.GENERATE)
    q = solve_snapback_q(params) if params.q is None else params.q
    edge_set = {(i, i + 1) for i in range(n - 1)}
    slots = _snapback_slots(n, params.snapback_stride)
    if slots and q > 0:
        draws = gen.random(len(slots))
        for (u, target), r in zip(slots, draws):
            if r < q:
                edge_set.add((u, target))
    _adjust(edge_set, n, m, gen)
    return DirectedGraph(n, edge_set)


class _GrowthState:
    """Arc set plus deduplicated undirected neighbour lists."""

    def __init__(self, n: int, seed_edges) -> None:
        self.n = n
        self.edge_set: set[tuple[int, int]] = set()
        self.neighbors: list[list[int]] = [[] for _ in range(n)]
        self._neighbor_sets: list[set[int]] = [set() for _ in range(n)]
        for u, v in seed_edges:
            self.add(u, v)

    def add(self, u: int, v: int) -> None:
        self.edge_set.add((u, v))
        if v not in self._neighbor_sets[u]:
            self._neighbor_sets[u].add(v)
            self.neighbors[u].append(v)
        if u not in self._neighbor_sets[v]:
            self._neighbor_sets[v].add(u)
            self.neighbors[v].append(u)

    def adjacent(self, u: int, v: int) -> bool:
        return v in self._neighbor_sets[u]


def gen_rtn(params: GeneratorParams) -> DirectedGraph:
    """Triangle growth: seed 3-cycle, then repeated 2-arc triangle closures.

    A step picks two non-adjacent nodes i, j and a random neighbour k of j;
    the two new arcs close a directed triangle through i consistent with the
    orientation of the j-k arc. Steps whose new arcs would duplicate existing
    ones are rejected.
    """
    n, m = params.node_count, params.edge_count
    if n < 3:
        raise ValueError("triangle growth needs at least 3 nodes")
    gen = streams.spawn_rng(params.seed, streams.GENERATE)
    state = _GrowthState(n, [(0, 1), (1, 2), (2, 0)])
    failures = 0
    while len(state.edge_set) < m and failures < _GROWTH_RETRY_CAP:
        i = int(gen.integers(n))
        j = int(gen.integers(n))
        if i == j or state.adjacent(i, j):
            failures += 1
            continue
        nbrs = state.neighbors[j]
        if not nbrs:
            failures += 1
            continue
        k = nbrs[int(gen.integers(len(nbrs)))]
        if (j, k) in state.edge_set:
            new_arcs = ((i, j), (k, i))
        else:
            new_arcs = ((j, i), (i, k))
        if any(arc in state.edge_set for arc in new_arcs):
            failures += 1
            continue
        for u, v in new_arcs:
            state.add(u, v)
        failures = 0
    edge_set = state.edge_set
    gen_adjust = streams.spawn_rng(params.seed, streams.GENERATE, 1)
    _adjust(edge_set, n, m, gen_adjust)
    return DirectedGraph(n, edge_set)


def gen_rrn(params: GeneratorParams) -> DirectedGraph:
    """Rectangle growth: seed 4-cycle, then repeated 3-arc rectangle closures.

    A step picks three pairwise non-adjacent nodes i, j, k and a random
    neighbour w of k; the three new arcs close a directed rectangle oriented
    consistently with the k-w arc. Steps whose new arcs would duplicate
    existing ones are rejected.
    """
    n, m = params.node_count, params.edge_count
    if n < 4:
        raise ValueError("rectangle growth needs at least 4 nodes")
    gen = streams.spawn_rng(params.seed, streams.GENERATE)
    state = _GrowthState(n, [(0, 1), (1, 2), (2, 3), (3, 0)])
    failures = 0
    while len(state.edge_set) < m and failures < _GROWTH_RETRY_CAP:
        i = int(gen.integers(n))
        j = int(gen.integers(n))
        k = int(gen.integers(n))
        if i == j or i == k or j == k:
            failures += 1
            continue
        if state.adjacent(i, j) or state.adjacent(i, k) or state.adjacent(j, k):
            failures += 1
            continue
        nbrs = state.neighbors[k]
        if not nbrs:
            failures += 1
            continue
        w = nbrs[int(gen.integers(len(nbrs)))]
        if (k, w) in state.edge_set:
            new_arcs = ((w, i), (i, j), (j, k))
        else:
            new_arcs = ((k, i), (i, j), (j, w))
        if any(arc in state.edge_set for arc in new_arcs):
            failures += 1
            continue
        for u, v in new_arcs:
            state.add(u, v)
        failures = 0
    edge_set = state.edge_set
    gen_adjust = streams.spawn_rng(params.seed, streams.GENERATE, 1)
    _adjust(edge_set, n, m, gen_adjust)
    return DirectedGraph(n, edge_set)
