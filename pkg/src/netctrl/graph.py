"""Immutable directed-graph values and isomorphism utilities.

Graphs are simple digraphs: no self-loops, no duplicate arcs, nodes are the
dense range 0..N-1. All operations return new values; nothing mutates.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import permutations

# Density at or below this fraction of the N(N-1) maximum counts as sparse.
SPARSE_DENSITY_LIMIT = Fraction(1, 20)

# Canonical forms minimize over all N! relabelings; past 8 nodes that is off
# the table, so the guard is explicit rather than letting callers hang.
CANONICAL_NODE_LIMIT = 8

# Degree-side labels shared by the band checker and the topology metrics.
OUT = "out"
IN = "in"


@dataclass(frozen=True)
class DegreeVector:
    """Per-node degree tallies for one graph, indexed by node id."""

    in_degrees: tuple[int, ...]
    out_degrees: tuple[int, ...]


@dataclass(frozen=True)
class DirectedGraph:
    """A simple directed graph on nodes 0..node_count-1."""

    node_count: int
    edges: frozenset[tuple[int, int]]

    def __init__(self, node_count: int, edges=()) -> None:
        object.__setattr__(self, "node_count", int(node_count))
        object.__setattr__(
            self, "edges", frozenset((int(u), int(v)) for u, v in edges)
        )
        if self.node_count < 0:
            raise ValueError("node_count must be non-negative")
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"self-loop at node {u}")
            if not (0 <= u < self.node_count and 0 <= v < self.node_count):
                raise ValueError(f"edge ({u}, {v}) out of range")

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @property
    def max_edge_count(self) -> int:
        return self.node_count * (self.node_count - 1)

    @property
    def is_sparse(self) -> bool:
        """True when density is at most SPARSE_DENSITY_LIMIT (vacuous for N <= 1)."""
        if self.max_edge_count == 0:
            return True
        return Fraction(self.edge_count, self.max_edge_count) <= SPARSE_DENSITY_LIMIT

    def degrees(self) -> DegreeVector:
        ins = [0] * self.node_count
        outs = [0] * self.node_count
        for u, v in self.edges:
            outs[u] += 1
            ins[v] += 1
        return DegreeVector(tuple(ins), tuple(outs))

    @cached_property
    def _out_adjacency(self) -> tuple[tuple[int, ...], ...]:
        adj: list[list[int]] = [[] for _ in range(self.node_count)]
        for u, v in sorted(self.edges):
            adj[u].append(v)
        return tuple(tuple(a) for a in adj)

    @cached_property
    def _in_adjacency(self) -> tuple[tuple[int, ...], ...]:
        adj: list[list[int]] = [[] for _ in range(self.node_count)]
        for u, v in sorted(self.edges):
            adj[v].append(u)
        return tuple(tuple(a) for a in adj)

    def out_adjacency(self) -> tuple[tuple[int, ...], ...]:
        """Per-node tuples of heads, sorted; index is the tail node id."""
        return self._out_adjacency

    def in_adjacency(self) -> tuple[tuple[int, ...], ...]:
        return self._in_adjacency

    def has_edge(self, u: int, v: int) -> bool:
        return (u, v) in self.edges

    def remove_node(self, node: int) -> "DirectedGraph":
        """Drop one node and its incident arcs; survivors re-index densely.

        Surviving ids shift down by one above the removed id, so the result
        again lives on 0..N-2.
        """
        if not (0 <= node < self.node_count):
            raise ValueError(f"node {node} out of range")
        kept = (
            (u - (u > node), v - (v > node))
            for u, v in self.edges
            if u != node and v != node
        )
        return DirectedGraph(self.node_count - 1, kept)

    def relabel(self, mapping: tuple[int, ...]) -> "DirectedGraph":
        """Apply a node permutation; mapping[old] = new."""
        if sorted(mapping) != list(range(self.node_count)):
            raise ValueError("mapping must be a permutation of the node ids")
        return DirectedGraph(
            self.node_count, ((mapping[u], mapping[v]) for u, v in self.edges)
        )

    def is_weakly_connected(self) -> bool:
        """Connectivity of the undirected shadow; a single node is connected."""
        n = self.node_count
        if n == 0:
            raise ValueError("connectivity is undefined for the empty graph")
        if n == 1:
            return True
        neighbors: list[list[int]] = [[] for _ in range(n)]
        for u, v in self.edges:
            neighbors[u].append(v)
            neighbors[v].append(u)
        seen = bytearray(n)
        seen[0] = 1
        stack = [0]
        reached = 1
        while stack:
            x = stack.pop()
            for y in neighbors[x]:
                if not seen[y]:
                    seen[y] = 1
                    reached += 1
                    stack.append(y)
        return reached == n

    def adjacency_mask(self) -> int:
        """Pack the adjacency matrix into an int, bit u*N+v per arc u->v."""
        n = self.node_count
        mask = 0
        for u, v in self.edges:
            mask |= 1 << (u * n + v)
        return mask

    @classmethod
    def from_adjacency_mask(cls, node_count: int, mask: int) -> "DirectedGraph":
        edges = []
        for u in range(node_count):
            for v in range(node_count):
                if u != v and (mask >> (u * node_count + v)) & 1:
                    edges.append((u, v))
        return cls(node_count, edges)


def canonical_form(g: DirectedGraph) -> bytes:
    """Unique byte tag of the isomorphism class of ``g`` (N <= 8 only).

    The tag is the node count followed by the lexicographically smallest
    adjacency bitmask over all node relabelings, so two graphs compare equal
    exactly when they are isomorphic.
    """
    n = g.node_count
    if n > CANONICAL_NODE_LIMIT:
        raise ValueError(f"canonical form supports at most {CANONICAL_NODE_LIMIT} nodes")
    best = None
    edges = tuple(g.edges)
    for perm in permutations(range(n)):
        mask = 0
        for u, v in edges:
            mask |= 1 << (perm[u] * n + perm[v])
        if best is None or mask < best:
            best = mask
    if best is None:
        best = 0
    return bytes([n]) + best.to_bytes(8, "big")
