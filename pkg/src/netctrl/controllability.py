"""Driver-node counts for directed networks.

Two criteria are supported. The structural criterion counts unmatched nodes
of a maximum matching on the bipartite tail/head split, with a floor of one
driver. The exact criterion uses the rank of the adjacency matrix instead.
Rank is computed without floating point: fraction-free integer elimination
for small matrices, and elimination modulo a fixed 62-bit prime beyond that
(the two paths are cross-checked in the test suite).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction

from .graph import DirectedGraph

Criterion = str
STRUCTURAL: Criterion = "structural"
EXACT: Criterion = "exact"

# Largest prime below 2**62; fixed so results are reproducible run to run.
DEFAULT_RANK_PRIME = 4611686018427387847

# Fraction-free elimination keeps exact integers but entries grow roughly
# like n^(n/2); past this size the modular path takes over.
_BAREISS_NODE_LIMIT = 64


def _check_criterion(criterion: str) -> str:
    if criterion not in (STRUCTURAL, EXACT):
        raise ValueError(f"unknown criterion {criterion!r}")
    return criterion


@dataclass(frozen=True)
class MatchingResult:
    """A maximum matching of the tail/head bipartite split."""

    pairs: frozenset[tuple[int, int]]
    size: int
    unmatched_nodes: tuple[int, ...]


@dataclass(frozen=True)
class DriverCount:
    """Number of driver nodes under one criterion.

    sparse_input records whether the graph met the sparsity cutoff when the
    exact criterion was used; it is None for the structural criterion.
    """

    count: int
    criterion: Criterion
    sparse_input: bool | None = None


def maximum_matching(g: DirectedGraph) -> MatchingResult:
    """Hopcroft-Karp maximum matching on the arc set.

    Tails form the left side, heads the right side; an arc u->v is the
    bipartite edge (u, v). unmatched_nodes lists nodes that are the head of
    no matched arc, in increasing order.
    """
    n = g.node_count
    adj = g.out_adjacency()
    match_out = [-1] * n  # tail -> matched head
    match_in = [-1] * n  # head -> matched tail
    size = 0
    INF = n + 1

    dist = [0] * n

    def bfs() -> bool:
        queue = deque()
        for u in range(n):
            if match_out[u] == -1 and adj[u]:
                dist[u] = 0
                queue.append(u)
            else:
                dist[u] = INF
        found = False
        while queue:
            u = queue.popleft()
            for v in adj[u]:
                w = match_in[v]
                if w == -1:
                    found = True
                elif dist[w] == INF:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        return found

    # The layered DFS is cleaner written recursively, but depth can reach N,
    # so run a hand-rolled stack machine instead.
    def augment(root: int) -> bool:
        path: list[int] = [root]
        pos = {root: 0}
        while path:
            u = path[-1]
            i = pos[u]
            advanced = False
            while i < len(adj[u]):
                v = adj[u][i]
                i += 1
                w = match_in[v]
                if w == -1:
                    pos[u] = i
                    # Augment: pair each stacked tail with the head it reached.
                    for t in reversed(path):
                        nxt = match_out[t]
                        match_out[t] = v
                        match_in[v] = t
                        v = nxt
                        if v == -1:
                            break
                    return True
                if dist[w] == dist[u] + 1 and w not in pos:
                    pos[u] = i
                    path.append(w)
                    pos[w] = 0
                    advanced = True
                    break
            if not advanced:
                pos[u] = i
                dist[u] = INF
                path.pop()
        return False

    while bfs():
        for u in range(n):
            if match_out[u] == -1 and adj[u]:
                if augment(u):
                    size += 1

    pairs = frozenset(
        (u, match_out[u]) for u in range(n) if match_out[u] != -1
    )
    unmatched = tuple(v for v in range(n) if match_in[v] == -1)
    return MatchingResult(pairs=pairs, size=size, unmatched_nodes=unmatched)


def structural_drivers(g: DirectedGraph) -> DriverCount:
    """max(1, N - maximum matching size)."""
    if g.node_count == 0:
        raise ValueError("driver count is undefined for the empty graph")
    size = maximum_matching(g).size
    return DriverCount(count=max(1, g.node_count - size), criterion=STRUCTURAL)


def exact_drivers(g: DirectedGraph) -> DriverCount:
    """max(1, N - rank(A)) where A is the 0/1 adjacency matrix."""
    if g.node_count == 0:
        raise ValueError("driver count is undefined for the empty graph")
    r = adjacency_rank(g)
    return DriverCount(
        count=max(1, g.node_count - r),
        criterion=EXACT,
        sparse_input=g.is_sparse,
    )


def nd_density(drivers: DriverCount, current_size: int) -> Fraction:
    """Driver fraction N_D / N for a graph of current_size nodes."""
    if current_size < 1:
        raise ValueError("current_size must be at least 1")
    if not (1 <= drivers.count <= current_size):
        raise ValueError("driver count out of range for this graph size")
    return Fraction(drivers.count, current_size)


def adjacency_matrix(g: DirectedGraph) -> list[list[int]]:
    """Dense 0/1 rows; entry [u][v] is 1 when the arc u->v exists."""
    n = g.node_count
    rows = [[0] * n for _ in range(n)]
    for u, v in g.edges:
        rows[u][v] = 1
    return rows


def adjacency_rank(g: DirectedGraph) -> int:
    """Rank of the adjacency matrix over the rationals, exactly."""
    rows = adjacency_matrix(g)
    if g.node_count <= _BAREISS_NODE_LIMIT:
        return rank_fraction_free(rows)
    return rank_mod_prime(rows, DEFAULT_RANK_PRIME)


def rank_fraction_free(rows: list[list[int]]) -> int:
    """Integer-matrix rank by fraction-free (division-exact) elimination."""
    mat = [list(row) for row in rows]
    nrows = len(mat)
    ncols = len(mat[0]) if nrows else 0
    rank = 0
    prev_pivot = 1
    for col in range(ncols):
        pivot_row = next(
            (r for r in range(rank, nrows) if mat[r][col] != 0), None
        )
        if pivot_row is None:
            continue
        mat[rank], mat[pivot_row] = mat[pivot_row], mat[rank]
        pivot = mat[rank][col]
        top = mat[rank]
        # Every row below must be rescaled, zero factor included; the exact
        # divisions at later steps rely on it (Sylvester's identity).
        for r in range(rank + 1, nrows):
            factor = mat[r][col]
            row = mat[r]
            for c in range(col, ncols):
                row[c] = (row[c] * pivot - factor * top[c]) // prev_pivot
        prev_pivot = pivot
        rank += 1
    return rank


def rank_mod_prime(rows: list[list[int]], prime: int = DEFAULT_RANK_PRIME) -> int:
    """Matrix rank over GF(prime); equals the rational rank unless the prime
    divides a leading minor, which the tests guard against by cross-checking."""
    mat = [[x % prime for x in row] for row in rows]
    nrows = len(mat)
    ncols = len(mat[0]) if nrows else 0
    rank = 0
    for col in range(ncols):
        pivot_row = next(
            (r for r in range(rank, nrows) if mat[r][col] != 0), None
        )
        if pivot_row is None:
            continue
        mat[rank], mat[pivot_row] = mat[pivot_row], mat[rank]
        inv = pow(mat[rank][col], prime - 2, prime)
        top = mat[rank]
        for r in range(rank + 1, nrows):
            factor = mat[r][col]
            if factor == 0:
                continue
            scale = (factor * inv) % prime
            row = mat[r]
            for c in range(col, ncols):
                row[c] = (row[c] - scale * top[c]) % prime
        rank += 1
    return rank


def _is_probable_prime(n: int) -> bool:
    # Deterministic Miller-Rabin for n < 3.3e24 with the first twelve primes.
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
    for p in small:
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def random_rank_prime(rng, bits: int = 62) -> int:
    """Draw a random prime of the given bit length; used to vary the modular
    rank path when cross-checking it against the exact path."""
    while True:
        candidate = int(rng.integers(1 << (bits - 1), 1 << bits)) | 1
        if _is_probable_prime(candidate):
            return candidate
