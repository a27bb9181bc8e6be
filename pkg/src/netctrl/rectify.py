"""Degree-band checking and random edge rectification.

A graph satisfies the necessary-condition band when every node's in-degree
and out-degree lie in [floor(M/N), ceil(M/N)]. Rectification repairs
violations by moving one endpoint of one arc at a time: a node short on
out-degree steals an out-arc tail from an over-supplied donor, a node long
on out-degree donates an arc tail to an under-supplied recipient, and the
mirror moves fix in-degrees. Node and arc counts and simplicity are
preserved; each applied move lowers the total violation mass, so unlimited
budgets terminate.

The repair loop spends its budget in draw rounds. A round samples one
(node, side) pair uniformly from all 2N of them and fires the matching rule
only when that pair violates the band; rounds landing inside the band are
consumed with no move. Conditioned on a move happening, the fired pair is
uniform over the violating ones, so the applied-move distribution matches
rer_step's, but budgets are paid per draw, not per move.

Donors and recipients are preferred among strict violators of the opposite
kind, matching the rule text. When M is not divisible by N it can happen
that violators of one kind remain while the opposite kind is exhausted (both
kinds shrink in lock step, and moves of one side never touch the other
side's degrees); in that state the rules as written would wedge even though
band-satisfying graphs exist. The engine then falls back to donors sitting
exactly on the band edge, which keeps every invariant and restores progress.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import rng as streams
from .graph import IN, OUT, DirectedGraph

# Safety valve for "unlimited" budgets.
UNLIMITED_OPERATION_CAP = 10**9

# Attempts at drawing a legal (violator, donor, arc) tuple before a step
# reports a stall.
_STALL_ATTEMPTS = 100


@dataclass(frozen=True)
class EncBounds:
    lower: int
    upper: int


@dataclass(frozen=True)
class EncViolation:
    node: int
    side: str
    degree: int


@dataclass(frozen=True)
class EncReport:
    bounds: EncBounds
    violations: tuple[EncViolation, ...]

    @property
    def satisfied(self) -> bool:
        return not self.violations


@dataclass(frozen=True)
class RerOperation:
    """One applied move: rule 1..4, the removed arc, the added arc."""

    rule: int
    removed: tuple[int, int]
    added: tuple[int, int]


@dataclass(frozen=True)
class RerTrace:
    operations: tuple[RerOperation, ...]
    reason: str  # "enc-satisfied" | "budget-exhausted" | "stalled"
    rounds: int  # draw rounds spent, counting ones that applied no move

    @property
    def operations_applied(self) -> int:
        return len(self.operations)


class RerStalled(RuntimeError):
    """No legal move was found within the attempt budget."""


def enc_bounds(node_count: int, edge_count: int) -> EncBounds:
    if node_count < 1:
        raise ValueError("need at least one node")
    if edge_count < 0:
        raise ValueError("edge count must be non-negative")
    return EncBounds(edge_count // node_count, -(-edge_count // node_count))


def check_enc(g: DirectedGraph) -> EncReport:
    """Report every (node, side) whose degree leaves the band."""
    bounds = enc_bounds(g.node_count, g.edge_count)
    deg = g.degrees()
    violations = []
    for node in range(g.node_count):
        if not bounds.lower <= deg.out_degrees[node] <= bounds.upper:
            violations.append(EncViolation(node, OUT, deg.out_degrees[node]))
        if not bounds.lower <= deg.in_degrees[node] <= bounds.upper:
            violations.append(EncViolation(node, IN, deg.in_degrees[node]))
    return EncReport(bounds=bounds, violations=tuple(violations))


class _IndexedSet:
    """Set of ints with O(1) add/discard and O(1) uniform choice."""

    __slots__ = ("items", "pos")

    def __init__(self) -> None:
        self.items: list[int] = []
        self.pos: dict[int, int] = {}

    def add(self, x: int) -> None:
        if x not in self.pos:
            self.pos[x] = len(self.items)
            self.items.append(x)

    def discard(self, x: int) -> None:
        i = self.pos.pop(x, None)
        if i is None:
            return
        last = self.items.pop()
        if i < len(self.items):
            self.items[i] = last
            self.pos[last] = i

    def choose(self, gen) -> int:
        return self.items[int(gen.integers(len(self.items)))]

    def __len__(self) -> int:
        return len(self.items)


class _RerState:
    """Mutable working copy of a graph plus degree-band bookkeeping."""

    def __init__(self, g: DirectedGraph) -> None:
        n = g.node_count
        self.n = n
        bounds = enc_bounds(n, g.edge_count)
        self.lower = bounds.lower
        self.upper = bounds.upper
        self.edge_set = set(g.edges)
        self.out_adj: list[list[int]] = [[] for _ in range(n)]
        self.in_adj: list[list[int]] = [[] for _ in range(n)]
        for u, v in sorted(self.edge_set):
            self.out_adj[u].append(v)
            self.in_adj[v].append(u)
        deg = g.degrees()
        self.out_deg = list(deg.out_degrees)
        self.in_deg = list(deg.in_degrees)
        # Bucket nodes by where each side's degree sits relative to the band.
        self.buckets = {
            (OUT, "low"): _IndexedSet(),
            (OUT, "high"): _IndexedSet(),
            (OUT, "floor"): _IndexedSet(),
            (OUT, "ceil"): _IndexedSet(),
            (IN, "low"): _IndexedSet(),
            (IN, "high"): _IndexedSet(),
            (IN, "floor"): _IndexedSet(),
            (IN, "ceil"): _IndexedSet(),
        }
        for node in range(n):
            self._file(OUT, node, self.out_deg[node])
            self._file(IN, node, self.in_deg[node])

    def _file(self, side: str, node: int, degree: int) -> None:
        if degree < self.lower:
            self.buckets[side, "low"].add(node)
        elif degree > self.upper:
            self.buckets[side, "high"].add(node)
        else:
            if degree == self.lower:
                self.buckets[side, "floor"].add(node)
            if degree == self.upper:
                self.buckets[side, "ceil"].add(node)

    def _unfile(self, side: str, node: int) -> None:
        for band in ("low", "high", "floor", "ceil"):
            self.buckets[side, band].discard(node)

    def _set_degree(self, side: str, node: int, degree: int) -> None:
        self._unfile(side, node)
        if side == OUT:
            self.out_deg[node] = degree
        else:
            self.in_deg[node] = degree
        self._file(side, node, degree)

    def violation_count(self) -> int:
        return (
            len(self.buckets[OUT, "low"])
            + len(self.buckets[OUT, "high"])
            + len(self.buckets[IN, "low"])
            + len(self.buckets[IN, "high"])
        )

    def violation_mass(self) -> int:
        mass = 0
        for node in self.buckets[OUT, "low"].items:
            mass += self.lower - self.out_deg[node]
        for node in self.buckets[OUT, "high"].items:
            mass += self.out_deg[node] - self.upper
        for node in self.buckets[IN, "low"].items:
            mass += self.lower - self.in_deg[node]
        for node in self.buckets[IN, "high"].items:
            mass += self.in_deg[node] - self.upper
        return mass

    def _remove_edge(self, u: int, v: int) -> None:
        self.edge_set.remove((u, v))
        self.out_adj[u].remove(v)
        self.in_adj[v].remove(u)

    def _add_edge(self, u: int, v: int) -> None:
        self.edge_set.add((u, v))
        self.out_adj[u].append(v)
        self.in_adj[v].append(u)

    def _counterparty(self, side: str, band: str) -> _IndexedSet | None:
        """Strict violators of the opposite kind, else band-edge fallback."""
        strict = self.buckets[side, band]
        if len(strict):
            return strict
        if self.upper == self.lower:
            return None
        edge = self.buckets[side, "ceil" if band == "high" else "floor"]
        return edge if len(edge) else None

    def step(self, gen) -> RerOperation:
        """Apply one legal move, drawn uniformly; raises RerStalled."""
        for _ in range(_STALL_ATTEMPTS):
            n_out_low = len(self.buckets[OUT, "low"])
            n_out_high = len(self.buckets[OUT, "high"])
            n_in_low = len(self.buckets[IN, "low"])
            n_in_high = len(self.buckets[IN, "high"])
            total = n_out_low + n_out_high + n_in_low + n_in_high
            if total == 0:
                raise ValueError("graph already satisfies the degree band")
            r = int(gen.integers(total))
            if r < n_out_low:
                op = self._fix_out_low(gen, self.buckets[OUT, "low"].choose(gen))
            elif r < n_out_low + n_out_high:
                op = self._fix_out_high(gen, self.buckets[OUT, "high"].choose(gen))
            elif r < n_out_low + n_out_high + n_in_low:
                op = self._fix_in_low(gen, self.buckets[IN, "low"].choose(gen))
            else:
                op = self._fix_in_high(gen, self.buckets[IN, "high"].choose(gen))
            if op is not None:
                return op
        raise RerStalled("no legal rectification move found")

    def draw_round(self, gen) -> RerOperation | None:
        """Spend one budget round; None when the drawn pair sits in the band."""
        r = int(gen.integers(2 * self.n))
        side, node = (OUT, r) if r < self.n else (IN, r - self.n)
        degree = self.out_deg[node] if side == OUT else self.in_deg[node]
        if self.lower <= degree <= self.upper:
            return None
        if side == OUT:
            fix = self._fix_out_low if degree < self.lower else self._fix_out_high
        else:
            fix = self._fix_in_low if degree < self.lower else self._fix_in_high
        for _ in range(_STALL_ATTEMPTS):
            op = fix(gen, node)
            if op is not None:
                return op
        raise RerStalled("no legal rectification move found")

    def _fix_out_low(self, gen, node: int) -> RerOperation | None:
        # Rule 1: give the deficient node the tail of someone else's out-arc.
        donors = self._counterparty(OUT, "high")
        if donors is None:
            return None
        donor = donors.choose(gen)
        heads = self.out_adj[donor]
        if not heads:
            return None
        head = heads[int(gen.integers(len(heads)))]
        if head == node or (node, head) in self.edge_set:
            return None
        self._remove_edge(donor, head)
        self._add_edge(node, head)
        self._set_degree(OUT, donor, self.out_deg[donor] - 1)
        self._set_degree(OUT, node, self.out_deg[node] + 1)
        return RerOperation(rule=1, removed=(donor, head), added=(node, head))

    def _fix_out_high(self, gen, node: int) -> RerOperation | None:
        # Rule 2: hand one of this node's out-arcs to a deficient tail.
        recipients = self._counterparty(OUT, "low")
        if recipients is None:
            return None
        recipient = recipients.choose(gen)
        heads = self.out_adj[node]
        head = heads[int(gen.integers(len(heads)))]
        if head == recipient or (recipient, head) in self.edge_set:
            return None
        self._remove_edge(node, head)
        self._add_edge(recipient, head)
        self._set_degree(OUT, node, self.out_deg[node] - 1)
        self._set_degree(OUT, recipient, self.out_deg[recipient] + 1)
        return RerOperation(rule=2, removed=(node, head), added=(recipient, head))

    def _fix_in_low(self, gen, node: int) -> RerOperation | None:
        # Rule 3: redirect the head of someone else's in-arc to this node.
        donors = self._counterparty(IN, "high")
        if donors is None:
            return None
        donor = donors.choose(gen)
        tails = self.in_adj[donor]
        if not tails:
            return None
        tail = tails[int(gen.integers(len(tails)))]
        if tail == node or (tail, node) in self.edge_set:
            return None
        self._remove_edge(tail, donor)
        self._add_edge(tail, node)
        self._set_degree(IN, donor, self.in_deg[donor] - 1)
        self._set_degree(IN, node, self.in_deg[node] + 1)
        return RerOperation(rule=3, removed=(tail, donor), added=(tail, node))

    def _fix_in_high(self, gen, node: int) -> RerOperation | None:
        # Rule 4: redirect one of this node's in-arcs to a deficient head.
        recipients = self._counterparty(IN, "low")
        if recipients is None:
            return None
        recipient = recipients.choose(gen)
        tails = self.in_adj[node]
        tail = tails[int(gen.integers(len(tails)))]
        if tail == recipient or (tail, recipient) in self.edge_set:
            return None
        self._remove_edge(tail, node)
        self._add_edge(tail, recipient)
        self._set_degree(IN, node, self.in_deg[node] - 1)
        self._set_degree(IN, recipient, self.in_deg[recipient] + 1)
        return RerOperation(rule=4, removed=(tail, node), added=(tail, recipient))

    def to_graph(self) -> DirectedGraph:
        return DirectedGraph(self.n, self.edge_set)


def rer_step(g: DirectedGraph, gen) -> tuple[DirectedGraph, RerOperation]:
    """Apply a single rectification move with the given random generator."""
    state = _RerState(g)
    if state.violation_count() == 0:
        raise ValueError("graph already satisfies the degree band")
    op = state.step(gen)
    return state.to_graph(), op


def rectify(
    g: DirectedGraph, max_operations: int | None, seed: int
) -> tuple[DirectedGraph, RerTrace]:
    """Repair the graph toward the degree band within a round budget.

    max_operations caps draw rounds, and a round that lands on an in-band
    (node, side) pair is spent without moving anything, so the applied-move
    count in the trace can sit well under the budget. None means unlimited
    (capped at UNLIMITED_OPERATION_CAP as a safety valve). The trace records
    every applied move, the rounds spent, and why the loop stopped.
    """
    if max_operations is not None and max_operations < 0:
        raise ValueError("operation budget must be non-negative")
    budget = UNLIMITED_OPERATION_CAP if max_operations is None else max_operations
    gen = streams.spawn_rng(seed, streams.RECTIFY)
    state = _RerState(g)
    ops: list[RerOperation] = []
    rounds = 0
    reason = "budget-exhausted"
    while True:
        if state.violation_count() == 0:
            reason = "enc-satisfied"
            break
        if rounds >= budget:
            reason = "budget-exhausted"
            break
        rounds += 1
        try:
            op = state.draw_round(gen)
        except RerStalled:
            reason = "stalled"
            break
        if op is not None:
            ops.append(op)
    return state.to_graph(), RerTrace(operations=tuple(ops), reason=reason, rounds=rounds)
