"""SNAP-style edge-list parsing and deterministic emission.

Files are plain text: one "u<whitespace>v" arc per line, '#' lines are
comments. Real datasets carry self-loops and occasional duplicate arcs that
a simple digraph cannot hold, so the parser discards them and reports how
many of each it dropped. External ids of any shape are remapped to dense
0-based ids and the remap is kept for traceability.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .graph import DirectedGraph

_NODE_DIRECTIVE = "nodes:"


class EdgeListError(ValueError):
    """Malformed edge-list input; message carries the 1-based line number."""


@dataclass(frozen=True)
class EdgeListDocument:
    graph: DirectedGraph
    id_map: dict[int, int]  # external id -> dense id
    dropped_self_loops: int
    dropped_duplicates: int

    @property
    def reverse_map(self) -> dict[int, int]:
        return {dense: ext for ext, dense in self.id_map.items()}


def parse_edge_list(text: str) -> EdgeListDocument:
    """Parse edge-list text into a simple digraph plus bookkeeping.

    A comment of the form "# nodes: N" (case-insensitive) pins the node
    count; when it is present and every id already lies in 0..N-1 the ids
    are kept as-is, which lets emitted files round-trip isolated nodes.
    Otherwise the node set is exactly the ids seen, remapped in sorted
    order.

    Raises EdgeListError for lines that are not two integers.
    """
    declared: int | None = None
    raw_pairs: list[tuple[int, int]] = []
    for number, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped:
            continue
        if stripped.startswith("#"):
            body = stripped.lstrip("#").strip().lower()
            if body.startswith(_NODE_DIRECTIVE):
                tail = body[len(_NODE_DIRECTIVE) :].strip()
                try:
                    declared = int(tail)
                except ValueError as exc:
                    raise EdgeListError(
                        f"line {number}: bad node-count directive {tail!r}"
                    ) from exc
                if declared < 0:
                    raise EdgeListError(f"line {number}: negative node count")
            continue
        tokens = stripped.split()
        if len(tokens) != 2:
            raise EdgeListError(
                f"line {number}: expected 'u v', got {len(tokens)} tokens"
            )
        try:
            u, v = int(tokens[0]), int(tokens[1])
        except ValueError as exc:
            raise EdgeListError(f"line {number}: non-integer node id") from exc
        raw_pairs.append((u, v))

    self_loops = sum(1 for u, v in raw_pairs if u == v)
    pairs = [(u, v) for u, v in raw_pairs if u != v]

    seen = {u for u, _ in pairs} | {v for _, v in pairs}
    if declared is not None and all(0 <= x < declared for x in seen):
        id_map = {x: x for x in range(declared)}
    else:
        id_map = {ext: dense for dense, ext in enumerate(sorted(seen))}
    node_count = len(id_map)

    edges = {(id_map[u], id_map[v]) for u, v in pairs}
    duplicates = len(pairs) - len(edges)
    return EdgeListDocument(
        graph=DirectedGraph(node_count, edges),
        id_map=id_map,
        dropped_self_loops=self_loops,
        dropped_duplicates=duplicates,
    )


def load_edge_list(path: str | Path) -> EdgeListDocument:
    return parse_edge_list(Path(path).read_text())


def format_edge_list(g: DirectedGraph) -> str:
    """Render a digraph; parse(format(g)) rebuilds an equal graph."""
    lines = [f"# nodes: {g.node_count}", f"# edges: {g.edge_count}"]
    lines.extend(f"{u}\t{v}" for u, v in sorted(g.edges))
    return "\n".join(lines) + "\n"


def emit_edge_list(g: DirectedGraph, path: str | Path) -> None:
    Path(path).write_text(format_edge_list(g))
