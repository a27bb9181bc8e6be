from itertools import combinations, permutations

import pytest

from netctrl.graph import (
    CANONICAL_NODE_LIMIT,
    DirectedGraph,
    canonical_form,
)

from conftest import chain, complete, cycle, out_star, random_digraph


def test_rejects_self_loop():
    with pytest.raises(ValueError, match="self-loop"):
        DirectedGraph(3, [(1, 1)])


def test_rejects_out_of_range_endpoint():
    with pytest.raises(ValueError, match="out of range"):
        DirectedGraph(3, [(0, 3)])
    with pytest.raises(ValueError):
        DirectedGraph(2, [(-1, 0)])


def test_rejects_negative_node_count():
    with pytest.raises(ValueError):
        DirectedGraph(-1)


def test_duplicate_arcs_collapse():
    g = DirectedGraph(3, [(0, 1), (0, 1), (1, 2)])
    assert g.edge_count == 2


def test_zero_node_graph_constructs():
    g = DirectedGraph(0)
    assert g.node_count == 0 and g.edge_count == 0


def test_degrees_cycle_all_ones():
    d = cycle(6).degrees()
    assert d.in_degrees == (1,) * 6
    assert d.out_degrees == (1,) * 6


def test_degrees_out_star():
    d = out_star(4).degrees()
    assert d.out_degrees == (3, 0, 0, 0)
    assert d.in_degrees == (0, 1, 1, 1)


def test_degrees_empty_graph():
    d = DirectedGraph(3).degrees()
    assert d.in_degrees == (0, 0, 0) and d.out_degrees == (0, 0, 0)


def test_degree_sums_equal_edge_count(rng):
    for _ in range(20):
        g = random_digraph(rng, 7, int(rng.integers(0, 42)))
        d = g.degrees()
        assert sum(d.in_degrees) == g.edge_count
        assert sum(d.out_degrees) == g.edge_count


def test_remove_node_from_cycle_gives_chain():
    got = cycle(6).remove_node(2)
    assert canonical_form(got) == canonical_form(chain(5))


def test_remove_only_node():
    g = DirectedGraph(1).remove_node(0)
    assert g.node_count == 0 and g.edge_count == 0


def test_remove_star_center_isolates_leaves():
    g = out_star(4).remove_node(0)
    assert g.node_count == 3 and g.edge_count == 0


def test_remove_node_reindexes_densely():
    g = DirectedGraph(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
    got = g.remove_node(1)
    assert got.node_count == 3
    assert got.edges == frozenset({(1, 2), (2, 0)})


def test_remove_node_incident_arc_accounting(rng):
    for _ in range(15):
        g = random_digraph(rng, 8, int(rng.integers(5, 40)))
        node = int(rng.integers(0, 8))
        d = g.degrees()
        incident = d.in_degrees[node] + d.out_degrees[node]
        assert g.remove_node(node).edge_count == g.edge_count - incident


def test_remove_node_validates_range():
    with pytest.raises(ValueError):
        cycle(3).remove_node(3)
    with pytest.raises(ValueError):
        cycle(3).remove_node(-1)


def test_weak_connectivity_basic_shapes():
    assert cycle(5).is_weakly_connected()
    assert chain(4).is_weakly_connected()
    assert out_star(6).is_weakly_connected()
    assert not DirectedGraph(3, [(0, 1)]).is_weakly_connected()


def test_two_disjoint_two_cycles_not_connected():
    g = DirectedGraph(4, [(0, 1), (1, 0), (2, 3), (3, 2)])
    assert not g.is_weakly_connected()


def test_single_node_is_connected():
    assert DirectedGraph(1).is_weakly_connected()


def test_connectivity_undefined_for_empty_graph():
    with pytest.raises(ValueError):
        DirectedGraph(0).is_weakly_connected()


def test_connectivity_ignores_direction():
    # All arcs point into node 0; still one weak component.
    g = DirectedGraph(4, [(1, 0), (2, 0), (3, 0)])
    assert g.is_weakly_connected()


def test_canonical_form_matches_across_labelings():
    a = DirectedGraph(3, [(0, 1), (1, 2), (2, 0)])
    b = DirectedGraph(3, [(1, 0), (0, 2), (2, 1)])
    assert canonical_form(a) == canonical_form(b)


def test_canonical_form_separates_cycle_from_chain():
    assert canonical_form(cycle(3)) != canonical_form(chain(3))


def test_canonical_form_relabel_invariance(rng):
    for _ in range(25):
        n = int(rng.integers(2, 7))
        g = random_digraph(rng, n, int(rng.integers(1, n * (n - 1) + 1)))
        perm = tuple(int(x) for x in rng.permutation(n))
        assert canonical_form(g) == canonical_form(g.relabel(perm))


def test_canonical_form_node_limit():
    with pytest.raises(ValueError):
        canonical_form(DirectedGraph(CANONICAL_NODE_LIMIT + 1))


def test_four_node_eleven_arc_graphs_form_one_class():
    # Dropping any single arc from the complete 4-node digraph gives
    # isomorphic results, so the class count at that size is one.
    pairs = [(u, v) for u in range(4) for v in range(4) if u != v]
    forms = {
        canonical_form(DirectedGraph(4, arcs)) for arcs in combinations(pairs, 11)
    }
    assert len(forms) == 1


def test_relabel_requires_permutation():
    with pytest.raises(ValueError):
        cycle(3).relabel((0, 0, 1))


def test_relabel_roundtrip(rng):
    g = random_digraph(rng, 6, 12)
    perm = tuple(int(x) for x in rng.permutation(6))
    inverse = tuple(perm.index(i) for i in range(6))
    assert g.relabel(perm).relabel(inverse) == g


def test_adjacency_mask_roundtrip(rng):
    for _ in range(10):
        n = int(rng.integers(1, 7))
        g = random_digraph(rng, n, int(rng.integers(0, n * (n - 1) + 1)))
        assert DirectedGraph.from_adjacency_mask(n, g.adjacency_mask()) == g


def test_sparsity_boundary():
    # 21 arcs on 21 nodes is exactly the 5 percent cutoff.
    assert cycle(21).is_sparse
    dense = DirectedGraph(21, [(i, (i + 1) % 21) for i in range(21)] + [(0, 2)])
    assert not dense.is_sparse


def test_complete_graph_edge_count():
    g = complete(5)
    assert g.edge_count == g.max_edge_count == 20


def test_canonical_form_is_stable_bytes():
    form = canonical_form(cycle(4))
    assert isinstance(form, bytes) and form[0] == 4


def test_exhaustive_canonical_minimality():
    # The canonical mask really is the minimum over every relabeling.
    g = DirectedGraph(4, [(0, 1), (1, 2), (2, 0), (0, 3)])
    masks = []
    for perm in permutations(range(4)):
        masks.append(g.relabel(perm).adjacency_mask())
    packed = int.from_bytes(canonical_form(g)[1:], "big")
    assert packed == min(masks)
