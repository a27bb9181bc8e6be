from fractions import Fraction

import pytest

from netctrl.generators import (
    MODELS,
    GeneratorParams,
    adjust_edge_count,
    attachment_weights,
    generate,
    solve_snapback_q,
)
from netctrl.graph import OUT, DirectedGraph
from netctrl.metrics import heterogeneity

from conftest import chain, complete, cycle


GRID = [(12, 20), (20, 60), (30, 200)]


def params(model, n, m, seed=0, **kw):
    return GeneratorParams(model=model, node_count=n, edge_count=m, seed=seed, **kw)


@pytest.mark.parametrize("model", MODELS)
@pytest.mark.parametrize("n,m", GRID)
def test_exact_edge_count_and_simplicity(model, n, m):
    if model == "sw" and m < 2 * n:
        pytest.skip("below the ring substrate size")
    g = generate(params(model, n, m, seed=3))
    assert g.node_count == n
    assert g.edge_count == m
    assert all(u != v for u, v in g.edges)


@pytest.mark.parametrize("model", MODELS)
def test_same_seed_reproduces(model):
    a = generate(params(model, 24, 70, seed=11))
    b = generate(params(model, 24, 70, seed=11))
    assert a == b


@pytest.mark.parametrize("model", ("er", "sf", "sw", "qsn"))
def test_different_seeds_differ(model):
    a = generate(params(model, 24, 70, seed=1))
    b = generate(params(model, 24, 70, seed=2))
    assert a != b


def test_dense_corner_fill():
    g = generate(params("er", 10, 88, seed=5))
    assert g.edge_count == 88
    assert generate(params("er", 10, 90, seed=5)) == complete(10)


def test_unknown_model_rejected():
    with pytest.raises(ValueError):
        GeneratorParams(model="ba", node_count=5, edge_count=5, seed=0)


def test_edge_count_range_validation():
    with pytest.raises(ValueError):
        GeneratorParams(model="er", node_count=4, edge_count=13, seed=0)
    with pytest.raises(ValueError):
        GeneratorParams(model="er", node_count=4, edge_count=-1, seed=0)


def test_sigma_and_q_validation():
    with pytest.raises(ValueError):
        GeneratorParams(model="sf", node_count=5, edge_count=5, seed=0, sigma=1.0)
    with pytest.raises(ValueError):
        GeneratorParams(model="qsn", node_count=5, edge_count=5, seed=0, q=1.5)


def test_er_pair_probability():
    p = params("er", 200, 1000).pair_probability
    assert p == Fraction(1000, 200 * 199)


def test_sw_bare_substrate_is_the_double_ring():
    n = 15
    g = generate(params("sw", n, 2 * n, seed=8))
    want = {(i, (i + 1) % n) for i in range(n)} | {(i, (i + 2) % n) for i in range(n)}
    assert g.edges == frozenset(want)
    degrees = g.degrees()
    assert degrees.out_degrees == (2,) * n
    assert degrees.in_degrees == (2,) * n


def test_sw_rejects_too_few_arcs():
    with pytest.raises(ValueError):
        generate(params("sw", 15, 29, seed=0))


def test_sf_weight_plugin_value():
    w = attachment_weights(5, sigma=0.999, theta=1.0)
    assert w[0] == pytest.approx(2.0 ** -0.999)
    assert all(a > b for a, b in zip(w, w[1:]))


def test_sf_is_more_heterogeneous_than_er():
    wins = 0
    for seed in range(8):
        sf = generate(params("sf", 100, 500, seed=seed))
        er = generate(params("er", 100, 500, seed=seed))
        if heterogeneity(sf, OUT).value > heterogeneity(er, OUT).value:
            wins += 1
    assert wins >= 6


def test_qsn_zero_probability_is_a_chain():
    n = 6
    g = generate(params("qsn", n, n - 1, seed=4, q=0.0))
    assert g == chain(n)


def test_qsn_full_probability_fills_every_slot():
    # Stride-2 snapbacks from every node to all earlier same-parity nodes.
    n = 8
    slots = {(u, t) for u in range(2, n) for t in range(u - 2, -1, -2)}
    m = (n - 1) + len(slots)
    g = generate(params("qsn", n, m, seed=4, q=1.0))
    want = {(i, i + 1) for i in range(n - 1)} | slots
    assert g.edges == frozenset(want)


def test_qsn_solved_probability():
    p = params("qsn", 1000, 5000)
    slots = sum(u // 2 for u in range(1000))
    assert solve_snapback_q(p) == pytest.approx((5000 - 999) / slots)
    # Expected pre-adjustment arcs then equal the target.
    assert (999 + solve_snapback_q(p) * slots) == pytest.approx(5000)


def test_qsn_solved_probability_clamps():
    assert solve_snapback_q(params("qsn", 10, 9)) == 0.0
    assert solve_snapback_q(params("qsn", 4, 12)) == 1.0


def test_rtn_minimal_is_the_seed_triangle():
    g = generate(params("rtn", 10, 3, seed=1))
    assert g.edges == frozenset({(0, 1), (1, 2), (2, 0)})


def test_rtn_growth_keeps_seed_and_count():
    g = generate(params("rtn", 12, 9, seed=6))
    assert g.edge_count == 9
    assert {(0, 1), (1, 2), (2, 0)} <= set(g.edges)


def test_rrn_minimal_is_the_seed_rectangle():
    g = generate(params("rrn", 10, 4, seed=1))
    assert g.edges == frozenset({(0, 1), (1, 2), (2, 3), (3, 0)})


def test_rrn_growth_keeps_seed_and_count():
    g = generate(params("rrn", 12, 13, seed=6))
    assert g.edge_count == 13
    assert {(0, 1), (1, 2), (2, 3), (3, 0)} <= set(g.edges)


def test_adjust_noop_when_on_target():
    g = cycle(5)
    assert adjust_edge_count(g, 5, seed=1) == g


def test_adjust_trims_to_subset():
    g = cycle(5)
    smaller = adjust_edge_count(g, 3, seed=1)
    assert smaller.edge_count == 3
    assert smaller.edges <= g.edges


def test_adjust_fills_to_superset():
    g = cycle(5)
    bigger = adjust_edge_count(g, 9, seed=1)
    assert bigger.edge_count == 9
    assert g.edges <= bigger.edges


def test_adjust_empty_to_complete():
    assert adjust_edge_count(DirectedGraph(4), 12, seed=0) == complete(4)


def test_adjust_validates_target():
    with pytest.raises(ValueError):
        adjust_edge_count(cycle(4), 13, seed=0)
    with pytest.raises(ValueError):
        adjust_edge_count(cycle(4), -1, seed=0)


def test_adjust_deterministic():
    g = complete(6)
    assert adjust_edge_count(g, 10, seed=3) == adjust_edge_count(g, 10, seed=3)
