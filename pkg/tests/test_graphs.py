from __future__ import annotations

import pytest

from conftest import cycle_graph, random_graph, theta_graph
from gbsep import (
    Edge,
    GbsGraph,
    GraphError,
    augmentation_products,
    balance_potential,
    bs_graph,
    canonical_presentation,
    cycle_basis,
    epsilon_table,
    parse_graph,
    reduce_graph,
    spanning_tree,
    subdivide_loops,
    the_cycle,
)
from gbsep.graphs import bridges, tree_path


def test_validation():
    with pytest.raises(GraphError):
        Edge("e1", "a", "b", 0, 2)
    with pytest.raises(GraphError):
        GbsGraph(("v1", "v1"), ())
    with pytest.raises(GraphError):
        GbsGraph(("v1", "v2"), ())  # disconnected
    with pytest.raises(GraphError):
        GbsGraph(("v1",), (Edge("e1", "v1", "v9", 1, 1),))


def test_bs_graph_convention():
    g = bs_graph(2, 3)
    [e] = g.edges
    assert (e.lambda0, e.lambda1) == (3, 2)
    assert e.is_loop and g.betti == 1 and g.is_cycle_graph()


def test_parse_graph_formats():
    g = parse_graph(
        """
        # a two-vertex cycle
        vertex v1
        vertex v2
        edge e1 v1 v2 3 3
        edge e2 v2 v1 2 3
        """
    )
    assert len(g.edges) == 2 and g.betti == 1

    g2 = parse_graph("bs 2 3")
    assert g2.edges[0].lambda1 == 2

    with pytest.raises(GraphError, match="line 2"):
        parse_graph("vertex v1\nedge e1 v1 v1 0 2")
    with pytest.raises(GraphError, match="mixed"):
        parse_graph("vertex v1\nbs 2 3")
    with pytest.raises(GraphError, match="directive"):
        parse_graph("wat v1")


def test_loop_directive():
    g = parse_graph("vertex v1\nloop l1 v1 2 3")
    assert g.edges[0].is_loop
    assert g.degree("v1") == 2


def test_bridges_theta_and_path():
    assert bridges(theta_graph([(2, 2)] * 3)) == set()
    path = GbsGraph(
        ("v1", "v2", "v3"),
        (Edge("e1", "v1", "v2", 2, 3), Edge("e2", "v2", "v3", 5, 7)),
    )
    assert bridges(path) == {"e1", "e2"}


def test_reduce_collapses_index_one_bridge():
    # edge v1-v2 with (1, 5) plus loop (2, 3) at v1 collapses to a single
    # loop (10, 15)
    g = GbsGraph(
        ("v1", "v2"),
        (Edge("e1", "v1", "v2", 1, 5), Edge("l", "v1", "v1", 2, 3)),
    )
    r = reduce_graph(g)
    assert r.vertices == ("v2",)
    [e] = r.edges
    assert (abs(e.lambda0), abs(e.lambda1)) == (10, 15)


def test_reduce_keeps_cycle_edges():
    g = cycle_graph([(1, 2), (3, 4)])
    assert reduce_graph(g) == g  # non-bridges survive even with index 1


def test_subdivide_loops_preserves_products():
    g = bs_graph(6, 10)
    s = subdivide_loops(g)
    assert len(s.edges) == 2 and len(s.vertices) == 2
    assert not any(e.is_loop for e in s.edges)
    n0, m0 = augmentation_products(g, the_cycle(g))
    n1, m1 = augmentation_products(s, the_cycle(s))
    assert {n0, m0} == {n1, m1} == {6, 10}


def test_spanning_tree_and_cycle_basis():
    theta = theta_graph([(2, 2)] * 3)
    tree = spanning_tree(theta)
    assert len(tree) == 1
    cycles = cycle_basis(theta, tree)
    assert len(cycles) == 2
    for cyc in cycles:
        assert len(cyc) == 2


def test_tree_path_endpoints(rng):
    for _ in range(20):
        g = random_graph(rng)
        tree = spanning_tree(g)
        a, b = g.vertices[0], g.vertices[-1]
        path = tree_path(g, tree, a, b)
        at = a
        for e, fwd in path:
            assert (e.src if fwd else e.dst) == at
            at = e.dst if fwd else e.src
        assert at == b


def test_augmentation_orientation_swap():
    g = bs_graph(6, 10)
    cyc = the_cycle(g)
    fwd = augmentation_products(g, cyc)
    rev = augmentation_products(g, tuple((eid, not f) for eid, f in reversed(cyc)))
    assert fwd == (10, 6) and rev == (6, 10)


def test_epsilon_spec_example():
    g = parse_graph(
        """
        vertex v1
        vertex v2
        edge e1 v1 v2 3 3
        edge e2 v2 v1 2 3
        """
    )
    t1 = epsilon_table(g, {"e1"}, 2, "v1")
    t2 = epsilon_table(g, {"e2"}, 2, "v1")
    assert t1.values == {"v1": 0, "v2": 0}
    assert t2.values == {"v1": 0, "v2": -1}


def test_epsilon_rebase_and_min():
    g = parse_graph("vertex a\nvertex b\nedge e a b 4 1")
    t = epsilon_table(g, {"e"}, 2, "a")
    assert t.values == {"a": 0, "b": 2}
    assert t.min_vertex(g.vertices) == "a"
    rb = t.rebased("b")
    assert rb.values == {"a": -2, "b": 0}


def test_canonical_presentation_counts():
    theta = theta_graph([(2, 2)] * 3)
    pres = canonical_presentation(theta, spanning_tree(theta))
    assert len(pres.vertex_generators) == 2
    assert len(pres.stable_letters) == 2
    assert len(pres.relators) == 3


def test_balance_potential_theta():
    theta = theta_graph([(2, 2)] * 3)
    _, balanced, witness = balance_potential(theta, spanning_tree(theta), "v1")
    assert balanced and witness is None

    skew = theta_graph([(2, 2), (2, 2), (2, 3)])
    _, balanced, witness = balance_potential(skew, spanning_tree(skew), "v1")
    assert not balanced and witness is not None


def test_balance_on_loop():
    g = bs_graph(2, 3)
    _, balanced, witness = balance_potential(g, set(), "v1")
    assert not balanced and witness == (("e1", True),)


def test_the_cycle_rejects_other_betti():
    with pytest.raises(GraphError):
        the_cycle(theta_graph([(2, 2)] * 3))
