from __future__ import annotations

import random

import pytest

from gbsep import Edge, GbsGraph


def theta_graph(labels):
    """Two vertices joined by len(labels) parallel edges."""
    edges = tuple(
        Edge(f"e{i}", "v1", "v2", l0, l1) for i, (l0, l1) in enumerate(labels, 1)
    )
    return GbsGraph(("v1", "v2"), edges)


def cycle_graph(labels):
    """Single cycle v0 -> v1 -> ... -> v0 with the given (l0, l1) labels."""
    s = len(labels)
    verts = tuple(f"v{i}" for i in range(s))
    edges = tuple(
        Edge(f"e{i}", verts[i], verts[(i + 1) % s], l0, l1)
        for i, (l0, l1) in enumerate(labels)
    )
    return GbsGraph(verts, edges)


def random_graph(rng: random.Random, max_vertices=6, max_label=9, extra_edges=3):
    """Random connected labelled graph: a random tree plus a few chords
    (loops and parallel edges allowed)."""
    nv = rng.randint(1, max_vertices)
    verts = [f"v{i}" for i in range(nv)]
    edges = []

    def lab():
        return rng.randint(1, max_label) * rng.choice([1, -1])

    for i in range(1, nv):
        j = rng.randrange(i)
        edges.append(Edge(f"e{len(edges)}", verts[j], verts[i], lab(), lab()))
    for _ in range(rng.randint(0, extra_edges)):
        a, b = rng.choice(verts), rng.choice(verts)
        edges.append(Edge(f"e{len(edges)}", a, b, lab(), lab()))
    return GbsGraph(tuple(verts), tuple(edges))


@pytest.fixture
def rng():
    return random.Random(0x5EED5)
