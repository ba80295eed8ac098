"""Shared fixtures and instance builders used across the suite."""

from __future__ import annotations

import random

import pytest

from lincyc import ColoredGraph, LinearHypergraph, RPartition, project

# the 7 lines of a point-line incidence structure in which every pair of
# points lies on exactly one line: a 3-regular linear 3-graph on 7 vertices
FANO_LINES = [
    (0, 1, 2),
    (0, 3, 4),
    (0, 5, 6),
    (1, 3, 5),
    (1, 4, 6),
    (2, 3, 6),
    (2, 4, 5),
]


@pytest.fixture(scope="session")
def fano() -> LinearHypergraph:
    return LinearHypergraph(7, 3, FANO_LINES)


def planted_c4() -> tuple[LinearHypergraph, list[tuple[int, ...]]]:
    """A single length-4 linear cycle on 8 vertices."""
    edges = [(0, 1, 4), (1, 2, 5), (2, 3, 6), (0, 3, 7)]
    return LinearHypergraph(8, 3, edges), edges


def transversal_regular_instance(
    q: int, seed: int = 0
) -> tuple[LinearHypergraph, frozenset[int]]:
    """A q-regular linear 3-graph in which every edge holds exactly one vertex
    of a designated transversal part A, with vertex labels shuffled by seed.

    Construction: vertices A = {0..q-1}, X = {q..2q-1}, Y = {2q..3q-1};
    edge (a, x, y) present iff y - x = a (mod q).  Two edges agreeing in two
    coordinates agree in the third, so the graph is linear, and every vertex
    lies in exactly q edges.
    """
    rng = random.Random(seed)
    relabel = list(range(3 * q))
    rng.shuffle(relabel)
    edges = []
    for a in range(q):
        for x in range(q):
            y = (x + a) % q
            edges.append((relabel[a], relabel[q + x], relabel[2 * q + y]))
    anchors = frozenset(relabel[a] for a in range(q))
    return LinearHypergraph(3 * q, 3, edges), anchors


def difference_projection(q: int, seed: int = 0) -> ColoredGraph:
    """The two-part projection of transversal_regular_instance: a complete
    bipartite 2-graph on 2q vertices whose edge (x, y) carries the singleton
    color {a} with y - x = a (mod q).  Strongly proper, min degree q."""
    g, _ = transversal_regular_instance(q, seed)
    # recover the three classes by replaying the builder's relabeling
    rng = random.Random(seed)
    relabel = list(range(3 * q))
    rng.shuffle(relabel)
    parts = (
        frozenset(relabel[:q]),
        frozenset(relabel[q : 2 * q]),
        frozenset(relabel[2 * q :]),
    )
    return project(g, RPartition(parts), 1, 2)


def split_edges(
    h: ColoredGraph, seed: int, p: float = 0.25
) -> tuple[list, list]:
    """Random (E1, E2) edge bipartition with both sides nonempty and
    |E1| <= |E2|."""
    rng = random.Random(seed)
    e1 = [e for e in h.edges if rng.random() < p]
    if not e1:
        e1 = [h.edges[0]]
    if len(e1) == len(h.edges):
        e1 = e1[:-1]
    e2 = [e for e in h.edges if e not in set(e1)]
    if len(e1) > len(e2):
        e1, e2 = e2, e1
    return e1, e2
