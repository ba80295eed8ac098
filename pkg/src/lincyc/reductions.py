"""Preprocessing reductions: degree peeling, degenerate orderings, BFS layers
by linear-path distance, first-order d-minimal subgraphs, and the random
r-partite reduction.

All randomized operations take an explicit seed and are deterministic given
it.  Peeling always removes the lowest-indexed minimum-degree vertex so runs
are reproducible.
"""

from __future__ import annotations

import math
import random
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Optional

from .core import LinearHypergraph, LinearPath, Pair, RPartition, _pair
from .errors import EmptyCore, NotFound, PreconditionFailed, RetriesExhausted


# -- minimum-degree core (hypergraph) ----------------------------------------


def min_degree_subgraph(g: LinearHypergraph, d: float) -> LinearHypergraph:
    """Induced subgraph of minimum degree >= d/r, by iterated deletion of
    low-degree vertices.  Nonempty whenever d <= d(g)."""
    if d > g.average_degree():
        raise EmptyCore(f"threshold {d} exceeds average degree {g.average_degree()}")
    alive = set(g.support())
    deg = {v: g.degree(v) for v in alive}
    edge_alive = [True] * len(g.edges)
    changed = True
    while changed:
        changed = False
        victims = sorted(v for v in alive if deg[v] * g.r < d)
        for v in victims:
            if v not in alive or deg[v] * g.r >= d:
                continue
            alive.discard(v)
            changed = True
            for eid in g.incident.get(v, ()):
                if edge_alive[eid]:
                    edge_alive[eid] = False
                    for u in g.edges[eid]:
                        deg[u] -= 1
    kept = [e for eid, e in enumerate(g.edges) if edge_alive[eid]]
    if not kept:
        raise EmptyCore("peeling removed every edge")
    core = g.induced(frozenset(v for e in kept for v in e))
    assert core.min_degree() * g.r >= d
    return core


# -- degenerate ordering (2-graphs) ------------------------------------------


@dataclass
class PeelResult:
    """Ordering x_1..x_n with cut m: each x_i (i <= m) has fewer than d
    neighbors among x_{i+1}..x_n, and the core on x_{m+1}..x_n has minimum
    degree >= d."""

    ordering: list[int]
    cut: int
    core_vertices: frozenset[int]
    core_edges: tuple[Pair, ...]


def degenerate_ordering(edges: Iterable[Pair], d: float) -> PeelResult:
    es = sorted(set(_pair(*e) for e in edges))
    adj: dict[int, set[int]] = {}
    for u, v in es:
        adj.setdefault(u, set()).add(v)
        adj.setdefault(v, set()).add(u)
    alive = set(adj)
    deleted: list[int] = []
    while alive:
        low = [v for v in alive if len(adj[v] & alive) < d]
        if not low:
            break
        v = min(low, key=lambda v: (len(adj[v] & alive), v))
        deleted.append(v)
        alive.discard(v)
    if not alive:
        raise EmptyCore(f"no core of minimum degree {d}")
    ordering = deleted + sorted(alive)
    core_edges = tuple(e for e in es if e[0] in alive and e[1] in alive)
    return PeelResult(ordering, len(deleted), frozenset(alive), core_edges)


# -- BFS layers by linear-path distance ---------------------------------------


@dataclass
class BfsLayers:
    """Levels L_0, L_1, ... from a root, with one fixed shortest linear path
    per reachable vertex.

    A shortest edge-walk in a linear hypergraph cannot have two non-consecutive
    edges meeting (that would shortcut it), so plain BFS over vertex -> edges ->
    new vertices computes exact linear-path distances and its parent chains are
    themselves linear paths.
    """

    root: int
    dist: dict[int, int]
    parent_vertex: dict[int, int]
    parent_edge: dict[int, tuple[int, ...]]

    @property
    def layers(self) -> list[frozenset[int]]:
        if not self.dist:
            return []
        out: list[set[int]] = [set() for _ in range(max(self.dist.values()) + 1)]
        for v, i in self.dist.items():
            out[i].add(v)
        return [frozenset(s) for s in out]

    def layer(self, i: int) -> frozenset[int]:
        ls = self.layers
        return ls[i] if 0 <= i < len(ls) else frozenset()

    def path_to(self, v: int) -> LinearPath:
        edges = []
        cur = v
        while cur != self.root:
            edges.append(self.parent_edge[cur])
            cur = self.parent_vertex[cur]
        edges.reverse()
        path = LinearPath(tuple(edges), (self.root, v) if edges else None)
        assert path.length == self.dist[v]
        return path


def bfs_layers(g: LinearHypergraph, x: int) -> BfsLayers:
    if x not in g.vertices:
        raise PreconditionFailed(f"root {x} is not a vertex")
    dist = {x: 0}
    parent_vertex: dict[int, int] = {}
    parent_edge: dict[int, tuple[int, ...]] = {}
    q = deque([x])
    while q:
        u = q.popleft()
        for eid in g.incident.get(u, ()):
            e = g.edges[eid]
            for w in e:
                if w not in dist:
                    dist[w] = dist[u] + 1
                    parent_vertex[w] = u
                    parent_edge[w] = e
                    q.append(w)
    return BfsLayers(x, dist, parent_vertex, parent_edge)


# -- d-minimal subgraphs ------------------------------------------------------


def d_minimal(g: LinearHypergraph, d: float) -> LinearHypergraph:
    """First-order d-minimal induced subgraph: average degree >= d, and
    removing any single vertex drops the average degree below d.

    Descends by repeatedly deleting the lowest-indexed minimum-degree vertex
    whose removal keeps the average degree at d or above.
    """
    if g.average_degree() < d:
        raise PreconditionFailed(f"average degree {g.average_degree()} below {d}")
    alive = set(g.vertices)
    deg = {v: g.degree(v) for v in alive}
    edge_alive = [True] * len(g.edges)
    e_count = len(g.edges)

    def removable(v: int) -> bool:
        return len(alive) > 1 and g.r * (e_count - deg[v]) >= d * (len(alive) - 1)

    while True:
        cands = [v for v in alive if removable(v)]
        if not cands:
            break
        v = min(cands, key=lambda v: (deg[v], v))
        alive.discard(v)
        for eid in g.incident.get(v, ()):
            if edge_alive[eid]:
                edge_alive[eid] = False
                e_count -= 1
                for u in g.edges[eid]:
                    deg[u] -= 1
    out = g.induced(frozenset(alive))
    assert out.average_degree() >= d
    return out


def boundary_lower_bound_check(g: LinearHypergraph, subset: Iterable[int], d: float) -> bool:
    """Test oracle for d-minimality: edges touching a proper vertex subset S
    must number at least d|S|/r."""
    s = frozenset(subset)
    if not s < g.vertices:
        raise PreconditionFailed("S must be a proper subset of the vertex set")
    touching = sum(1 for e in g.edges if s.intersection(e))
    return touching >= d * len(s) / g.r


# -- r-partite reduction (Erdős–Kleitman) -------------------------------------


def _partite_edge_count(g: LinearHypergraph, part_of: dict[int, int]) -> int:
    r = g.r
    return sum(1 for e in g.edges if len({part_of[v] for v in e}) == r)


def r_partite_reduction(
    g: LinearHypergraph,
    seed: int = 0,
    partition_hint: Optional[RPartition] = None,
    restarts: int = 64,
) -> tuple[LinearHypergraph, RPartition]:
    """Random balanced r-partition plus single-vertex hill climbing until the
    partite subgraph keeps at least (r!/r^r) e(G) edges."""
    r = g.r
    target = math.factorial(r) / r**r * len(g.edges)
    verts = sorted(g.vertices)
    rng = random.Random(seed)

    if partition_hint is not None:
        part_of = partition_hint.index_map()
        if all(v in part_of for v in verts):
            count = _partite_edge_count(g, part_of)
            if count >= target:
                return _finish_partition(g, part_of)

    for _ in range(restarts):
        labels = [i % r for i in range(len(verts))]
        rng.shuffle(labels)
        part_of = dict(zip(verts, labels))
        count = _partite_edge_count(g, part_of)
        improved = True
        # climb to a local maximum even after clearing the target: partite
        # edges are scarce at higher r and downstream stages want every one
        while improved:
            improved = False
            for v in verts:
                base = part_of[v]
                best_gain, best_part = 0, base
                local = [eid for eid in g.incident.get(v, ())]
                before = sum(
                    1 for eid in local
                    if len({part_of[u] for u in g.edges[eid]}) == r
                )
                for p in range(r):
                    if p == base:
                        continue
                    part_of[v] = p
                    after = sum(
                        1 for eid in local
                        if len({part_of[u] for u in g.edges[eid]}) == r
                    )
                    if after - before > best_gain:
                        best_gain, best_part = after - before, p
                part_of[v] = best_part
                if best_gain > 0:
                    count += best_gain
                    improved = True
                else:
                    part_of[v] = base
        if count >= target:
            return _finish_partition(g, part_of)
    raise RetriesExhausted("r-partite reduction below the r!/r^r guarantee", restarts)


def _finish_partition(g: LinearHypergraph, part_of: dict[int, int]):
    r = g.r
    kept = [e for e in g.edges if len({part_of[v] for v in e}) == r]
    parts = tuple(
        frozenset(v for v, p in part_of.items() if p == i) for i in range(r)
    )
    sub = g.edge_induced(kept) if kept else LinearHypergraph(g.n, g.r, [], vertices=frozenset())
    return sub, RPartition(parts)
