"""Minimum spanning tree with unknown edge weights, plus the shortest-path
warm-up.

``compress_mst`` shrinks a graph whose edges in ``F`` have unknown weight to
a graph with at most ``|F|`` certain edges and an offset ``k`` such that,
for every weighting of ``F``, the two MST weights differ by exactly ``k``.
"""

from __future__ import annotations

import heapq
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field

from .errors import GraphError, InstanceError, InvariantViolation
from .graph import (
    Edge,
    WeightedMultigraph,
    checked_add,
    contract_edge,
    forest_weight,
    kruskal_msf,
)


@dataclass(frozen=True)
class UncertainMstInstance:
    graph: WeightedMultigraph
    F: frozenset[int]

    def __post_init__(self) -> None:
        object.__setattr__(self, "F", frozenset(self.F))
        g = self.graph
        if not self.F <= set(g.edges):
            raise InstanceError(f"uncertain edges not in graph: {sorted(self.F - set(g.edges))}")
        for eid, e in g.edges.items():
            if eid in self.F and e.w is not None:
                raise InstanceError(f"uncertain edge {eid} carries a weight")
            if eid not in self.F and e.w is None:
                raise InstanceError(f"certain edge {eid} has no weight")
        if not g.is_connected():
            raise InstanceError("graph is not connected")

    @property
    def known_weights(self) -> dict[int, int]:
        return self.graph.weight_map()


@dataclass(frozen=True)
class MstBundle:
    """Compressed graph (certain edges weighted, ``F`` unweighted) and offset."""

    graph: WeightedMultigraph
    F: frozenset[int]
    k: int
    trace: dict | None = field(default=None, compare=False)

    @property
    def certain_edges(self) -> frozenset[int]:
        return frozenset(self.graph.edges) - self.F


def compress_mst(inst: UncertainMstInstance, trace: bool = False) -> MstBundle:
    g, F = inst.graph, inst.F
    w = inst.known_weights

    msf = kruskal_msf(g.remove_edges(F), w)
    g1 = g.restrict_edges(msf | F)
    w0 = dict(w)
    w0.update({f: 0 for f in F})
    # F first among zero weights: an F edge left out of this tree then has its
    # endpoints joined by F edges only, so no contraction turns it into a loop
    mst0 = kruskal_msf(g1, w0, prefer=F)
    to_contract = sorted(mst0 - F)

    g2 = g1
    k = 0
    for eid in to_contract:
        g2 = contract_edge(g2, eid)
        k = checked_add(k, w[eid])

    bundle = MstBundle(
        g2,
        F,
        k,
        {
            "msf": sorted(msf),
            "g1_edges": sorted(g1.edges),
            "mst_w0": sorted(mst0),
            "contracted": to_contract,
        }
        if trace
        else None,
    )
    if len(bundle.certain_edges) > len(F):
        raise InvariantViolation(f"{len(bundle.certain_edges)} certain edges left, |F| = {len(F)}")
    if not F <= set(g2.edges):
        raise InvariantViolation("an uncertain edge was lost during contraction")
    if not g2.is_connected():
        raise InvariantViolation("compressed graph is disconnected")
    return bundle


def _check_assignment(F: frozenset[int], wF: Mapping[int, int]) -> None:
    missing = F - set(wF)
    if missing:
        raise InstanceError(f"missing weights for uncertain edges {sorted(missing)}")
    extra = set(wF) - F
    if extra:
        raise InstanceError(f"weights given for undeclared edges {sorted(extra)}")


def solve_mst(bundle: MstBundle, wF: Mapping[int, int]) -> int:
    """MST weight of the original graph under ``wF``, computed on the bundle."""
    _check_assignment(bundle.F, wF)
    g = bundle.graph.with_weights(wF)
    weights = g.weight_map()
    return checked_add(forest_weight(kruskal_msf(g, weights), weights), bundle.k)


# --------------------------------------------------------------------------
# shortest paths


@dataclass(frozen=True)
class UncertainShortestPathInstance:
    graph: WeightedMultigraph
    F: frozenset[int]
    s: int
    t: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "F", frozenset(self.F))
        g = self.graph
        if not self.F <= set(g.edges):
            raise InstanceError(f"uncertain edges not in graph: {sorted(self.F - set(g.edges))}")
        for x in (self.s, self.t):
            if x not in g.vertices:
                raise InstanceError(f"terminal {x} is not a vertex")
        for eid, e in g.edges.items():
            if (eid in self.F) == (e.w is not None):
                raise InstanceError(f"edge {eid}: exactly the certain edges must carry weights")


@dataclass(frozen=True)
class ShortestPathBundle:
    """Terminal graph on ``{s, t} ∪ V(F)``.

    Certain edges carry the ``G - F`` distance between their endpoints and
    are labelled with the interior vertices of one shortest path.
    """

    graph: WeightedMultigraph
    F: frozenset[int]
    s: int
    t: int
    labels: dict[int, tuple[int, ...]]
    k: int = 0


def _dijkstra(
    g: WeightedMultigraph, source: int
) -> tuple[dict[int, int], dict[int, int]]:
    if source not in g.vertices:
        raise GraphError(f"vertex {source} is not in the graph")
    adj: dict[int, list[tuple[int, int, int]]] = {v: [] for v in g.vertices}
    for eid, e in g.edges.items():
        adj[e.u].append((e.v, e.w, eid))
        adj[e.v].append((e.u, e.w, eid))
    dist = {source: 0}
    parent: dict[int, int] = {}
    heap = [(0, source)]
    done = set()
    while heap:
        d, u = heapq.heappop(heap)
        if u in done:
            continue
        done.add(u)
        for v, w, _ in sorted(adj[u]):
            nd = checked_add(d, w)
            if v not in done and (v not in dist or nd < dist[v]):
                dist[v] = nd
                parent[v] = u
                heapq.heappush(heap, (nd, v))
    return dist, parent


def compress_shortest_path(
    g: WeightedMultigraph, F: Iterable[int], s: int, t: int
) -> ShortestPathBundle:
    F = frozenset(F)
    for x in (s, t):
        if x not in g.vertices:
            raise GraphError(f"terminal {x} is not a vertex")
    if not F <= set(g.edges):
        raise InstanceError(f"uncertain edges not in graph: {sorted(F - set(g.edges))}")
    certain = g.remove_edges(F)
    if any(e.w is None for e in certain.edges.values()):
        raise InstanceError("every certain edge needs a weight")

    terminals = sorted({s, t} | {x for f in F for x in g.endpoints(f)})
    next_id = max(g.edges, default=-1) + 1
    edges: dict[int, Edge] = {f: g.edges[f]._replace(w=None) for f in sorted(F)}
    labels: dict[int, tuple[int, ...]] = {}
    for i, u in enumerate(terminals):
        dist, parent = _dijkstra(certain, u)
        for v in terminals[i + 1:]:
            if v not in dist:
                continue
            interior = []
            x = parent.get(v)
            while x is not None and x != u:
                interior.append(x)
                x = parent.get(x)
            edges[next_id] = Edge(u, v, dist[v])
            labels[next_id] = tuple(reversed(interior))
            next_id += 1
    return ShortestPathBundle(WeightedMultigraph(frozenset(terminals), edges), F, s, t, labels)


def shortest_distance(g: WeightedMultigraph, s: int, t: int) -> int | None:
    dist, _ = _dijkstra(g, s)
    return dist.get(t)


def solve_shortest_path(bundle: ShortestPathBundle, wF: Mapping[int, int]) -> int | None:
    """s-t distance in the original graph under ``wF``; ``None`` if unreachable."""
    _check_assignment(bundle.F, wF)
    d = shortest_distance(bundle.graph.with_weights(wF), bundle.s, bundle.t)
    return None if d is None else d + bundle.k
