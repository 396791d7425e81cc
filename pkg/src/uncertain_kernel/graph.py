"""Graph substrate: multigraphs with stable edge ids, bipartite matching,
vertex cuts, orientation and the torso operation.

All graph values are treated as immutable; every operation returns a new
value. Ties are broken by ascending id everywhere so that outputs are
reproducible.
"""

from __future__ import annotations

from collections import deque
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from functools import cached_property
from typing import NamedTuple

from .errors import GraphError, WeightOverflow

U64_MAX = 2**64 - 1

PLAIN = "plain"
SHORTCUT = "shortcut"


def checked_add(a: int, b: int) -> int:
    s = a + b
    if s > U64_MAX:
        raise WeightOverflow(f"weight sum {a} + {b} exceeds 2^64 - 1")
    return s


def check_weight(w: int) -> int:
    if isinstance(w, bool) or not isinstance(w, int):
        raise GraphError(f"weight must be an integer, got {w!r}")
    if w < 0 or w > U64_MAX:
        raise GraphError(f"weight {w} outside the unsigned 64-bit range")
    return w


class Edge(NamedTuple):
    u: int
    v: int
    w: int | None = None


@dataclass(frozen=True)
class WeightedMultigraph:
    """Undirected multigraph; parallel edges allowed, self-loops not."""

    vertices: frozenset[int]
    edges: Mapping[int, Edge] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "vertices", frozenset(self.vertices))
        edges = {int(eid): Edge(*e) for eid, e in self.edges.items()}
        object.__setattr__(self, "edges", dict(sorted(edges.items())))
        for v in self.vertices:
            if v < 0:
                raise GraphError(f"negative vertex id {v}")
        for eid, e in self.edges.items():
            if eid < 0:
                raise GraphError(f"negative edge id {eid}")
            if e.u not in self.vertices or e.v not in self.vertices:
                raise GraphError(f"edge {eid} references a missing vertex")
            if e.u == e.v:
                raise GraphError(f"edge {eid} is a self-loop")
            if e.w is not None:
                check_weight(e.w)

    @classmethod
    def from_edges(
        cls,
        edges: Iterable[tuple],
        vertices: Iterable[int] = (),
    ) -> WeightedMultigraph:
        """Build from ``(id, u, v)`` or ``(id, u, v, w)`` tuples."""
        emap = {}
        verts = set(vertices)
        for item in edges:
            eid, u, v, *rest = item
            if eid in emap:
                raise GraphError(f"duplicate edge id {eid}")
            emap[eid] = Edge(u, v, rest[0] if rest else None)
            verts.update((u, v))
        return cls(frozenset(verts), emap)

    def weight_map(self) -> dict[int, int]:
        return {eid: e.w for eid, e in self.edges.items() if e.w is not None}

    def endpoints(self, eid: int) -> tuple[int, int]:
        e = self.edges[eid]
        return e.u, e.v

    def remove_edges(self, eids: Iterable[int]) -> WeightedMultigraph:
        drop = set(eids)
        return WeightedMultigraph(
            self.vertices, {i: e for i, e in self.edges.items() if i not in drop}
        )

    def restrict_edges(self, eids: Iterable[int]) -> WeightedMultigraph:
        keep = set(eids)
        return WeightedMultigraph(
            self.vertices, {i: e for i, e in self.edges.items() if i in keep}
        )

    def with_weights(self, weights: Mapping[int, int]) -> WeightedMultigraph:
        """Return a copy where the given edges carry the given weights."""
        edges = dict(self.edges)
        for eid, w in weights.items():
            if eid not in edges:
                raise GraphError(f"unknown edge id {eid}")
            edges[eid] = edges[eid]._replace(w=w)
        return WeightedMultigraph(self.vertices, edges)

    def components(self) -> list[frozenset[int]]:
        parent = {v: v for v in self.vertices}

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for e in self.edges.values():
            a, b = find(e.u), find(e.v)
            if a != b:
                parent[max(a, b)] = min(a, b)
        groups: dict[int, set[int]] = {}
        for v in self.vertices:
            groups.setdefault(find(v), set()).add(v)
        return [frozenset(g) for _, g in sorted(groups.items())]

    def is_connected(self) -> bool:
        return len(self.components()) <= 1


def contract_edge(g: WeightedMultigraph, e: int) -> WeightedMultigraph:
    """Merge the endpoints of ``e`` into the smaller id.

    Edges that turn into self-loops are dropped; all other edges keep their
    ids with re-homed endpoints.
    """
    if e not in g.edges:
        raise GraphError(f"unknown edge id {e}")
    u, v = g.endpoints(e)
    if u == v:
        raise GraphError(f"edge {e} is a self-loop")
    keep, gone = min(u, v), max(u, v)
    edges = {}
    for eid, ed in g.edges.items():
        a = keep if ed.u == gone else ed.u
        b = keep if ed.v == gone else ed.v
        if a != b:
            edges[eid] = Edge(a, b, ed.w)
    return WeightedMultigraph(g.vertices - {gone}, edges)


class UnionFind:
    def __init__(self, items: Iterable[int] = ()) -> None:
        self.parent = {x: x for x in items}

    def find(self, x: int) -> int:
        parent = self.parent
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[max(ra, rb)] = min(ra, rb)
        return True


def kruskal_msf(
    g: WeightedMultigraph,
    weights: Mapping[int, int] | None = None,
    prefer: Iterable[int] = (),
) -> frozenset[int]:
    """Minimum spanning forest; ties broken by ascending edge id.

    ``weights`` overrides the weights stored on the edges; every edge must
    end up with a weight. Among equal weights, edges in ``prefer`` are
    scanned first.
    """
    w = g.weight_map()
    if weights is not None:
        w.update(weights)
    missing = [eid for eid in g.edges if eid not in w]
    if missing:
        raise GraphError(f"edges without weight: {missing}")
    uf = UnionFind(g.vertices)
    forest = []
    first = frozenset(prefer)
    for eid in sorted(g.edges, key=lambda i: (w[i], i not in first, i)):
        e = g.edges[eid]
        if uf.union(e.u, e.v):
            forest.append(eid)
    return frozenset(forest)


def forest_weight(eids: Iterable[int], weights: Mapping[int, int]) -> int:
    total = 0
    for eid in eids:
        total = checked_add(total, weights[eid])
    return total


# --------------------------------------------------------------------------
# bipartite graphs and matchings


@dataclass(frozen=True)
class BipartiteGraph:
    """Unweighted bipartite multigraph; every edge is stored as (left, right)."""

    left: frozenset[int]
    right: frozenset[int]
    edges: Mapping[int, tuple[int, int]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        left, right = frozenset(self.left), frozenset(self.right)
        object.__setattr__(self, "left", left)
        object.__setattr__(self, "right", right)
        if left & right:
            raise GraphError(f"vertices on both sides: {sorted(left & right)}")
        edges = {}
        for eid, (u, v) in sorted(self.edges.items()):
            if u in right and v in left:
                u, v = v, u
            if u not in left or v not in right:
                raise GraphError(f"edge {eid} does not cross the bipartition")
            edges[int(eid)] = (u, v)
        object.__setattr__(self, "edges", edges)

    @property
    def vertices(self) -> frozenset[int]:
        return self.left | self.right

    @cached_property
    def adjacency(self) -> dict[int, list[tuple[int, int]]]:
        """Left vertex -> sorted list of (right neighbour, edge id)."""
        adj: dict[int, list[tuple[int, int]]] = {u: [] for u in sorted(self.left)}
        for eid, (u, v) in self.edges.items():
            adj[u].append((v, eid))
        for lst in adj.values():
            lst.sort()
        return adj

    def remove_vertices(self, vs: Iterable[int]) -> BipartiteGraph:
        drop = frozenset(vs)
        return BipartiteGraph(
            self.left - drop,
            self.right - drop,
            {i: e for i, e in self.edges.items() if e[0] not in drop and e[1] not in drop},
        )

    def remove_edges(self, eids: Iterable[int]) -> BipartiteGraph:
        drop = set(eids)
        return BipartiteGraph(
            self.left, self.right, {i: e for i, e in self.edges.items() if i not in drop}
        )


def check_matching(g: BipartiteGraph, m: Iterable[int]) -> frozenset[int]:
    m = frozenset(m)
    seen: set[int] = set()
    for eid in m:
        if eid not in g.edges:
            raise GraphError(f"matching edge {eid} is not in the graph")
        u, v = g.edges[eid]
        if u in seen or v in seen:
            raise GraphError(f"matching edges share a vertex at edge {eid}")
        seen.update((u, v))
    return m


def _hopcroft_karp(
    g: BipartiteGraph, match_l: dict[int, tuple[int, int]], match_r: dict[int, int]
) -> None:
    """Grow the matching in place to maximum cardinality.

    ``match_l`` maps a left vertex to (right vertex, edge id); ``match_r``
    maps a right vertex back to its left partner.
    """
    adj = g.adjacency
    lefts = sorted(g.left)
    inf = len(lefts) + 1
    while True:
        dist: dict[int, int] = {}
        queue: deque[int] = deque()
        for u in lefts:
            if u not in match_l:
                dist[u] = 0
                queue.append(u)
        found = inf
        while queue:
            u = queue.popleft()
            if dist[u] >= found:
                continue
            for v, _ in adj[u]:
                w = match_r.get(v)
                if w is None:
                    found = min(found, dist[u] + 1)
                elif w not in dist:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        if found == inf:
            return

        def dfs(u: int) -> bool:
            for v, eid in adj[u]:
                w = match_r.get(v)
                if (w is None and dist[u] + 1 == found) or (
                    w is not None and dist.get(w) == dist[u] + 1 and dfs(w)
                ):
                    match_l[u] = (v, eid)
                    match_r[v] = u
                    return True
            dist[u] = inf
            return False

        for u in lefts:
            if u not in match_l:
                dfs(u)


def max_matching(g: BipartiteGraph, initial: Iterable[int] = ()) -> frozenset[int]:
    """Maximum-cardinality matching (Hopcroft-Karp), as a set of edge ids.

    The search may start from ``initial``, which must itself be a matching.
    """
    match_l: dict[int, tuple[int, int]] = {}
    match_r: dict[int, int] = {}
    for eid in check_matching(g, initial):
        u, v = g.edges[eid]
        match_l[u] = (v, eid)
        match_r[v] = u
    _hopcroft_karp(g, match_l, match_r)
    return frozenset(eid for _, eid in match_l.values())


def matching_size(g: BipartiteGraph) -> int:
    return len(max_matching(g))


def augmenting_path_packing(
    g: BipartiteGraph, m: Iterable[int]
) -> list[tuple[int, ...]]:
    """A maximum set of vertex-disjoint ``m``-augmenting paths.

    Each path is a vertex sequence from an ``m``-free left vertex to an
    ``m``-free right vertex. The packing is read off the symmetric
    difference between ``m`` and a maximum matching grown from ``m``.
    """
    m = check_matching(g, m)
    m0 = max_matching(g, m)
    diff = m ^ m0
    nbrs: dict[int, list[tuple[int, int]]] = {}
    for eid in sorted(diff):
        u, v = g.edges[eid]
        nbrs.setdefault(u, []).append((v, eid))
        nbrs.setdefault(v, []).append((u, eid))
    covered = {x for eid in m for x in g.edges[eid]}
    paths = []
    for start in sorted(g.left):
        # a component of m ^ m0 is augmenting iff it is a path whose ends are m-free;
        # its left end has degree 1 and is not covered by m
        if start in covered or len(nbrs.get(start, ())) != 1:
            continue
        path = [start]
        prev_edge = None
        cur = start
        while True:
            step = [(x, eid) for x, eid in nbrs[cur] if eid != prev_edge]
            if not step:
                break
            cur, prev_edge = step[0]
            path.append(cur)
        if path[-1] in g.right and path[-1] not in covered:
            paths.append(tuple(path))
    return paths


# --------------------------------------------------------------------------
# directed graphs


@dataclass(frozen=True)
class DiGraph:
    """Simple digraph; each arc is tagged ``plain`` or ``shortcut``."""

    vertices: frozenset[int]
    arcs: Mapping[tuple[int, int], str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "vertices", frozenset(self.vertices))
        arcs = {}
        for (u, v), tag in sorted(self.arcs.items()):
            if u not in self.vertices or v not in self.vertices:
                raise GraphError(f"arc ({u}, {v}) references a missing vertex")
            if tag not in (PLAIN, SHORTCUT):
                raise GraphError(f"unknown arc tag {tag!r}")
            arcs[(u, v)] = tag
        object.__setattr__(self, "arcs", arcs)

    @classmethod
    def from_arcs(
        cls, arcs: Iterable[tuple[int, int]], vertices: Iterable[int] = ()
    ) -> DiGraph:
        arcs = list(arcs)
        verts = set(vertices)
        for u, v in arcs:
            verts.update((u, v))
        return cls(frozenset(verts), {a: PLAIN for a in arcs})

    @cached_property
    def succ(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {v: [] for v in sorted(self.vertices)}
        for u, v in self.arcs:
            out[u].append(v)
        return out

    @cached_property
    def pred(self) -> dict[int, list[int]]:
        inc: dict[int, list[int]] = {v: [] for v in sorted(self.vertices)}
        for u, v in self.arcs:
            inc[v].append(u)
        for lst in inc.values():
            lst.sort()
        return inc

    def remove_vertices(self, vs: Iterable[int]) -> DiGraph:
        drop = frozenset(vs)
        return DiGraph(
            self.vertices - drop,
            {a: t for a, t in self.arcs.items() if a[0] not in drop and a[1] not in drop},
        )


def orient(g: BipartiteGraph, m: Iterable[int]) -> DiGraph:
    """Matched edges point right -> left, unmatched ones left -> right."""
    m = check_matching(g, m)
    arcs = {}
    for eid, (u, v) in g.edges.items():
        arcs[(v, u) if eid in m else (u, v)] = PLAIN
    return DiGraph(g.vertices, arcs)


def min_vertex_cut(
    d: DiGraph,
    sources: Iterable[int],
    sinks: Iterable[int],
    uncuttable: Iterable[int] = (),
) -> frozenset[int]:
    """Minimum vertex set meeting every directed path from ``sources`` to ``sinks``.

    The cut may contain terminals; a vertex in both sets is always cut.
    Vertices in ``uncuttable`` get infinite capacity. Among minimum cuts the
    one closest to the sources is returned. Raises ``GraphError`` when no
    finite cut exists.
    """
    S = frozenset(sources) & d.vertices
    T = frozenset(sinks) & d.vertices
    if not S or not T:
        return frozenset()
    order = sorted(d.vertices)
    n = len(order)
    idx = {v: i for i, v in enumerate(order)}
    src, snk = 2 * n, 2 * n + 1
    inf = n + 1
    blocked = frozenset(uncuttable)
    res: list[dict[int, int]] = [{} for _ in range(2 * n + 2)]

    def add(a: int, b: int, c: int) -> None:
        res[a][b] = res[a].get(b, 0) + c
        res[b].setdefault(a, 0)

    for v in order:
        i = idx[v]
        add(2 * i, 2 * i + 1, inf if v in blocked else 1)
    for u, v in d.arcs:
        add(2 * idx[u] + 1, 2 * idx[v], inf)
    for s in sorted(S):
        add(src, 2 * idx[s], inf)
    for t in sorted(T):
        add(2 * idx[t] + 1, snk, inf)

    flow = 0
    while True:
        parent = {src: src}
        queue = deque([src])
        while queue and snk not in parent:
            a = queue.popleft()
            for b, c in res[a].items():
                if c > 0 and b not in parent:
                    parent[b] = a
                    queue.append(b)
        if snk not in parent:
            break
        bottleneck = inf
        b = snk
        while b != src:
            a = parent[b]
            bottleneck = min(bottleneck, res[a][b])
            b = a
        b = snk
        while b != src:
            a = parent[b]
            res[a][b] -= bottleneck
            res[b][a] += bottleneck
            b = a
        flow += bottleneck
        if flow >= inf:
            raise GraphError("no finite vertex cut separates the terminals")

    cut = frozenset(v for v in order if 2 * idx[v] in parent and 2 * idx[v] + 1 not in parent)
    if len(cut) != flow:
        raise GraphError("no finite vertex cut separates the terminals")
    return cut


def reach_avoiding(
    d: DiGraph, v: int, blocked: Iterable[int], direction: str = "forward"
) -> frozenset[int]:
    """Vertices joined to ``v`` by a directed path whose internal vertices
    avoid ``blocked``. ``direction='backward'`` follows arcs in reverse."""
    if direction == "forward":
        nbrs = d.succ
    elif direction == "backward":
        nbrs = d.pred
    else:
        raise ValueError(f"direction must be 'forward' or 'backward', got {direction!r}")
    blocked = frozenset(blocked)
    seen = {v}
    queue = deque([v])
    while queue:
        u = queue.popleft()
        for w in nbrs[u]:
            if w in seen:
                continue
            seen.add(w)
            if w not in blocked:
                queue.append(w)
    seen.discard(v)
    return frozenset(seen)


def torso(d: DiGraph, Z: Iterable[int]) -> DiGraph:
    """``d[Z]`` plus a shortcut arc for every Z-to-Z path with internal
    vertices outside ``Z``."""
    Z = frozenset(Z)
    if not Z <= d.vertices:
        raise GraphError("torso set is not a subset of the vertices")
    arcs = {}
    for u in sorted(Z):
        for w in sorted(reach_avoiding(d, u, Z, "forward") & Z):
            arcs[(u, w)] = d.arcs.get((u, w), SHORTCUT)
    return DiGraph(Z, arcs)
