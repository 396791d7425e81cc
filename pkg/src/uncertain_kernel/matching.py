"""Maximum bipartite matching with vertices (and edges) that may disappear.

Pipeline: subdivide uncertain edges into gadgets, fix a maximum matching
``M`` of the certain part, orient the graph along ``M``, collect a vertex
set ``X`` containing a minimum cut for every removal pattern, grow it to
``Z`` and keep only the torso on ``Z``. Matching edges outside ``Z`` are
folded into the offset ``k``.

The cut-covering set is computed exhaustively (one minimum cut per removal
pattern), so the running time is exponential in the number of uncertain
objects; ``threshold`` guards against runaway inputs.
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass, field
from itertools import product

from .errors import GraphError, InstanceError, InvariantViolation, ThresholdExceeded
from .graph import (
    BipartiteGraph,
    DiGraph,
    matching_size,
    max_matching,
    min_vertex_cut,
    orient,
    reach_avoiding,
    torso,
)

DEFAULT_THRESHOLD = 12


@dataclass(frozen=True)
class UncertainMatchingInstance:
    graph: BipartiteGraph
    L0: frozenset[int] = frozenset()
    R0: frozenset[int] = frozenset()
    E0: frozenset[int] = frozenset()

    def __post_init__(self) -> None:
        for name in ("L0", "R0", "E0"):
            object.__setattr__(self, name, frozenset(getattr(self, name)))
        g = self.graph
        if not self.L0 <= g.left:
            raise InstanceError(f"L0 contains non-left vertices {sorted(self.L0 - g.left)}")
        if not self.R0 <= g.right:
            raise InstanceError(f"R0 contains non-right vertices {sorted(self.R0 - g.right)}")
        if not self.E0 <= set(g.edges):
            raise InstanceError(f"E0 contains unknown edges {sorted(self.E0 - set(g.edges))}")


@dataclass(frozen=True)
class RemovalAssignment:
    """Which uncertain vertices are absent and which uncertain edges are unavailable."""

    L: frozenset[int] = frozenset()
    R: frozenset[int] = frozenset()
    unavailable: frozenset[int] = frozenset()

    def __post_init__(self) -> None:
        for name in ("L", "R", "unavailable"):
            object.__setattr__(self, name, frozenset(getattr(self, name)))


@dataclass(frozen=True)
class Gadget:
    """Uncertain edge ``left``-``right`` replaced by ``left``-``mid_right``-``mid_left``-``right``."""

    edge: int
    left: int
    right: int
    mid_right: int
    mid_left: int
    edge_ids: tuple[int, int, int]


@dataclass(frozen=True)
class Subdivision:
    graph: BipartiteGraph
    gadgets: dict[int, Gadget]

    @property
    def added_left(self) -> frozenset[int]:
        return frozenset(gd.mid_left for gd in self.gadgets.values())

    @property
    def added_right(self) -> frozenset[int]:
        return frozenset(gd.mid_right for gd in self.gadgets.values())


@dataclass(frozen=True)
class MatchingBundle:
    """``graph`` has every gadget contracted back to its uncertain edge id;
    ``subdivided`` is the same compressed graph with gadgets intact."""

    graph: BipartiteGraph
    subdivided: BipartiteGraph
    k: int
    L0: frozenset[int]
    R0: frozenset[int]
    E0: frozenset[int]
    gadgets: dict[int, tuple[int, int]]
    trace: dict | None = field(default=None, compare=False)


def subdivide_uncertain(inst: UncertainMatchingInstance) -> Subdivision:
    g = inst.graph
    next_v = max(g.vertices, default=-1) + 1
    next_e = max(g.edges, default=-1) + 1
    left, right = set(g.left), set(g.right)
    edges = {i: e for i, e in g.edges.items() if i not in inst.E0}
    gadgets = {}
    for eid in sorted(inst.E0):
        u, v = g.edges[eid]
        mid_r, mid_l = next_v, next_v + 1
        ids = (next_e, next_e + 1, next_e + 2)
        next_v += 2
        next_e += 3
        right.add(mid_r)
        left.add(mid_l)
        edges[ids[0]] = (u, mid_r)
        edges[ids[1]] = (mid_l, mid_r)
        edges[ids[2]] = (mid_l, v)
        gadgets[eid] = Gadget(eid, u, v, mid_r, mid_l, ids)
    return Subdivision(BipartiteGraph(frozenset(left), frozenset(right), edges), gadgets)


def iter_removals(groups: Sequence[frozenset[int]]) -> Iterator[frozenset[int]]:
    """Every union of a subset of ``groups``, in binary-counter order."""
    for bits in product((False, True), repeat=len(groups)):
        yield frozenset().union(*(grp for grp, on in zip(groups, bits) if on))


def _terminals(
    removed: frozenset[int],
    L0: frozenset[int],
    R0: frozenset[int],
    F_L: frozenset[int],
    F_R: frozenset[int],
) -> tuple[frozenset[int], frozenset[int]]:
    return F_L | (L0 - removed), F_R | (R0 - removed)


def _default_groups(L0: Iterable[int], R0: Iterable[int]) -> list[frozenset[int]]:
    return [frozenset({v}) for v in sorted(set(L0) | set(R0))]


def covering_set(
    H: DiGraph,
    L0: Iterable[int],
    R0: Iterable[int],
    F_L: Iterable[int],
    F_R: Iterable[int],
    groups: Sequence[frozenset[int]] | None = None,
    threshold: int = DEFAULT_THRESHOLD,
) -> frozenset[int]:
    """Union of one minimum ``(F_L ∪ L0 - L', F_R ∪ R0 - R')`` vertex cut of
    ``H - (L' ∪ R')`` over all removal patterns.

    ``groups`` partitions the uncertain vertices into sets that disappear
    together (both midpoints of an edge gadget); by default every uncertain
    vertex is its own group.
    """
    L0, R0, F_L, F_R = map(frozenset, (L0, R0, F_L, F_R))
    if groups is None:
        groups = _default_groups(L0, R0)
    if len(groups) > threshold:
        raise ThresholdExceeded(
            f"|L0|+|R0|+|E0| = {len(groups)} exceeds the exhaustive limit of {threshold}"
        )
    X: set[int] = set()
    for removed in iter_removals(groups):
        S, T = _terminals(removed, L0, R0, F_L, F_R)
        X |= min_vertex_cut(H.remove_vertices(removed), S, T)
    return frozenset(X)


def covering_failures(
    H: DiGraph,
    X: Iterable[int],
    L0: Iterable[int],
    R0: Iterable[int],
    F_L: Iterable[int],
    F_R: Iterable[int],
    groups: Sequence[frozenset[int]] | None = None,
) -> list[frozenset[int]]:
    """Removal patterns for which no minimum cut lies inside ``X``."""
    X, L0, R0, F_L, F_R = map(frozenset, (X, L0, R0, F_L, F_R))
    if groups is None:
        groups = _default_groups(L0, R0)
    bad = []
    for removed in iter_removals(groups):
        Hr = H.remove_vertices(removed)
        S, T = _terminals(removed, L0, R0, F_L, F_R)
        best = len(min_vertex_cut(Hr, S, T))
        try:
            inside = len(min_vertex_cut(Hr, S, T, uncuttable=Hr.vertices - X))
        except GraphError:
            inside = None
        if inside != best:
            bad.append(removed)
    return bad


@dataclass(frozen=True)
class ZSet:
    X_prime: frozenset[int]
    Z: frozenset[int]
    W: dict[int, frozenset[int]]


def build_Z(
    g: BipartiteGraph,
    H: DiGraph,
    M: Iterable[int],
    X: Iterable[int],
    L0: Iterable[int],
    R0: Iterable[int],
    F_L: Iterable[int],
    F_R: Iterable[int],
    cap: int | None = None,
) -> ZSet:
    """Close ``X`` under matching partners and attach free vertices.

    For a right vertex ``v`` of ``X'`` the attached vertices are the free left
    vertices that reach ``v`` through vertices outside ``X'``; for a left
    vertex, the free right vertices it reaches that way. At most ``cap``
    (default ``|L0| + |R0|``) of them are kept, lowest ids first.
    """
    X, L0, R0, F_L, F_R = map(frozenset, (X, L0, R0, F_L, F_R))
    if cap is None:
        cap = len(L0) + len(R0)
    M_X = [eid for eid in sorted(M) if set(g.edges[eid]) & X]
    X_prime = X | L0 | R0 | {x for eid in M_X for x in g.edges[eid]}
    W = {}
    for v in sorted(X_prime):
        if v in g.right:
            found = reach_avoiding(H, v, X_prime, "backward") & F_L
        else:
            found = reach_avoiding(H, v, X_prime, "forward") & F_R
        W[v] = frozenset(sorted(found)[:cap])
    Z = X_prime.union(*W.values())
    return ZSet(X_prime, Z, W)


def _contract_gadgets(gs: BipartiteGraph, gadgets: dict[int, Gadget]) -> BipartiteGraph:
    """Replace each intact gadget path by its original uncertain edge."""
    edges = dict(gs.edges)
    mids: set[int] = set()
    for eid, gd in sorted(gadgets.items()):
        path = {(gd.left, gd.mid_right), (gd.mid_left, gd.mid_right), (gd.mid_left, gd.right)}
        at_mids = {i for i, e in gs.edges.items() if gd.mid_left in e or gd.mid_right in e}
        if {gs.edges[i] for i in at_mids} != path or len(at_mids) != 3:
            raise InvariantViolation(f"gadget of edge {eid} was not preserved by the torso")
        for i in at_mids:
            del edges[i]
        mids |= {gd.mid_left, gd.mid_right}
        edges[eid] = (gd.left, gd.right)
    return BipartiteGraph(gs.left - mids, gs.right - mids, edges)


def _removal_groups(inst: UncertainMatchingInstance, sub: Subdivision) -> list[frozenset[int]]:
    return _default_groups(inst.L0, inst.R0) + [
        frozenset({gd.mid_left, gd.mid_right}) for _, gd in sorted(sub.gadgets.items())
    ]


def compress_matching(
    inst: UncertainMatchingInstance,
    trace: bool = False,
    threshold: int = DEFAULT_THRESHOLD,
) -> MatchingBundle:
    sub = subdivide_uncertain(inst)
    gs = sub.graph
    L0 = inst.L0 | sub.added_left
    R0 = inst.R0 | sub.added_right
    groups = _removal_groups(inst, sub)
    if len(groups) > threshold:
        raise ThresholdExceeded(
            f"|L0|+|R0|+|E0| = {len(groups)} exceeds the exhaustive limit of {threshold}"
        )

    M = max_matching(gs.remove_vertices(L0 | R0))
    covered = {x for eid in M for x in gs.edges[eid]}
    F_L = gs.left - L0 - covered
    F_R = gs.right - R0 - covered
    H = orient(gs, M)
    for s in F_L:
        if reach_avoiding(H, s, (), "forward") & F_R:
            raise InvariantViolation("augmenting path between certain free vertices")

    X = covering_set(H, L0, R0, F_L, F_R, groups, threshold)
    for gd in sub.gadgets.values():
        X |= {gd.left, gd.mid_right, gd.mid_left, gd.right}
    zs = build_Z(gs, H, M, X, L0, R0, F_L, F_R)
    Z = zs.Z
    for eid in M:
        if len(set(gs.edges[eid]) & Z) == 1:
            raise InvariantViolation(f"matching edge {eid} has exactly one endpoint in Z")
    if len(Z) > len(zs.X_prime) * (1 + len(L0) + len(R0)):
        raise InvariantViolation("Z exceeds its inflation bound")

    Ht = torso(H, Z)
    pairs = sorted({tuple(sorted(a)) for a in Ht.arcs})
    next_id = max(gs.edges, default=-1) + 1
    gadget_pairs = {}
    for gd in sub.gadgets.values():
        for i in gd.edge_ids:
            gadget_pairs[tuple(sorted(gs.edges[i]))] = i
    edges = {}
    for a, b in pairs:
        if (a in gs.left) == (b in gs.left):
            raise InvariantViolation(f"torso produced a same-side arc {a}-{b}")
        if (a, b) in gadget_pairs:
            edges[gadget_pairs[(a, b)]] = (a, b)
        else:
            edges[next_id] = (a, b)
            next_id += 1
    compressed_sub = BipartiteGraph(Z & gs.left, Z & gs.right, edges)

    inside = [eid for eid in M if set(gs.edges[eid]) <= Z]
    k = len(M) - len(inside)
    M_X = [eid for eid in M if set(gs.edges[eid]) & X]
    if len(inside) != len(M_X):
        raise InvariantViolation("matching edges inside Z differ from those meeting X")

    compressed = _contract_gadgets(compressed_sub, sub.gadgets)
    return MatchingBundle(
        compressed,
        compressed_sub,
        k,
        inst.L0,
        inst.R0,
        inst.E0,
        {eid: (gd.mid_right, gd.mid_left) for eid, gd in sorted(sub.gadgets.items())},
        {
            "M": sorted(M),
            "F_L": sorted(F_L),
            "F_R": sorted(F_R),
            "X": sorted(X),
            "X_prime": sorted(zs.X_prime),
            "Z": sorted(Z),
            "shortcuts": sorted([list(a) for a, t in Ht.arcs.items() if t == "shortcut"]),
        }
        if trace
        else None,
    )


def audit_covering(inst: UncertainMatchingInstance, bundle: MatchingBundle) -> list[frozenset[int]]:
    """Re-check the covering contract of a traced bundle.

    Returns the removal patterns for which no minimum cut lies inside the
    recorded ``X``; an empty list means the contract holds.
    """
    if bundle.trace is None:
        raise ValueError("bundle was compressed without trace")
    sub = subdivide_uncertain(inst)
    tr = bundle.trace
    return covering_failures(
        orient(sub.graph, tr["M"]),
        tr["X"],
        inst.L0 | sub.added_left,
        inst.R0 | sub.added_right,
        tr["F_L"],
        tr["F_R"],
        _removal_groups(inst, sub),
    )


def _check_assignment(bundle: MatchingBundle, a: RemovalAssignment) -> None:
    if not a.L <= bundle.L0:
        raise InstanceError(f"removal of undeclared left vertices {sorted(a.L - bundle.L0)}")
    if not a.R <= bundle.R0:
        raise InstanceError(f"removal of undeclared right vertices {sorted(a.R - bundle.R0)}")
    if not a.unavailable <= bundle.E0:
        raise InstanceError(f"undeclared uncertain edges {sorted(a.unavailable - bundle.E0)}")


def solve_matching(bundle: MatchingBundle, a: RemovalAssignment = RemovalAssignment()) -> int:
    """Maximum matching size of the original graph under assignment ``a``."""
    _check_assignment(bundle, a)
    g = bundle.graph.remove_vertices(a.L | a.R).remove_edges(a.unavailable)
    return matching_size(g) + bundle.k


def solve_matching_subdivided(
    bundle: MatchingBundle, a: RemovalAssignment = RemovalAssignment()
) -> int:
    """Same value as :func:`solve_matching`, evaluated with gadgets intact.

    Removing both midpoints makes an edge unavailable; every gadget left
    intact adds one to the matching size, which is subtracted again.
    """
    _check_assignment(bundle, a)
    gone = set(a.L | a.R)
    for eid in a.unavailable:
        gone.update(bundle.gadgets[eid])
    available = len(bundle.E0) - len(a.unavailable)
    return matching_size(bundle.subdivided.remove_vertices(gone)) + bundle.k - available


def all_assignments(
    L0: Iterable[int], R0: Iterable[int], E0: Iterable[int]
) -> Iterator[RemovalAssignment]:
    """All ``2^(|L0|+|R0|+|E0|)`` removal assignments."""
    L0, R0, E0 = sorted(L0), sorted(R0), sorted(E0)
    for bits in product((False, True), repeat=len(L0) + len(R0) + len(E0)):
        bl, br, be = bits[: len(L0)], bits[len(L0) : len(L0) + len(R0)], bits[len(L0) + len(R0) :]
        yield RemovalAssignment(
            frozenset(x for x, on in zip(L0, bl) if on),
            frozenset(x for x, on in zip(R0, br) if on),
            frozenset(x for x, on in zip(E0, be) if on),
        )
