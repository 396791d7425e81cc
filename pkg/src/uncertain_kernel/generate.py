"""Seeded random instance generators.

Each generator takes its own ``random.Random`` built from the seed, so the
same parameters and seed always give the same instance.
"""

from __future__ import annotations

import random

from .errors import KernelError
from .gfp import DEFAULT_PRIME
from .graph import BipartiteGraph, Edge, WeightedMultigraph
from .matching import UncertainMatchingInstance
from .matroid import GraphicMatroid, LinearMatroid, Matroid, TransversalMatroid, UniformMatroid
from .matroid_compress import UncertainMatroidInstance
from .mst import UncertainMstInstance, UncertainShortestPathInstance

FAMILIES = ("graphic", "uniform", "linear", "transversal")


class GenerationError(KernelError, ValueError):
    """The requested parameters cannot be realised."""


def _connected_pairs(rng: random.Random, n: int, m: int) -> list[tuple[int, int]]:
    if n < 1:
        raise GenerationError("need at least one vertex")
    if m < n - 1:
        raise GenerationError(f"{m} edges cannot connect {n} vertices")
    if n == 1 and m > 0:
        raise GenerationError("a single vertex admits no edges without self-loops")
    order = list(range(n))
    rng.shuffle(order)
    pairs = [(order[i], order[rng.randrange(i)]) for i in range(1, n)]
    while len(pairs) < m:
        u, v = rng.sample(range(n), 2)
        pairs.append((u, v))
    rng.shuffle(pairs)
    return pairs


def random_multigraph(
    rng: random.Random, n: int, m: int, F: int, wmax: int
) -> tuple[WeightedMultigraph, frozenset[int]]:
    """Connected multigraph with ``m`` edges, ``F`` of them left unweighted."""
    if not 0 <= F <= m:
        raise GenerationError(f"cannot mark {F} of {m} edges uncertain")
    if wmax < 0:
        raise GenerationError("wmax must be non-negative")
    pairs = _connected_pairs(rng, n, m)
    uncertain = frozenset(rng.sample(range(m), F))
    edges = {
        i: Edge(u, v, None if i in uncertain else rng.randint(0, wmax))
        for i, (u, v) in enumerate(pairs)
    }
    return WeightedMultigraph(frozenset(range(n)), edges), uncertain


def gen_mst(n: int, m: int, f: int, seed: int, wmax: int = 7) -> UncertainMstInstance:
    g, F = random_multigraph(random.Random(seed), n, m, f, wmax)
    return UncertainMstInstance(g, F)


def gen_shortest_path(n: int, m: int, f: int, seed: int, wmax: int = 7) -> UncertainShortestPathInstance:
    rng = random.Random(seed)
    g, F = random_multigraph(rng, n, m, f, wmax)
    s, t = rng.sample(range(n), 2) if n > 1 else (0, 0)
    return UncertainShortestPathInstance(g, F, s, t)


def random_bipartite(rng: random.Random, left: int, right: int, density: float) -> BipartiteGraph:
    """Left vertices ``0..left-1``, right vertices ``left..left+right-1``."""
    if left < 0 or right < 0:
        raise GenerationError("side sizes must be non-negative")
    L = list(range(left))
    R = list(range(left, left + right))
    edges: dict[int, tuple[int, int]] = {}
    for u in L:
        for v in R:
            if rng.random() < density:
                edges[len(edges)] = (u, v)
                if rng.random() < 0.1:
                    edges[len(edges)] = (u, v)
    return BipartiteGraph(frozenset(L), frozenset(R), edges)


def gen_matching(
    left: int,
    right: int,
    l0: int,
    r0: int,
    e0: int,
    seed: int,
    density: float = 0.35,
) -> UncertainMatchingInstance:
    if l0 > left or r0 > right:
        raise GenerationError("more uncertain vertices than vertices on a side")
    if not 0.0 <= density <= 1.0:
        raise GenerationError("density must lie in [0, 1]")
    rng = random.Random(seed)
    g = random_bipartite(rng, left, right, density)
    if e0 > len(g.edges):
        raise GenerationError(f"cannot mark {e0} of {len(g.edges)} edges uncertain")
    return UncertainMatchingInstance(
        g,
        frozenset(rng.sample(sorted(g.left), l0)),
        frozenset(rng.sample(sorted(g.right), r0)),
        frozenset(rng.sample(sorted(g.edges), e0)),
    )


def random_matroid(rng: random.Random, family: str, n: int, rank: int | None = None) -> Matroid:
    """Matroid with ground set ``0..n-1`` from the requested family."""
    if n < 0:
        raise GenerationError("ground size must be non-negative")
    if family == "uniform":
        r = rng.randint(0, n) if rank is None else rank
        if not 0 <= r <= n:
            raise GenerationError(f"rank {r} outside [0, {n}]")
        return UniformMatroid(frozenset(range(n)), r)
    if family == "graphic":
        nv = rng.randint(2, n // 2 + 2) if rank is None else rank + 1
        if n > 0 and nv < 2:
            raise GenerationError("graphic matroid with elements needs rank at least 1")
        edges = {i: Edge(*rng.sample(range(nv), 2)) for i in range(n)}
        return GraphicMatroid(WeightedMultigraph(frozenset(range(nv)), edges))
    if family == "linear":
        r = rng.randint(1, max(1, min(n, 4))) if rank is None else rank
        if r < 0:
            raise GenerationError("rank must be non-negative")
        # small entries make dependent columns common
        rows = tuple(tuple(rng.choice((0, 0, 1, 1, 2, DEFAULT_PRIME - 1)) for _ in range(n)) for _ in range(r))
        return LinearMatroid(DEFAULT_PRIME, rows, tuple(range(n)))
    if family == "transversal":
        k = rng.randint(1, max(1, n // 2 + 1)) if rank is None else rank
        left = list(range(n, n + k))
        edges: dict[int, tuple[int, int]] = {}
        for v in range(n):
            for u in left:
                if rng.random() < 0.4:
                    edges[len(edges)] = (u, v)
        return TransversalMatroid(BipartiteGraph(frozenset(left), frozenset(range(n)), edges))
    raise GenerationError(f"unknown matroid family {family!r}")


def gen_matroid(
    family: str, n: int, f: int, seed: int, wmax: int = 5, rank: int | None = None
) -> UncertainMatroidInstance:
    if not 0 <= f <= n:
        raise GenerationError(f"cannot mark {f} of {n} elements uncertain")
    rng = random.Random(seed)
    m = random_matroid(rng, family, n, rank)
    F = frozenset(rng.sample(range(n), f))
    weights = {e: rng.randint(0, wmax) for e in range(n) if e not in F}
    return UncertainMatroidInstance(m, F, weights)
