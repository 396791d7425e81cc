"""Brute-force oracles and the equivalence verifier.

Nothing in here calls the solvers used by the compressors: spanning trees
and bases are enumerated, matchings are found by a bitmask dynamic program
and shortest paths by Bellman-Ford relaxation.
"""

from __future__ import annotations

import json
import time
from collections.abc import Iterable, Mapping, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations, product

import numpy as np

from .errors import BudgetExceeded, GraphError, InstanceError, MatroidError
from .graph import BipartiteGraph, WeightedMultigraph
from .matching import (
    MatchingBundle,
    RemovalAssignment,
    UncertainMatchingInstance,
    all_assignments,
    solve_matching,
)
from .matroid import Matroid
from .matroid_compress import MatroidBundle, UncertainMatroidInstance, solve_matroid
from .mst import (
    MstBundle,
    ShortestPathBundle,
    UncertainMstInstance,
    UncertainShortestPathInstance,
    solve_mst,
    solve_shortest_path,
)

ENUMERATION_LIMIT = 16
DEFAULT_BUDGET = 2**20


def _connects(vertices: frozenset[int], pairs: Iterable[tuple[int, int]]) -> bool:
    adj: dict[int, list[int]] = {v: [] for v in vertices}
    for u, v in pairs:
        adj[u].append(v)
        adj[v].append(u)
    if not vertices:
        return True
    start = min(vertices)
    stack, seen = [start], {start}
    while stack:
        for y in adj[stack.pop()]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return len(seen) == len(vertices)


def spanning_trees(g: WeightedMultigraph) -> list[tuple[int, ...]]:
    """Every spanning tree of a connected multigraph, as sorted edge-id tuples."""
    n = len(g.vertices)
    ids = sorted(g.edges)
    return [
        combo
        for combo in combinations(ids, n - 1)
        if _connects(g.vertices, (g.endpoints(e) for e in combo))
    ]


def _prim(g: WeightedMultigraph, w: Mapping[int, int]) -> int:
    adj: dict[int, list[tuple[int, int]]] = {v: [] for v in g.vertices}
    for eid, e in g.edges.items():
        adj[e.u].append((w[eid], e.v))
        adj[e.v].append((w[eid], e.u))
    start = min(g.vertices)
    best = {v: None for v in g.vertices}
    best[start] = 0
    todo = set(g.vertices)
    total = 0
    while todo:
        cand = [v for v in todo if best[v] is not None]
        if not cand:
            raise GraphError("graph is not connected")
        v = min(cand, key=lambda x: (best[x], x))
        todo.remove(v)
        total += best[v]
        for c, y in adj[v]:
            if y in todo and (best[y] is None or c < best[y]):
                best[y] = c
    return total


def oracle_mst(g: WeightedMultigraph, w: Mapping[int, int] | None = None) -> int:
    """Exact MST weight by enumeration (|E| <= 16) or by Prim's method."""
    weights = g.weight_map()
    if w is not None:
        weights.update(w)
    if set(weights) != set(g.edges):
        raise GraphError("oracle_mst needs a weight on every edge")
    if not _connects(g.vertices, (g.endpoints(e) for e in g.edges)):
        raise GraphError("graph is not connected")
    if len(g.edges) > ENUMERATION_LIMIT:
        return _prim(g, weights)
    return min(sum(weights[e] for e in tree) for tree in spanning_trees(g))


class MstOracle:
    """Minimum spanning tree weights for many weightings of ``F`` at once."""

    def __init__(self, g: WeightedMultigraph, F: Iterable[int]) -> None:
        self.F = sorted(F)
        trees = spanning_trees(g)
        if not trees:
            raise GraphError("graph is not connected")
        known = g.weight_map()
        self.base = np.array(
            [sum(known[e] for e in t if e not in self.F) for t in trees], dtype=np.int64
        )
        self.incidence = np.array(
            [[1 if f in t else 0 for f in self.F] for t in trees], dtype=np.int64
        ).reshape(len(trees), len(self.F))

    def batch(self, grid: np.ndarray, chunk: int = 256) -> np.ndarray:
        grid = np.asarray(grid, dtype=np.int64)
        grid = grid.reshape(len(grid), len(self.F))
        out = np.empty(len(grid), dtype=np.int64)
        for i in range(0, len(grid), chunk):
            block = grid[i : i + chunk]
            out[i : i + chunk] = (self.base[None, :] + block @ self.incidence.T).min(axis=1)
        return out


def all_bases(m: Matroid) -> list[frozenset[int]]:
    """Every basis, found by testing all subsets of the ground set."""
    ground = sorted(m.ground)
    if len(ground) > ENUMERATION_LIMIT:
        raise MatroidError(f"ground set of {len(ground)} elements is too large to enumerate")
    independent = [
        frozenset(c)
        for size in range(len(ground) + 1)
        for c in combinations(ground, size)
        if m.is_independent(c)
    ]
    r = max(len(s) for s in independent)
    return [s for s in independent if len(s) == r]


def oracle_min_basis(m: Matroid, w: Mapping[int, int]) -> int:
    return min(sum(w[e] for e in b) for b in all_bases(m))


class BasisOracle:
    def __init__(self, m: Matroid, known: Mapping[int, int], F: Iterable[int]) -> None:
        self.F = sorted(F)
        bases = all_bases(m)
        self.base = np.array([sum(known[e] for e in b if e not in self.F) for b in bases], dtype=np.int64)
        self.incidence = np.array(
            [[1 if f in b else 0 for f in self.F] for b in bases], dtype=np.int64
        ).reshape(len(bases), len(self.F))

    def batch(self, grid: np.ndarray) -> np.ndarray:
        grid = np.asarray(grid, dtype=np.int64)
        grid = grid.reshape(len(grid), len(self.F))
        return (self.base[None, :] + grid @ self.incidence.T).min(axis=1)


def oracle_max_matching(g: BipartiteGraph) -> int:
    """Maximum matching size by dynamic programming over subsets of the right side."""
    rights = sorted(g.right)
    if len(rights) > 20:
        raise GraphError("too many right vertices for the exhaustive matching oracle")
    bit = {v: 1 << i for i, v in enumerate(rights)}
    nbr_masks = []
    for u in sorted(g.left):
        mask = 0
        for a, b in g.edges.values():
            if a == u:
                mask |= bit[b]
        nbr_masks.append(mask)

    @lru_cache(maxsize=None)
    def best(i: int, used: int) -> int:
        if i == len(nbr_masks):
            return 0
        result = best(i + 1, used)
        free = nbr_masks[i] & ~used
        while free:
            low = free & -free
            result = max(result, 1 + best(i + 1, used | low))
            free ^= low
        return result

    return best(0, 0)


def oracle_shortest_path(g: WeightedMultigraph, s: int, t: int, w: Mapping[int, int] | None = None) -> int | None:
    """Bellman-Ford distance from ``s`` to ``t``; ``None`` if unreachable."""
    weights = g.weight_map()
    if w is not None:
        weights.update(w)
    dist: dict[int, int | None] = {v: None for v in g.vertices}
    dist[s] = 0
    for _ in range(max(len(g.vertices) - 1, 0)):
        changed = False
        for eid, e in g.edges.items():
            for a, b in ((e.u, e.v), (e.v, e.u)):
                if dist[a] is not None:
                    cand = dist[a] + weights[eid]
                    if dist[b] is None or cand < dist[b]:
                        dist[b] = cand
                        changed = True
        if not changed:
            break
    return dist[t]


# --------------------------------------------------------------------------
# verification


@dataclass(frozen=True)
class VerificationPlan:
    mode: str = "exhaustive"
    samples: int = 0
    seed: int = 0
    wmax: int = 7
    budget: int = DEFAULT_BUDGET

    def __post_init__(self) -> None:
        if self.mode not in ("exhaustive", "sampled"):
            raise ValueError(f"unknown plan mode {self.mode!r}")
        if self.wmax < 0:
            raise ValueError("wmax must be non-negative")


@dataclass
class VerificationReport:
    target: str
    mode: str
    seed: int | None
    total: int
    k: int
    mismatches: list[dict] = field(default_factory=list)
    wall_time: float = 0.0

    @property
    def passed(self) -> bool:
        return not self.mismatches

    def to_dict(self) -> dict:
        return {
            "target": self.target,
            "mode": self.mode,
            "seed": self.seed,
            "total": self.total,
            "k": self.k,
            "passed": self.passed,
            "mismatches": self.mismatches,
            "wall_time_s": round(self.wall_time, 6),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def table(self, limit: int = 20) -> str:
        lines = [
            f"target      {self.target}",
            f"mode        {self.mode}" + (f" (seed {self.seed})" if self.mode == "sampled" else ""),
            f"checked     {self.total}",
            f"mismatches  {len(self.mismatches)}",
            f"result      {'PASS' if self.passed else 'FAIL'}",
        ]
        if self.mismatches:
            lines.append("")
            lines.append(f"{'assignment':<40} {'original':>10} {'compressed+k':>13}")
            for mm in self.mismatches[:limit]:
                shown = json.dumps(mm["assignment"], sort_keys=True)
                comp = mm["compressed"] + mm["k"] if mm["compressed"] is not None else None
                lines.append(f"{shown:<40} {mm['original']!s:>10} {comp!s:>13}")
        return "\n".join(lines)


def _weight_grid(F: Sequence[int], plan: VerificationPlan) -> np.ndarray:
    if plan.mode == "exhaustive":
        count = (plan.wmax + 1) ** len(F)
        if count > plan.budget:
            raise BudgetExceeded(f"{count} instantiations exceed the budget of {plan.budget}")
        return np.array(list(product(range(plan.wmax + 1), repeat=len(F))), dtype=np.int64).reshape(
            count, len(F)
        )
    if plan.samples > plan.budget:
        raise BudgetExceeded(f"{plan.samples} samples exceed the budget of {plan.budget}")
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(plan.seed)))
    return rng.integers(0, plan.wmax + 1, size=(plan.samples, len(F)), dtype=np.int64)


def _removal_list(inst: UncertainMatchingInstance, plan: VerificationPlan) -> list[RemovalAssignment]:
    n = len(inst.L0) + len(inst.R0) + len(inst.E0)
    if plan.mode == "exhaustive":
        if 2**n > plan.budget:
            raise BudgetExceeded(f"{2**n} assignments exceed the budget of {plan.budget}")
        return list(all_assignments(inst.L0, inst.R0, inst.E0))
    if plan.samples > plan.budget:
        raise BudgetExceeded(f"{plan.samples} samples exceed the budget of {plan.budget}")
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(plan.seed)))
    L0, R0, E0 = sorted(inst.L0), sorted(inst.R0), sorted(inst.E0)
    out = []
    for bits in rng.integers(0, 2, size=(plan.samples, n)):
        bits = [bool(b) for b in bits]
        out.append(
            RemovalAssignment(
                frozenset(x for x, b in zip(L0, bits[: len(L0)]) if b),
                frozenset(x for x, b in zip(R0, bits[len(L0) : len(L0) + len(R0)]) if b),
                frozenset(x for x, b in zip(E0, bits[len(L0) + len(R0) :]) if b),
            )
        )
    return out


def _target(instance: object, bundle: object) -> str:
    pairs = {
        (UncertainMstInstance, MstBundle): "mst",
        (UncertainMatroidInstance, MatroidBundle): "matroid",
        (UncertainMatchingInstance, MatchingBundle): "matching",
        (UncertainShortestPathInstance, ShortestPathBundle): "shortest-path",
    }
    for (ti, tb), name in pairs.items():
        if isinstance(instance, ti) and isinstance(bundle, tb):
            return name
    raise InstanceError(
        f"cannot verify a {type(bundle).__name__} against a {type(instance).__name__}"
    )


def _check_pair(target: str, instance, bundle) -> None:
    if target == "matching":
        same = (instance.L0, instance.R0, instance.E0) == (bundle.L0, bundle.R0, bundle.E0)
    elif target == "shortest-path":
        same = (instance.F, instance.s, instance.t) == (bundle.F, bundle.s, bundle.t)
    else:
        same = instance.F == bundle.F
    if not same:
        raise InstanceError("bundle does not declare the same uncertain objects as the instance")


def _evaluate_weights(target: str, instance, bundle, grid: np.ndarray) -> list[tuple]:
    F = sorted(instance.F)
    if target == "mst":
        originals = MstOracle(instance.graph, F).batch(grid).tolist()
        solve = solve_mst
    elif target == "matroid":
        originals = BasisOracle(instance.matroid, instance.weights, F).batch(grid).tolist()
        solve = solve_matroid
    else:
        originals = [
            oracle_shortest_path(instance.graph, instance.s, instance.t, dict(zip(F, map(int, row))))
            for row in grid
        ]
        solve = solve_shortest_path
    rows = []
    for row, orig in zip(grid.tolist(), originals):
        wF = dict(zip(F, row))
        rows.append(({str(f): x for f, x in wF.items()}, orig, solve(bundle, wF)))
    return rows


def _evaluate_removals(instance, bundle, removals: Sequence[RemovalAssignment]) -> list[tuple]:
    rows = []
    for a in removals:
        g = instance.graph.remove_vertices(a.L | a.R).remove_edges(a.unavailable)
        shown = {"L": sorted(a.L), "R": sorted(a.R), "unavailable": sorted(a.unavailable)}
        rows.append((shown, oracle_max_matching(g), solve_matching(bundle, a)))
    return rows


def _evaluate(target: str, instance, bundle, work) -> list[tuple]:
    if target == "matching":
        return _evaluate_removals(instance, bundle, work)
    return _evaluate_weights(target, instance, bundle, work)


def verify(instance, bundle, plan: VerificationPlan = VerificationPlan(), jobs: int = 1) -> VerificationReport:
    """Compare the oracle optimum of the instantiated original against the
    bundle's answer for every instantiation the plan asks for."""
    started = time.perf_counter()
    target = _target(instance, bundle)
    _check_pair(target, instance, bundle)
    if target == "matching":
        work = _removal_list(instance, plan)
    else:
        work = _weight_grid(sorted(instance.F), plan)

    if jobs > 1 and len(work) > 1:
        size = -(-len(work) // jobs)
        chunks = [work[i : i + size] for i in range(0, len(work), size)]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = pool.map(_evaluate, [target] * len(chunks), [instance] * len(chunks),
                             [bundle] * len(chunks), chunks)
            rows = [r for part in parts for r in part]
    else:
        rows = _evaluate(target, instance, bundle, work)

    mismatches = [
        {
            "assignment": shown,
            "original": orig,
            "compressed": None if got is None else got - bundle.k,
            "k": bundle.k,
        }
        for shown, orig, got in rows
        if orig != got
    ]
    return VerificationReport(
        target,
        plan.mode,
        plan.seed if plan.mode == "sampled" else None,
        len(rows),
        bundle.k,
        mismatches,
        time.perf_counter() - started,
    )
