"""Matroids given by an independence oracle, in four concrete families plus
a minor wrapper, with greedy bases, fundamental circuits and minors.

Elements are non-negative integer ids. Deletion and contraction stay inside
the family when the family is closed under the operation (graphic, uniform
and linear matroids); otherwise the result is a :class:`MinorMatroid` that
forwards every query to the original oracle.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field

from . import gfp
from .errors import MatroidError
from .graph import (
    BipartiteGraph,
    UnionFind,
    WeightedMultigraph,
    checked_add,
    contract_edge,
    matching_size,
)


class Matroid(ABC):
    kind: str = "abstract"

    @property
    @abstractmethod
    def ground(self) -> frozenset[int]: ...

    @abstractmethod
    def _independent(self, items: frozenset[int]) -> bool: ...

    def is_independent(self, items: Iterable[int]) -> bool:
        items = frozenset(items)
        extra = items - self.ground
        if extra:
            raise MatroidError(f"elements outside the ground set: {sorted(extra)}")
        return self._independent(items)

    def _delete(self, drop: frozenset[int]) -> Matroid:
        return MinorMatroid(self, drop, frozenset())

    def _contract(self, items: frozenset[int]) -> Matroid:
        return MinorMatroid(self, frozenset(), items)

    def rank(self) -> int:
        basis = set()
        for x in sorted(self.ground):
            if self._independent(frozenset(basis | {x})):
                basis.add(x)
        return len(basis)


@dataclass(frozen=True)
class UniformMatroid(Matroid):
    elements: frozenset[int]
    r: int
    kind = "uniform"

    def __post_init__(self) -> None:
        object.__setattr__(self, "elements", frozenset(self.elements))
        if not 0 <= self.r <= len(self.elements):
            raise MatroidError(f"rank {self.r} invalid for {len(self.elements)} elements")

    @property
    def ground(self) -> frozenset[int]:
        return self.elements

    def _independent(self, items: frozenset[int]) -> bool:
        return len(items) <= self.r

    def _delete(self, drop: frozenset[int]) -> Matroid:
        rest = self.elements - drop
        return UniformMatroid(rest, min(self.r, len(rest)))

    def _contract(self, items: frozenset[int]) -> Matroid:
        return UniformMatroid(self.elements - items, self.r - len(items))


@dataclass(frozen=True)
class GraphicMatroid(Matroid):
    """Cycle matroid of a multigraph. ``loops`` are elements whose edge was
    contracted into a self-loop; they are dependent on their own."""

    graph: WeightedMultigraph
    loops: frozenset[int] = field(default_factory=frozenset)
    kind = "graphic"

    def __post_init__(self) -> None:
        object.__setattr__(self, "loops", frozenset(self.loops))
        if self.loops & set(self.graph.edges):
            raise MatroidError("loop ids collide with edge ids")

    @property
    def ground(self) -> frozenset[int]:
        return frozenset(self.graph.edges) | self.loops

    def _independent(self, items: frozenset[int]) -> bool:
        if items & self.loops:
            return False
        uf = UnionFind()
        for eid in items:
            u, v = self.graph.endpoints(eid)
            for x in (u, v):
                uf.parent.setdefault(x, x)
            if not uf.union(u, v):
                return False
        return True

    def _delete(self, drop: frozenset[int]) -> Matroid:
        return GraphicMatroid(self.graph.remove_edges(drop), self.loops - drop)

    def _contract(self, items: frozenset[int]) -> Matroid:
        g = self.graph
        loops = set(self.loops)
        for eid in sorted(items):
            after = contract_edge(g, eid)
            loops |= set(g.edges) - set(after.edges) - {eid}
            g = after
        return GraphicMatroid(g, frozenset(loops))


@dataclass(frozen=True)
class LinearMatroid(Matroid):
    """Column matroid of a matrix over GF(p); ``columns[j]`` names column j."""

    p: int
    rows: tuple[tuple[int, ...], ...]
    columns: tuple[int, ...]
    kind = "linear"

    def __post_init__(self) -> None:
        rows = tuple(tuple(x % self.p for x in row) for row in self.rows)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "columns", tuple(self.columns))
        if len(set(self.columns)) != len(self.columns):
            raise MatroidError("duplicate column ids")
        for row in rows:
            if len(row) != len(self.columns):
                raise MatroidError("row length does not match the column count")

    @property
    def ground(self) -> frozenset[int]:
        return frozenset(self.columns)

    def _col_index(self, items: Iterable[int]) -> list[int]:
        pos = {c: j for j, c in enumerate(self.columns)}
        return sorted(pos[x] for x in items)

    def _independent(self, items: frozenset[int]) -> bool:
        return gfp.columns_rank(self.rows, self._col_index(items), self.p) == len(items)

    def _select(self, keep: Sequence[int], rows: Sequence[Sequence[int]]) -> LinearMatroid:
        idx = self._col_index(keep)
        new_rows = tuple(tuple(row[j] for j in idx) for row in rows)
        new_rows = tuple(row for row in new_rows if any(row))
        return LinearMatroid(self.p, new_rows, tuple(self.columns[j] for j in idx))

    def _delete(self, drop: frozenset[int]) -> Matroid:
        return self._select([c for c in self.columns if c not in drop], self.rows)

    def _contract(self, items: frozenset[int]) -> Matroid:
        reduced = gfp.pivot_out(self.rows, self._col_index(items), self.p)
        return self._select([c for c in self.columns if c not in items], reduced)


@dataclass(frozen=True)
class TransversalMatroid(Matroid):
    """Right-hand vertices of a bipartite graph; a set is independent iff
    it can be matched into the left side."""

    graph: BipartiteGraph
    kind = "transversal"

    @property
    def ground(self) -> frozenset[int]:
        return self.graph.right

    def _independent(self, items: frozenset[int]) -> bool:
        sub = self.graph.remove_vertices(self.graph.right - items)
        return matching_size(sub) == len(items)

    def _delete(self, drop: frozenset[int]) -> Matroid:
        return TransversalMatroid(self.graph.remove_vertices(drop))


@dataclass(frozen=True)
class MinorMatroid(Matroid):
    """``base`` with ``deleted`` removed and ``contracted`` contracted.

    Nested minors are flattened so each query costs one base-oracle call.
    """

    base: Matroid
    deleted: frozenset[int] = field(default_factory=frozenset)
    contracted: frozenset[int] = field(default_factory=frozenset)
    kind = "minor"

    def __post_init__(self) -> None:
        deleted, contracted, base = frozenset(self.deleted), frozenset(self.contracted), self.base
        if isinstance(base, MinorMatroid):
            deleted |= base.deleted
            contracted |= base.contracted
            base = base.base
        if deleted & contracted:
            raise MatroidError("an element cannot be both deleted and contracted")
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "deleted", deleted)
        object.__setattr__(self, "contracted", contracted)

    @property
    def ground(self) -> frozenset[int]:
        return self.base.ground - self.deleted - self.contracted

    def _independent(self, items: frozenset[int]) -> bool:
        return self.base.is_independent(items | self.contracted)

    def _delete(self, drop: frozenset[int]) -> Matroid:
        return MinorMatroid(self.base, self.deleted | drop, self.contracted)

    def _contract(self, items: frozenset[int]) -> Matroid:
        return MinorMatroid(self.base, self.deleted, self.contracted | items)


def as_oracle(m: Matroid) -> MinorMatroid:
    """View ``m`` as a bare oracle: all minors of the result are wrappers."""
    return MinorMatroid(m)


def is_independent(m: Matroid, items: Iterable[int]) -> bool:
    return m.is_independent(items)


def delete(m: Matroid, items: Iterable[int]) -> Matroid:
    items = frozenset(items)
    if not items <= m.ground:
        raise MatroidError(f"cannot delete non-elements {sorted(items - m.ground)}")
    if not items:
        return m
    return m._delete(items)


def contract(m: Matroid, items: Iterable[int]) -> Matroid:
    items = frozenset(items)
    if not m.is_independent(items):
        raise MatroidError("only independent sets can be contracted")
    if not items:
        return m
    return m._contract(items)


def restrict(m: Matroid, keep: Iterable[int]) -> Matroid:
    """``m[keep]``, realised as deletion of the complement."""
    keep = frozenset(keep)
    if not keep <= m.ground:
        raise MatroidError(f"cannot restrict to non-elements {sorted(keep - m.ground)}")
    return delete(m, m.ground - keep)


def greedy_min_basis(m: Matroid, w: Mapping[int, int]) -> tuple[frozenset[int], int]:
    """Scan by ascending (weight, id), keeping every element that preserves
    independence."""
    missing = m.ground - set(w)
    if missing:
        raise MatroidError(f"no weight for elements {sorted(missing)}")
    basis: set[int] = set()
    total = 0
    for x in sorted(m.ground, key=lambda e: (w[e], e)):
        if m._independent(frozenset(basis | {x})):
            basis.add(x)
            total = checked_add(total, w[x])
    return frozenset(basis), total


def is_basis(m: Matroid, items: Iterable[int]) -> bool:
    items = frozenset(items)
    if not m.is_independent(items):
        return False
    return not any(m._independent(items | {x}) for x in m.ground - items)


def fundamental_circuit(m: Matroid, basis: Iterable[int], e: int) -> frozenset[int]:
    """The unique circuit inside ``basis + e``."""
    basis = frozenset(basis)
    if e not in m.ground:
        raise MatroidError(f"element {e} is not in the ground set")
    if e in basis:
        raise MatroidError(f"element {e} already belongs to the basis")
    if not is_basis(m, basis):
        raise MatroidError("the given set is not a basis")
    circuit = set(basis | {e})
    for x in sorted(basis):
        if not m._independent(frozenset(circuit - {x})):
            circuit.discard(x)
    return frozenset(circuit)


def max_to_min_transform(w: Mapping[int, int]) -> tuple[dict[int, int], int]:
    """Flip weights around their maximum so max-weight bases become
    min-weight bases."""
    c = max(w.values(), default=0)
    return {e: c - x for e, x in w.items()}, c
