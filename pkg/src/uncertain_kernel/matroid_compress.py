"""Minimum-weight matroid basis with unknown element weights.

The compressed matroid keeps every uncertain element and at most ``|F|``
certain ones; the minimum basis weight of the original equals the one of
the compressed matroid plus ``k`` for every weighting of ``F``.
"""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass, field

from .errors import InstanceError, InvariantViolation
from .graph import check_weight, checked_add
from .matroid import Matroid, contract, delete, greedy_min_basis, restrict


@dataclass(frozen=True)
class UncertainMatroidInstance:
    matroid: Matroid
    F: frozenset[int]
    weights: Mapping[int, int]

    def __post_init__(self) -> None:
        object.__setattr__(self, "F", frozenset(self.F))
        object.__setattr__(self, "weights", dict(sorted(self.weights.items())))
        ground = self.matroid.ground
        if not self.F <= ground:
            raise InstanceError(f"uncertain elements not in ground set: {sorted(self.F - ground)}")
        if set(self.weights) != ground - self.F:
            raise InstanceError("weights must be given exactly for the certain elements")
        for w in self.weights.values():
            check_weight(w)


@dataclass(frozen=True)
class MatroidBundle:
    matroid: Matroid
    F: frozenset[int]
    weights: dict[int, int]
    k: int
    trace: dict | None = field(default=None, compare=False)


def compress_matroid(inst: UncertainMatroidInstance, trace: bool = False) -> MatroidBundle:
    m, F, w = inst.matroid, inst.F, inst.weights

    basis, _ = greedy_min_basis(delete(m, F), w)
    m1 = restrict(m, basis | F)
    w0 = {e: w.get(e, 0) for e in m1.ground}
    b0, _ = greedy_min_basis(m1, w0)
    fixed = b0 - F
    m2 = contract(m1, fixed)
    k = 0
    for e in sorted(fixed):
        k = checked_add(k, w[e])

    ground = m2.ground
    if not F <= ground:
        raise InvariantViolation("an uncertain element was lost")
    if len(ground - F) > len(F) or len(ground) > 2 * len(F):
        raise InvariantViolation(f"compressed ground set too large: {len(ground)} for |F| = {len(F)}")
    return MatroidBundle(
        m2,
        F,
        {e: w[e] for e in sorted(ground - F)},
        k,
        {"B": sorted(basis), "restricted_ground": sorted(m1.ground), "B0": sorted(b0)}
        if trace
        else None,
    )


def solve_matroid(bundle: MatroidBundle, wF: Mapping[int, int]) -> int:
    """Minimum basis weight of the original matroid under ``wF``."""
    missing = bundle.F - set(wF)
    if missing:
        raise InstanceError(f"missing weights for uncertain elements {sorted(missing)}")
    extra = set(wF) - bundle.F
    if extra:
        raise InstanceError(f"weights given for undeclared elements {sorted(extra)}")
    weights = dict(bundle.weights)
    weights.update(wF)
    _, total = greedy_min_basis(bundle.matroid, weights)
    return checked_add(total, bundle.k)
