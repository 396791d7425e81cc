"""Structural checks shared by the unit and acceptance tests.

Each check enumerates every spanning tree or basis of a small instance and
tests the containment property of one reduction step for a grid of
weightings of the uncertain part.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterable, Iterator

from uncertain_kernel.matroid import restrict
from uncertain_kernel.matroid_compress import UncertainMatroidInstance
from uncertain_kernel.mst import UncertainMstInstance
from uncertain_kernel.oracles import all_bases, spanning_trees


def weightings(F: Iterable[int], wmax: int) -> Iterator[dict[int, int]]:
    F = sorted(F)
    for values in itertools.product(range(wmax + 1), repeat=len(F)):
        yield dict(zip(F, values))


def _optimal(sets: list[frozenset[int]], w: dict[int, int]) -> list[frozenset[int]]:
    cost = [sum(w[e] for e in s) for s in sets]
    best = min(cost)
    return [s for s, c in zip(sets, cost) if c == best]


def mst_containment_failures(inst: UncertainMstInstance, trace: dict, wmax: int = 3) -> tuple[int, int]:
    """Count weightings violating the subsetting and the forcing property.

    Subsetting: some minimum spanning tree of G lies inside MSF ∪ F.
    Forcing: some minimum spanning tree of G1 contains MST_w0 minus F.
    """
    g = inst.graph
    msf_f = frozenset(trace["msf"]) | inst.F
    forced = frozenset(trace["mst_w0"]) - inst.F
    trees = [frozenset(t) for t in spanning_trees(g)]
    trees1 = [frozenset(t) for t in spanning_trees(g.restrict_edges(trace["g1_edges"]))]
    known = g.weight_map()
    bad_subset = bad_forcing = 0
    for wF in weightings(inst.F, wmax):
        w = {**known, **wF}
        if not any(t <= msf_f for t in _optimal(trees, w)):
            bad_subset += 1
        if not any(forced <= t for t in _optimal(trees1, w)):
            bad_forcing += 1
    return bad_subset, bad_forcing


def matroid_containment_failures(inst: UncertainMatroidInstance, trace: dict, wmax: int = 3) -> tuple[int, int]:
    """Count weightings violating the two basis containment properties.

    Some minimum basis of M lies inside B ∪ F, and some minimum basis of
    M' = M[B ∪ F] contains B0 minus F.
    """
    m = inst.matroid
    B = frozenset(trace["B"])
    fixed = frozenset(trace["B0"]) - inst.F
    bases = all_bases(m)
    bases1 = all_bases(restrict(m, frozenset(trace["restricted_ground"])))
    bad_inside = bad_contains = 0
    for wF in weightings(inst.F, wmax):
        w = {**inst.weights, **wF}
        if not any(bs <= B | inst.F for bs in _optimal(bases, w)):
            bad_inside += 1
        if not any(fixed <= bs for bs in _optimal(bases1, w)):
            bad_contains += 1
    return bad_inside, bad_contains


# criterion number -> (passed, summary line); filled by test_acceptance.py
ACCEPTANCE: dict[int, tuple[bool, str]] = {}
