from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from uncertain_kernel.errors import InstanceError, ThresholdExceeded
from uncertain_kernel.generate import gen_matching
from uncertain_kernel.graph import BipartiteGraph, DiGraph, matching_size, max_matching, orient
from uncertain_kernel.matching import (
    RemovalAssignment,
    UncertainMatchingInstance,
    all_assignments,
    audit_covering,
    build_Z,
    compress_matching,
    covering_set,
    solve_matching,
    solve_matching_subdivided,
    subdivide_uncertain,
)
from uncertain_kernel.oracles import oracle_max_matching

L1, L2, R1, R2 = 1, 2, 3, 4


def four_vertex() -> UncertainMatchingInstance:
    g = BipartiteGraph(frozenset({L1, L2}), frozenset({R1, R2}), {1: (L1, R1), 2: (L1, R2), 3: (L2, R1)})
    return UncertainMatchingInstance(g, frozenset({L2}), frozenset({R2}))


def path_instance() -> UncertainMatchingInstance:
    l1, l2, l3, r1, r2, r3 = 1, 2, 3, 11, 12, 13
    g = BipartiteGraph(
        frozenset({l1, l2, l3}),
        frozenset({r1, r2, r3}),
        {1: (l1, r1), 2: (l2, r1), 3: (l2, r2), 4: (l3, r2), 5: (l3, r3)},
    )
    return UncertainMatchingInstance(g, frozenset({l1}))


def original_value(inst: UncertainMatchingInstance, a: RemovalAssignment) -> int:
    return oracle_max_matching(inst.graph.remove_vertices(a.L | a.R).remove_edges(a.unavailable))


# --------------------------------------------------------------------------
# subdivision


def test_subdivide_without_uncertain_edges_is_identity():
    inst = four_vertex()
    sub = subdivide_uncertain(inst)
    assert sub.graph == inst.graph and sub.gadgets == {}


def test_subdivide_single_edge():
    g = BipartiteGraph(frozenset({L1}), frozenset({R1}), {1: (L1, R1)})
    sub = subdivide_uncertain(UncertainMatchingInstance(g, E0=frozenset({1})))
    gd = sub.gadgets[1]
    assert len(sub.graph.vertices) == 4 and len(sub.graph.edges) == 3
    assert gd.mid_right in sub.graph.right and gd.mid_left in sub.graph.left
    assert sub.added_left == {gd.mid_left} and sub.added_right == {gd.mid_right}


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 5), st.integers(1, 5), st.integers(0, 4), st.integers(0, 10**6))
def test_subdivision_adds_one_per_edge(left, right, e0, seed):
    try:
        inst = gen_matching(left, right, 0, 0, e0, seed, density=0.5)
    except ValueError:
        return
    sub = subdivide_uncertain(inst)
    assert matching_size(sub.graph) == matching_size(inst.graph) + len(inst.E0)


# --------------------------------------------------------------------------
# covering set and Z


def _setup(inst: UncertainMatchingInstance):
    g = inst.graph
    M = max_matching(g.remove_vertices(inst.L0 | inst.R0))
    covered = {x for e in M for x in g.edges[e]}
    F_L = g.left - inst.L0 - covered
    F_R = g.right - inst.R0 - covered
    return g, M, orient(g, M), F_L, F_R


def test_covering_set_without_uncertainty_is_empty():
    g, M, H, F_L, F_R = _setup(UncertainMatchingInstance(path_instance().graph))
    assert covering_set(H, (), (), F_L, F_R) == frozenset()
    empty = BipartiteGraph(frozenset({1}), frozenset({2}), {})
    assert covering_set(orient(empty, ()), (), (), {1}, {2}) == frozenset()


def test_covering_set_four_vertex():
    inst = four_vertex()
    g, M, H, F_L, F_R = _setup(inst)
    assert M == {1} and F_L == F_R == frozenset()
    # every pattern is separated by one vertex of the path l2 -> r1 -> l1 -> r2;
    # the cut closest to the sources is l2 itself whenever it is present
    assert covering_set(H, inst.L0, inst.R0, F_L, F_R) == {L2}


def test_covering_set_refuses_above_threshold():
    with pytest.raises(ThresholdExceeded):
        covering_set(DiGraph(frozenset(range(4))), {0, 1}, {2, 3}, (), (), threshold=3)


def test_build_Z_empty():
    g, M, H, F_L, F_R = _setup(UncertainMatchingInstance(path_instance().graph))
    assert build_Z(g, H, M, (), (), (), F_L, F_R).Z == frozenset()


def test_build_Z_truncates_attached_vertices():
    l0, a1, a2, a3, r = 0, 1, 2, 3, 10
    g = BipartiteGraph(frozenset({l0, a1, a2, a3}), frozenset({r}), {1: (a1, r), 2: (a2, r), 3: (a3, r), 4: (l0, r)})
    M = frozenset({1})
    H = orient(g, M)
    zs = build_Z(g, H, M, {r}, {l0}, (), {a2, a3}, ())
    assert zs.X_prime == {l0, a1, r}
    assert zs.W[r] == {a2}
    assert zs.Z == {l0, a1, a2, r}


# --------------------------------------------------------------------------
# compression


def test_no_uncertainty_folds_into_k():
    inst = UncertainMatchingInstance(path_instance().graph)
    bundle = compress_matching(inst)
    assert bundle.graph.vertices == frozenset() and bundle.k == 3
    assert solve_matching(bundle) == 3


def test_four_vertex_bundle():
    inst = four_vertex()
    bundle = compress_matching(inst, trace=True)
    assert bundle.trace["X"] == [L2]
    assert bundle.trace["Z"] == [L2, R2]
    assert bundle.graph.left == {L2} and bundle.graph.right == {R2}
    assert list(bundle.graph.edges.values()) == [(L2, R2)]
    assert bundle.k == 1
    expected = {(): 2, (L2,): 1, (R2,): 1, (L2, R2): 1}
    for a in all_assignments(inst.L0, inst.R0, ()):
        assert solve_matching(bundle, a) == expected[tuple(sorted(a.L | a.R))] == original_value(inst, a)


def test_path_bundle():
    inst = path_instance()
    bundle = compress_matching(inst)
    assert solve_matching(bundle) == 3
    assert solve_matching(bundle, RemovalAssignment(L=frozenset({1}))) == 2


def test_solve_rejects_undeclared_objects():
    bundle = compress_matching(four_vertex())
    with pytest.raises(InstanceError):
        solve_matching(bundle, RemovalAssignment(L=frozenset({L1})))
    with pytest.raises(InstanceError):
        solve_matching(bundle, RemovalAssignment(unavailable=frozenset({1})))


def test_threshold_counts_uncertain_edges():
    inst = gen_matching(6, 6, 2, 2, 3, seed=1, density=0.6)
    with pytest.raises(ThresholdExceeded):
        compress_matching(inst, threshold=6)
    compress_matching(inst, threshold=7)


@settings(max_examples=80, deadline=None)
@given(
    st.integers(1, 7),
    st.integers(1, 7),
    st.integers(0, 3),
    st.integers(0, 3),
    st.integers(0, 2),
    st.integers(0, 10**6),
)
def test_equivalence_and_structure(left, right, l0, r0, e0, seed):
    try:
        inst = gen_matching(left, right, min(l0, left), min(r0, right), e0, seed, density=0.4)
    except ValueError:
        return
    bundle = compress_matching(inst, trace=True)
    Z = set(bundle.trace["Z"])
    g_sub = subdivide_uncertain(inst).graph
    for eid in bundle.trace["M"]:
        assert len(set(g_sub.edges[eid]) & Z) != 1
    assert audit_covering(inst, bundle) == []
    for a in all_assignments(inst.L0, inst.R0, inst.E0):
        want = original_value(inst, a)
        assert solve_matching(bundle, a) == want
        assert solve_matching_subdivided(bundle, a) == want
