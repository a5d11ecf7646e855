import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sourceloc import (Biset, BisetFamily, Graph, InstanceError, all_bisets,
                       biset_intersect, biset_minus, biset_union, covers,
                       d_dependent, delta, delta_count, is_d_uncrossable,
                       minimal_members, t_dependent)
from sourceloc.core import SNAInstance, CandidateEdge, Demand


def B(inner, outer):
    return Biset(frozenset(inner), frozenset(outer))


def test_graph_rejects_self_loops_and_bad_indices():
    with pytest.raises(InstanceError):
        Graph(3, ((0, 0),), True)
    with pytest.raises(InstanceError):
        Graph(2, ((0, 5),), False)


def test_parallel_edges_preserved():
    g = Graph(3, ((0, 1), (1, 0), (0, 1)), False)
    assert g.edge_multiplicity() == {(0, 1): 3}
    d = Graph(3, ((0, 1), (1, 0), (0, 1)), True)
    assert d.edge_multiplicity() == {(0, 1): 2, (1, 0): 1}


def test_biset_algebra_examples():
    assert biset_intersect(B({1}, {1, 2}), B({2}, {2, 3})) == B(set(), {2})
    x = B({1, 2}, {1, 2, 3})
    assert biset_intersect(x, x) == x
    assert biset_intersect(B({1, 2}, {1, 2, 3}), B({2, 3}, {2, 3, 4})) == B({2}, {2, 3})

    assert biset_union(B({1}, {1, 2}), B({2}, {2, 3})) == B({1, 2}, {1, 2, 3})
    assert biset_union(x, x) == x
    assert biset_union(B(set(), set()), x) == x

    assert biset_minus(B({1, 2}, {1, 2, 3}), B({3}, {3, 4})) == B({1, 2}, {1, 2})
    assert biset_minus(x, B(set(), set())) == x
    assert biset_minus(B({1}, {1, 2}), B({2}, {2})) == B({1}, {1})


def test_covers_examples():
    b = B({1}, {1, 2})
    assert covers((1, 3), b)
    assert not covers((1, 2), b)  # head on the boundary
    assert not covers((2, 3), b)


def test_covers_directionality():
    b = B({1}, {1, 2})
    assert not covers((3, 1), b, directed=True)
    assert covers((3, 1), b, directed=False)


def test_delta_examples():
    b = B({1}, {1, 2})
    assert delta([(1, 3), (1, 3), (2, 3)], b) == ((1, 3), (1, 3))
    assert delta([], b) == ()
    all_pairs = [(u, v) for u in (1, 2, 3) for v in (1, 2, 3) if u != v]
    assert delta(all_pairs, B({1}, {1}), directed=True) == ((1, 2), (1, 3))


def test_d_dependent_examples():
    a, b = B({1}, {1, 2}), B({3}, {3, 4})
    # only demand edge covers a; b is uncovered
    assert not d_dependent(a, b, [(1, 4)])
    # a biset is dependent with itself through any covering edge
    assert d_dependent(a, a, [(1, 3)])
    # boundary hits on both sides kill every witness pair
    a2, b2 = B({1}, {1, 2}), B({4}, {3, 4})
    assert not d_dependent(a2, b2, [(1, 3), (4, 2)])


@given(st.data())
def test_d_dependent_symmetric(data):
    n = 4
    bisets = data.draw(st.lists(_biset_strategy(n), min_size=2, max_size=2))
    edges = data.draw(st.lists(_edge_strategy(n), max_size=5))
    a, b = bisets
    assert d_dependent(a, b, edges) == d_dependent(b, a, edges)


def _biset_strategy(n):
    return st.builds(
        lambda inner, extra: Biset(frozenset(inner), frozenset(inner) | frozenset(extra)),
        st.sets(st.integers(0, n - 1), max_size=n),
        st.sets(st.integers(0, n - 1), max_size=n),
    )


def _edge_strategy(n):
    return st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)).filter(lambda e: e[0] != e[1])


@given(_biset_strategy(4), _biset_strategy(4))
def test_minus_keeps_nesting(a, b):
    out = biset_minus(a, b)
    assert out.inner <= out.outer


@given(_biset_strategy(4), st.lists(_edge_strategy(4), max_size=6))
def test_covers_false_on_boundary_endpoints(b, edges):
    for e in edges:
        if set(e) & b.boundary:
            assert not covers(e, b)


def test_minimal_members_chain_and_antichain():
    chain = BisetFamily(4, frozenset({B({1}, {1}), B({1}, {1, 2}), B({1, 2}, {1, 2, 3})}))
    assert minimal_members(chain).members == frozenset({B({1}, {1})})
    anti = BisetFamily(4, frozenset({B({1}, {1}), B({2}, {2})}))
    assert minimal_members(anti) == anti


def test_minimal_members_mixed_family():
    family = BisetFamily(4, frozenset({
        B({0}, {0, 1}), B({0}, {0}), B({2}, {2, 3}), B({0, 2}, {0, 1, 2, 3}), B({3}, {3}),
    }))
    got = minimal_members(family).members
    assert got == frozenset({B({0}, {0}), B({2}, {2, 3}), B({3}, {3})})


@given(st.sets(_biset_strategy(4), max_size=8))
def test_minimal_members_idempotent_antichain(members):
    family = BisetFamily(4, frozenset(members))
    mini = minimal_members(family)
    assert minimal_members(mini) == mini
    for a, b in itertools.combinations(mini.members, 2):
        assert not a.contains(b) and not b.contains(a)


def test_biset_cut_count_submodular_exhaustive():
    rng = random.Random(5)
    for _ in range(10):
        n = 4
        edges = [(rng.randrange(n), rng.randrange(n)) for _ in range(6)]
        edges = [(u, v) for u, v in edges if u != v]
        bisets = list(all_bisets(n))
        counts = {b: delta_count(edges, b) for b in bisets}
        for x, y in itertools.combinations(bisets, 2):
            lhs = counts[biset_intersect(x, y)] + counts[biset_union(x, y)]
            assert lhs <= counts[x] + counts[y]


def test_uncrossable_checks():
    # single covered biset: no dependent pair to test
    fam = BisetFamily(3, frozenset({B({0}, {0})}))
    assert is_d_uncrossable(fam, [(0, 2)])
    # uncovered member fails immediately
    assert not is_d_uncrossable(fam, [(1, 2)])
    # covered laminar chain: intersections and unions stay inside
    lam = BisetFamily(4, frozenset({B({0}, {0}), B({0, 1}, {0, 1}), B({0, 1, 2}, {0, 1, 2})}))
    assert is_d_uncrossable(lam, [(0, 3), (1, 3)])


def test_t_dependent():
    a, b = B({0}, {0, 1}), B({1, 2}, {1, 2})
    assert t_dependent(a, b, {0, 2})
    assert not t_dependent(a, b, {1})  # inner hits land on boundaries only


def test_all_bisets_count_and_cap():
    assert len(list(all_bisets(3))) == 27
    with pytest.raises(InstanceError):
        list(all_bisets(20))


def test_sna_instance_validations():
    g = Graph(3, ((0, 1),), True)
    with pytest.raises(InstanceError):
        SNAInstance(graph=g, capacity=(1, 1, 1),
                    candidates=(CandidateEdge(0, 1, 1), CandidateEdge(0, 1, 1)),
                    demands=(Demand(0, 1, 1),), cost_mode="edge")
    inst = SNAInstance(graph=g, capacity=(1, 1, 1),
                       candidates=(CandidateEdge(0, 1, 1), CandidateEdge(0, 2, 2)),
                       demands=(Demand(0, 1, 1), Demand(0, 2, 1)), cost_mode="edge")
    assert inst.star_center == 0
    assert inst.demand_center == 0
    assert inst.p_max == 1
    assert inst.total_requirement == 2


def test_node_cost_convention_counts_endpoints_once():
    g = Graph(3, (), False)
    inst = SNAInstance(graph=g, capacity=(1, 1, 1),
                       candidates=(CandidateEdge(0, 1), CandidateEdge(0, 2)),
                       demands=(Demand(0, 1, 1), Demand(0, 2, 1)),
                       cost_mode="node", node_costs=(5, 3, 4))
    assert inst.pick_cost([0, 1]) == 12
    assert inst.pick_cost([0]) == 8
    assert inst.pick_cost([]) == 0
