import itertools
import random

import pytest

from sourceloc import (INF, Graph, InstanceError, SSLInstance, exact_sna,
                       node_split_reduction, rooted_sna_to_ssl,
                       set_cover_gadget, set_cover_optimum, sna_feasible,
                       solve_sna_greedy, ssl_feasible, ssl_to_rooted_sna)
from sourceloc.core import CandidateEdge, Demand, SNAInstance
from sourceloc.flow import connectivity
from sourceloc.generators import random_graph, random_ssl


def subsets(n):
    for size in range(n + 1):
        yield from itertools.combinations(range(n), size)


def test_empty_demand_reduction():
    ssl = SSLInstance(graph=Graph(2, ((0, 1),), False), cost=(1, 2), demand=(0, 0),
                      supply=(1, 1), capacity=(1, 1))
    sna, rmap = ssl_to_rooted_sna(ssl)
    assert sna.demands == () and sna.candidates == ()
    assert sna_feasible(sna, [])[0] and ssl_feasible(ssl, [])[0]


def test_single_node_reduction():
    ssl = SSLInstance(graph=Graph(1, (), False), cost=(7,), demand=(1,),
                      supply=(1,), capacity=(1,))
    sna, rmap = ssl_to_rooted_sna(ssl)
    assert len(sna.candidates) == 1
    assert sna.demands == (Demand(1, 0, 1),)
    assert sna.node_costs == (7, 0)
    picks = rmap.picks_for_sources({0})
    assert sna.pick_cost(picks) == 7
    assert sna_feasible(sna, picks)[0]
    back, _ = rooted_sna_to_ssl(sna)
    assert back == ssl


def test_roundtrip_identity_on_finite_supplies():
    rng = random.Random(2)
    for _ in range(10):
        n = rng.randint(2, 5)
        k = rng.randint(1, 3)
        g = random_graph(rng, n, rng.randint(0, 6), rng.random() < 0.5)
        demand = [rng.randint(0, k) for _ in range(n)]
        demand[rng.randrange(n)] = k
        q = [rng.randint(1, k) for _ in range(n)]
        p = [rng.randint(q[v], k) for v in range(n)]
        ssl = SSLInstance(graph=g, cost=tuple(rng.randint(0, 9) for _ in range(n)),
                          demand=tuple(demand), supply=tuple(p), capacity=tuple(q))
        sna, _ = ssl_to_rooted_sna(ssl)
        back, _ = rooted_sna_to_ssl(sna)
        assert back == ssl


def test_feasibility_tables_and_costs_agree():
    rng = random.Random(5)
    for _ in range(8):
        n = rng.randint(2, 5)
        ssl = random_ssl(rng, n, rng.randint(1, 8), rng.randint(1, 2),
                         mode="general", directed=rng.random() < 0.5)
        sna, rmap = ssl_to_rooted_sna(ssl)
        for sub in subsets(n):
            picks = rmap.picks_for_sources(sub)
            left = ssl_feasible(ssl, sub)[0]
            right = sna_feasible(sna, picks)[0]
            assert left == right
            assert sna.pick_cost(picks) == sum(ssl.cost[v] for v in sub)


def test_rooted_sna_to_ssl_diagnostics():
    g = Graph(2, ((0, 1),), True)
    base = dict(graph=g, capacity=(1, INF), cost_mode="node", node_costs=(1, 0),
                candidates=(CandidateEdge(1, 0, 0),), demands=(Demand(1, 0, 1),))
    with pytest.raises(InstanceError, match="isolated"):
        rooted_sna_to_ssl(SNAInstance(**base))
    g2 = Graph(2, (), True)
    bad_cost = dict(base, graph=g2, node_costs=(1, 3))
    with pytest.raises(InstanceError, match="cost zero"):
        rooted_sna_to_ssl(SNAInstance(**bad_cost))
    ok = dict(base, graph=g2)
    rooted_sna_to_ssl(SNAInstance(**ok))
    with pytest.raises(InstanceError, match="node costs"):
        rooted_sna_to_ssl(SNAInstance(graph=g2, capacity=(1, INF), cost_mode="edge",
                                      candidates=(CandidateEdge(1, 0, 1),),
                                      demands=(Demand(1, 0, 1),)))


# ---------------------------------------------------------------------------
# Node split


def test_node_split_examples():
    g = Graph(2, ((0, 1),), True)
    split, m = node_split_reduction(g, [1, 1], [0, 1])
    assert split.graph.n == 4
    assert set(split.graph.edges) == {(0, 1), (2, 3), (1, 2)}
    assert split.cost[m.exit(0)] == 1 and split.cost[m.entry(0)] == INF
    assert split.demand[m.exit(1)] == 1 and split.demand[m.entry(1)] == 0


def test_node_split_rejects_undirected():
    with pytest.raises(InstanceError):
        node_split_reduction(Graph(2, ((0, 1),), False), [1, 1], [0, 0])


def test_node_split_feasibility_tables_unit_demands():
    rng = random.Random(9)
    for _ in range(8):
        n = rng.randint(2, 4)
        g = random_graph(rng, n, rng.randint(1, 6), True)
        cost = [rng.randint(1, 5) for _ in range(n)]
        demand = [rng.randint(0, 1) for _ in range(n)]
        split, m = node_split_reduction(g, cost, demand)
        for sub in subsets(n):
            original = all(
                connectivity("kappa_directed", g, set(sub), v) >= demand[v]
                for v in range(n))
            image = ssl_feasible(split, m.push_sources(sub))[0]
            assert original == image


def test_node_split_demand_zero_everything_feasible():
    g = Graph(3, ((0, 1), (1, 2)), True)
    split, m = node_split_reduction(g, [1, 1, 1], [0, 0, 0])
    assert ssl_feasible(split, m.push_sources(set()))[0]


# ---------------------------------------------------------------------------
# Set-cover gadget


def test_gadget_single_set_single_element():
    inst, info = set_cover_gadget([[0]], 1, copies=4)
    assert info.copies == 4
    assert len(inst.demands) == 5  # every element copy
    exact = exact_sna(inst, cap=7)
    assert exact.optimum == 1
    # the winning pick is the set edge
    assert exact.solution == (0,)


def test_gadget_uncoverable_element_reported():
    inst, info = set_cover_gadget([[0]], 2, copies=1)
    assert info.uncoverable == (1,)
    assert info.cover_optimum is None
    # the gadget itself stays feasible through the direct element edges
    assert sna_feasible(inst, range(len(inst.candidates)))[0]


def test_gadget_default_copy_count():
    _, info = set_cover_gadget([[0, 1], [1, 2]], 3, copies=None)
    assert info.copies == (2 + 3) ** 2


def test_gadget_optimum_matches_cover_optimum():
    rng = random.Random(13)
    for _ in range(6):
        n_sets = rng.randint(2, 3)
        n_elems = rng.randint(2, 3)
        sets = [sorted({rng.randrange(n_elems) for _ in range(rng.randint(1, n_elems))})
                for _ in range(n_sets)]
        for e in range(n_elems):
            if not any(e in s for s in sets):
                sets[rng.randrange(n_sets)].append(e)
        sets = [sorted(s) for s in sets]
        inst, info = set_cover_gadget(sets, n_elems, copies=2)
        assert info.cover_optimum == set_cover_optimum(sets, n_elems)
        exact = exact_sna(inst, cap=16)
        assert exact.optimum == info.cover_optimum
        greedy = solve_sna_greedy(inst)
        assert greedy.feasible
        assert greedy.cost <= greedy.bound_value * exact.optimum


def test_set_cover_optimum_known_instance():
    # three sets, min cover 2
    assert set_cover_optimum([[0, 1], [1, 2], [2]], 3) == 2
    assert set_cover_optimum([[0]], 2) is None
