import random

import pytest

import helpers
from sourceloc import (INF, Graph, InstanceError, connectivity,
                       cut_disconnects, lambda_pq, lambda_pq_closed_form,
                       lambda_q, lambda_q_pair, min_cut_certificate,
                       min_flow_cost, split_transform)
from sourceloc.generators import random_capacities, random_graph

Q_CHOICES = (1, 2, INF)


def test_split_transform_single_node():
    net = split_transform(Graph(1, (), True), [2])
    assert net.node_count == 2
    assert net.arc_count() == 1  # just the splitter


def test_split_transform_path():
    g = Graph(3, ((0, 1), (1, 2)), True)
    net = split_transform(g, [INF, 2, INF], keep={0, 2})
    # splitter for b only, plus the two edge arcs
    tags = [net.tag[i] for i in range(0, len(net.head), 2)]
    assert ("node", 1) in tags
    assert ("edge", (0, 1)) in tags and ("edge", (1, 2)) in tags
    assert net.in_of[0] == net.out_of[0]


def test_split_transform_rejects_zero_capacity():
    with pytest.raises(InstanceError):
        split_transform(Graph(2, ((0, 1),), True), [0, 1])


def test_lambda_q_simple_cases():
    g = Graph(2, ((0, 1),), False)
    assert lambda_q(g, [1, 1], {0}, 1) == 1
    assert lambda_q(g, [1, 1], {1}, 1) == 0  # a node cannot source itself
    assert lambda_q(g, [1, 1], {0, 1}, 1) == 1


def test_lambda_q_respects_transit_capacity():
    g = Graph(3, ((0, 1), (0, 1), (1, 2), (1, 2)), True)
    assert lambda_q(g, [INF, 2, INF], {0}, 2) == 2
    assert lambda_q(g, [INF, 1, INF], {0}, 2) == 1


def test_lambda_q_source_nodes_are_cuttable():
    # flow out of a chosen source passes its own capacity
    g = Graph(2, ((0, 1), (0, 1), (0, 1)), True)
    assert lambda_q(g, [1, INF], {0}, 1) == 1
    assert lambda_q(g, [3, INF], {0}, 1) == 3


def test_lambda_q_matches_brute_cut_enumeration():
    rng = random.Random(11)
    for _ in range(60):
        n = rng.randint(2, 5)
        g = random_graph(rng, n, rng.randint(1, 8), rng.random() < 0.5)
        q = random_capacities(rng, n, Q_CHOICES)
        v = rng.randrange(n)
        sources = {rng.randrange(n) for _ in range(rng.randint(1, n))}
        assert lambda_q(g, q, sources, v) == helpers.brute_cut_value(g, q, sources, v)


def test_brute_cut_agrees_with_literal_enumeration():
    rng = random.Random(3)
    for _ in range(8):
        n = rng.randint(2, 4)
        g = random_graph(rng, n, rng.randint(1, 5), rng.random() < 0.5)
        q = random_capacities(rng, n, (1, 2))
        v = rng.randrange(n)
        sources = {rng.randrange(n)}
        assert (helpers.brute_cut_value(g, q, sources, v)
                == helpers.brute_cut_value_literal(g, q, sources, v))


def test_lambda_pq_isolated_self_supply():
    g = Graph(2, (), True)
    assert lambda_pq(g, [2, 2], [1, 1], {0}, 0) == 2
    assert lambda_pq(g, [INF, INF], [1, 1], {0}, 0) == INF


def test_lambda_pq_rejects_capacity_above_supply():
    g = Graph(2, ((0, 1),), True)
    with pytest.raises(InstanceError):
        lambda_pq(g, [1, 1], [2, 1], {0}, 1)


def test_lambda_pq_equals_edge_connectivity_when_uncapacitated():
    rng = random.Random(23)
    for _ in range(20):
        n = rng.randint(2, 5)
        g = random_graph(rng, n, rng.randint(1, 8), rng.random() < 0.5)
        v = rng.randrange(n)
        sources = {rng.randrange(n) for _ in range(rng.randint(1, n))} - {v}
        if not sources:
            continue
        inf_vec = [INF] * n
        assert (lambda_pq(g, inf_vec, inf_vec, sources, v)
                == helpers.brute_cut_value(g, inf_vec, sources, v))


def test_lambda_pq_closed_form_matches_construction():
    rng = random.Random(31)
    for _ in range(40):
        n = rng.randint(2, 6)
        g = random_graph(rng, n, rng.randint(1, 9), rng.random() < 0.5)
        q = random_capacities(rng, n, (1, 2))
        p = tuple(q[u] if rng.random() < 0.5 else q[u] + rng.randint(0, 2) for u in range(n))
        v = rng.randrange(n)
        sources = {rng.randrange(n) for _ in range(rng.randint(1, n))}
        assert lambda_pq(g, p, q, sources, v) == lambda_pq_closed_form(g, p, q, sources, v)


def test_lambda_monotone_in_source_set():
    rng = random.Random(41)
    for _ in range(20):
        n = 5
        g = random_graph(rng, n, 7, rng.random() < 0.5)
        q = random_capacities(rng, n, Q_CHOICES)
        v = rng.randrange(n)
        small = {rng.randrange(n)}
        big = small | {rng.randrange(n), rng.randrange(n)}
        assert lambda_q(g, q, small, v) <= lambda_q(g, q, big, v)


def test_single_edge_changes_connectivity_by_at_most_one():
    rng = random.Random(43)
    for _ in range(30):
        n = 5
        g = random_graph(rng, n, 6, True)
        q = random_capacities(rng, n, Q_CHOICES)
        u, v = rng.randrange(n), rng.randrange(n)
        if u == v:
            continue
        extra = (rng.randrange(n), rng.randrange(n))
        if extra[0] == extra[1]:
            continue
        before = lambda_q(g, q, {u}, v)
        after = lambda_q(g.with_edges([extra]), q, {u}, v)
        assert after in (before, before + 1)


# ---------------------------------------------------------------------------
# Connectivity zoo


def test_kappa_prime_isolated_member():
    g = Graph(2, (), True)
    assert connectivity("kappa_prime", g, {0}, 0) == 1


def test_kappa_hat_star():
    g = Graph(4, ((1, 0), (2, 0), (3, 0)), False)
    assert connectivity("kappa_hat", g, {1, 2, 3}, 0) == 3
    assert connectivity("kappa_hat", g, {0}, 0) == INF


def test_kappa_directed_rejects_undirected():
    with pytest.raises(InstanceError):
        connectivity("kappa_directed", Graph(2, ((0, 1),), False), {0}, 1)


def test_kappa_directed_sources_uncuttable():
    # two sources feeding v directly plus a source-to-source arc:
    # no node outside S+{v} exists, so only the two arcs into v can be cut
    g = Graph(3, ((0, 2), (1, 2), (0, 1)), True)
    assert connectivity("kappa_directed", g, {0, 1}, 2) == 2
    # kappa_hat may cut the sources themselves at unit cost
    assert connectivity("kappa_hat", g, {0, 1}, 2) == 2


def test_zoo_matches_path_enumeration():
    rng = random.Random(59)
    for _ in range(40):
        n = rng.randint(2, 5)
        directed = rng.random() < 0.5
        g = random_graph(rng, n, rng.randint(1, 7), directed)
        v = rng.randrange(n)
        sources = {rng.randrange(n) for _ in range(rng.randint(1, n))}
        assert connectivity("kappa_hat", g, sources, v) == helpers.brute_kappa_hat(g, sources, v)
        assert connectivity("kappa_prime", g, sources, v) == helpers.brute_kappa_prime(g, sources, v)
        if directed:
            assert (connectivity("kappa_directed", g, sources, v)
                    == helpers.brute_kappa_directed(g, sources, v))


def test_pair_connectivity_exempts_both_endpoints():
    g = Graph(2, ((0, 1), (0, 1), (0, 1)), False)
    assert lambda_q_pair(g, [1, 1], 0, 1) == 3
    assert lambda_q(g, [1, 1], {0}, 1) == 1


# ---------------------------------------------------------------------------
# Cut certificates


def test_certificate_examples():
    # single bridge
    g = Graph(3, ((0, 1), (1, 2)), True)
    cert = min_cut_certificate(g, [INF] * 3, {0}, 2)
    assert cert.value == 1 and cut_disconnects(g, cert, {0}, 2)
    # unreachable target: empty certificate
    g2 = Graph(3, ((1, 2),), True)
    cert2 = min_cut_certificate(g2, [INF] * 3, {0}, 0)
    assert cert2.value == 0 and cert2.cut_edges == () and cut_disconnects(g2, cert2, {0}, 0)
    # no sources besides the target itself
    cert3 = min_cut_certificate(g, [INF] * 3, {2}, 2)
    assert cert3.value == 0


def test_certificates_disconnect_and_match_flow():
    rng = random.Random(61)
    for _ in range(40):
        n = rng.randint(2, 6)
        g = random_graph(rng, n, rng.randint(1, 9), rng.random() < 0.5)
        q = random_capacities(rng, n, Q_CHOICES)
        v = rng.randrange(n)
        sources = {rng.randrange(n) for _ in range(rng.randint(1, n))}
        cert = min_cut_certificate(g, q, sources, v)
        assert cert.value == lambda_q(g, q, sources, v)
        assert cert.capacity(q) == cert.value
        assert cut_disconnects(g, cert, sources, v)


# ---------------------------------------------------------------------------
# Flow costs


def test_min_flow_cost_examples():
    g = Graph(2, ((0, 1), (0, 1)), True)
    costs = [3, 5]
    free = [INF, INF]
    assert min_flow_cost(g, costs, free, free, {0}, 1, 0) == 0
    assert min_flow_cost(g, costs, free, free, {0}, 1, 1) == 3
    assert min_flow_cost(g, costs, free, free, {0}, 1, 2) == 8
    assert min_flow_cost(g, costs, free, free, {0}, 1, 3) == INF


def test_min_flow_cost_matches_subset_enumeration():
    rng = random.Random(67)
    for _ in range(25):
        n = rng.randint(2, 5)
        g = random_graph(rng, n, rng.randint(1, 8), rng.random() < 0.5)
        costs = tuple(rng.randint(0, 6) for _ in g.edges)
        q = random_capacities(rng, n, (1, 2))
        p = tuple(q[u] + rng.randint(0, 1) for u in range(n))
        v = rng.randrange(n)
        sources = {rng.randrange(n) for _ in range(rng.randint(1, n))}
        d = rng.randint(0, 2)
        assert (min_flow_cost(g, costs, p, q, sources, v, d)
                == helpers.brute_min_flow_cost(g, costs, p, q, sources, v, d))


def test_min_flow_cost_support_is_sufficient():
    rng = random.Random(71)
    for _ in range(15):
        n = rng.randint(2, 5)
        g = random_graph(rng, n, rng.randint(2, 8), False)
        costs = tuple(rng.randint(1, 5) for _ in g.edges)
        free = [INF] * n
        v = rng.randrange(n)
        sources = {rng.randrange(n)} - {v}
        if not sources:
            continue
        d = rng.randint(1, 2)
        out = min_flow_cost(g, costs, free, free, sources, v, d, with_support=True)
        if out[0] == INF:
            continue
        cost, support = out
        sub = Graph(g.n, tuple(g.edges[i] for i in support), g.directed)
        assert lambda_pq(sub, free, free, sources, v, cap=d) >= d
        assert sum(costs[i] for i in support) == cost


def test_min_flow_cost_non_increasing_in_sources():
    rng = random.Random(73)
    for _ in range(15):
        n = 5
        g = random_graph(rng, n, 7, False)
        costs = tuple(rng.randint(0, 4) for _ in g.edges)
        q = random_capacities(rng, n, (1, 2))
        p = tuple(q[u] for u in range(n))
        v = rng.randrange(n)
        small = {rng.randrange(n)}
        big = small | {rng.randrange(n)}
        d = rng.randint(1, 2)
        assert (min_flow_cost(g, costs, p, q, big, v, d)
                <= min_flow_cost(g, costs, p, q, small, v, d))
