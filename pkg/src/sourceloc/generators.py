"""Seeded random instance builders shared by the CLI and the test suite.

Everything is a pure function of the passed Random state, so a fixed seed
reproduces instances bit for bit.
"""

from __future__ import annotations

import random
from typing import Optional

from .core import CandidateEdge, Demand, Graph, InstanceError, SNAInstance, SSLInstance
from .flow import lambda_pq, lambda_q_pair, min_flow_cost
from .values import INF

SSL_MODES = ("lambda", "kappa_hat", "kappa_prime", "general")


def random_graph(rng: random.Random, n: int, m: int, directed: bool) -> Graph:
    edges = []
    for _ in range(m):
        u = rng.randrange(n)
        v = rng.randrange(n)
        while v == u:
            v = rng.randrange(n)
        edges.append((u, v))
    return Graph(n, tuple(edges), directed)


def _cost(rng: random.Random, cost_max: int, zero_prob: float = 0.1) -> int:
    if rng.random() < zero_prob:
        return 0
    return rng.randint(1, max(cost_max, 1))


def random_capacities(rng: random.Random, n: int, choices=(1, 2, INF)) -> tuple:
    return tuple(rng.choice(choices) for _ in range(n))


def random_ssl(rng: random.Random, n: int, m: int, k: int, mode: str = "general",
               directed: bool = False, cost_max: int = 9) -> SSLInstance:
    """Random source-location instance with the classical supply/capacity
    presets; `general` draws capacities and matching supplies freely."""
    if mode not in SSL_MODES:
        raise InstanceError(f"unknown mode {mode!r}; pick one of {SSL_MODES}")
    graph = random_graph(rng, n, m, directed)
    demand = [rng.randint(0, k) for _ in range(n)] if k else [0] * n
    if k:
        demand[rng.randrange(n)] = k
    if mode == "lambda":
        supply, capacity = [INF] * n, [INF] * n
    elif mode == "kappa_hat":
        supply, capacity = [INF] * n, [1] * n
    elif mode == "kappa_prime":
        supply, capacity = [1] * n, [1] * n
    else:
        supply, capacity = [], []
        for _ in range(n):
            q = rng.choice((1, 1, 2, INF))
            if q != INF and k:
                q = min(q, k)  # the box constraint q <= p <= max demand
            if q == INF:
                p = INF
            else:
                p = rng.choice((q, k, INF)) if k else rng.choice((q, INF))
            supply.append(p)
            capacity.append(q)
    cost = tuple(_cost(rng, cost_max) for _ in range(n))
    return SSLInstance(graph=graph, cost=cost, demand=tuple(demand),
                       supply=tuple(supply), capacity=tuple(capacity))


def random_ssl_flow_bounds(rng: random.Random, n: int, m: int, k: int,
                           cost_max: int = 5, slack_max: int = 6,
                           tight_prob: float = 0.5) -> SSLInstance:
    """Budgeted variant: demands are capped at what the full node set can
    deliver, then budgets sit at or a little above the full-set flow cost
    (sometimes infinite), so instances are feasible but budgets bite."""
    base = random_ssl(rng, n, m, k, mode="general", directed=False, cost_max=cost_max)
    edge_costs = tuple(rng.randint(0, cost_max) for _ in base.graph.edges)
    everyone = range(n)
    demand = list(base.demand)
    for v in range(n):
        if demand[v]:
            lam = lambda_pq(base.graph, base.supply, base.capacity, everyone, v, cap=demand[v])
            demand[v] = min(demand[v], lam)
    supply = tuple(p if p == INF else max(min(p, max(max(demand), 1)), 1) for p in base.supply)
    capacity = tuple(q if q == INF else min(q, s if s != INF else q)
                     for q, s in zip(base.capacity, supply))
    trimmed = SSLInstance(graph=base.graph, cost=base.cost, demand=tuple(demand),
                          supply=supply, capacity=capacity, edge_costs=edge_costs)
    bounds = []
    for v in range(n):
        floor = min_flow_cost(trimmed.graph, edge_costs, trimmed.supply, trimmed.capacity,
                              everyone, v, trimmed.demand[v])
        assert floor != INF, "demand capping should have made the full set adequate"
        if rng.random() < tight_prob:
            bounds.append(int(floor) + rng.randint(0, slack_max))
        else:
            bounds.append(INF)
    return SSLInstance(graph=trimmed.graph, cost=trimmed.cost, demand=trimmed.demand,
                       supply=trimmed.supply, capacity=trimmed.capacity,
                       edge_costs=edge_costs, flow_cost_bound=tuple(bounds))


def _star_candidates(rng: random.Random, n: int, center: int, f_size: int,
                     r_cap: int, cost_max: int, cost_mode: str) -> list[CandidateEdge]:
    per_class: dict[int, int] = {}
    candidates: list[CandidateEdge] = []
    for _ in range(f_size):
        leaf = rng.randrange(n)
        while leaf == center:
            leaf = rng.randrange(n)
        if per_class.get(leaf, 0) >= r_cap:
            continue
        per_class[leaf] = per_class.get(leaf, 0) + 1
        cost = _cost(rng, cost_max) if cost_mode == "edge" else 0
        candidates.append(CandidateEdge(center, leaf, cost))
    return candidates


def random_sna(rng: random.Random, n: int, m: int, f_size: int, k: int,
               directed: bool, cost_mode: str = "edge", rooted: bool = False,
               cost_max: int = 9, ensure_feasible: bool = True,
               q_choices=(1, 2, INF)) -> SNAInstance:
    """Random star-candidate augmentation instance.

    With `ensure_feasible`, requirements are clamped to what buying the
    whole candidate set achieves (pairs stuck at zero are dropped)."""
    graph = random_graph(rng, n, m, directed)
    capacity = random_capacities(rng, n, q_choices)
    center = rng.randrange(n)
    candidates = _star_candidates(rng, n, center, f_size, max(k, 1), cost_max, cost_mode)
    node_costs = None
    if cost_mode == "node":
        costs = [_cost(rng, cost_max) for _ in range(n)]
        costs[center] = 0
        node_costs = tuple(costs)
    full = graph.with_edges(e.pair for e in candidates)
    demands: list[Demand] = []
    used = set()
    for _ in range(max(n // 2, 2)):
        if rooted:
            u = center
            v = rng.randrange(n)
            while v == center:
                v = rng.randrange(n)
        else:
            u, v = rng.randrange(n), rng.randrange(n)
            while v == u:
                v = rng.randrange(n)
        key = (u, v) if directed else (min(u, v), max(u, v))
        if key in used:
            continue
        used.add(key)
        r = rng.randint(1, k) if k else 0
        if ensure_feasible and r:
            r = min(r, lambda_q_pair(full, capacity, u, v, cap=r))
        if r:
            demands.append(Demand(u, v, r))
    max_r = max((d.r for d in demands), default=0)
    trimmed: list[CandidateEdge] = []
    per_class: dict[int, int] = {}
    for e in candidates:
        leaf = e.v if e.u == center else e.u
        if demands and per_class.get(leaf, 0) >= max_r:
            continue
        per_class[leaf] = per_class.get(leaf, 0) + 1
        trimmed.append(e)
    return SNAInstance(graph=graph, capacity=capacity, candidates=tuple(trimmed),
                       demands=tuple(demands), cost_mode=cost_mode, node_costs=node_costs)


def random_single_step(rng: random.Random, n: int, m: int, f_size: int,
                       rooted: bool = False, cost_mode: str = "edge",
                       cost_max: int = 9) -> Optional[SNAInstance]:
    """Undirected instance whose every requirement is one above the current
    pair connectivity; None when no demand pair comes out usable."""
    graph = random_graph(rng, n, m, directed=False)
    capacity = random_capacities(rng, n)
    center = rng.randrange(n)
    candidates = _star_candidates(rng, n, center, f_size, 1, cost_max, cost_mode)
    node_costs = None
    if cost_mode == "node":
        costs = [_cost(rng, cost_max) for _ in range(n)]
        costs[center] = 0
        node_costs = tuple(costs)
    demands = []
    used = set()
    for _ in range(max(n // 2, 2)):
        if rooted:
            u, v = center, rng.randrange(n)
            while v == center:
                v = rng.randrange(n)
        else:
            u, v = rng.randrange(n), rng.randrange(n)
            while v == u:
                v = rng.randrange(n)
        key = (min(u, v), max(u, v))
        if key in used:
            continue
        used.add(key)
        lam = lambda_q_pair(graph, capacity, u, v)
        demands.append(Demand(u, v, lam + 1))
    if not demands:
        return None
    return SNAInstance(graph=graph, capacity=capacity, candidates=tuple(candidates),
                       demands=tuple(demands), cost_mode=cost_mode, node_costs=node_costs)


def random_membership(rng: random.Random, n_sets: int, n_elements: int,
                      density: float = 0.5) -> list[list[int]]:
    """Random set system; every element is covered by at least one set."""
    sets = [[e for e in range(n_elements) if rng.random() < density]
            for _ in range(n_sets)]
    for e in range(n_elements):
        if not any(e in s for s in sets):
            sets[rng.randrange(n_sets)].append(e)
    return [sorted(s) for s in sets]
