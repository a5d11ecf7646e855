"""Independent brute-force oracles for the test suite.

Nothing here touches the flow engine's augmenting-path machinery: cuts are
enumerated combinatorially and path systems are searched directly, so
agreement with the library is genuine cross-validation.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from sourceloc import INF, Graph, lambda_pq


def brute_cut_value(graph: Graph, q, sources, v) -> int:
    """Minimum over all cuts (edge subsets plus node subsets avoiding v)
    disconnecting the surviving sources from v.

    Every node except v is assigned cut / source-side / sink-side; the cut
    pays its node capacities plus the edges crossing into the sink side,
    and surviving sources may not sit on the sink side.
    """
    sources = sorted(set(sources) - {v})
    others = [w for w in range(graph.n) if w != v]
    best = None
    for assign in itertools.product((0, 1, 2), repeat=len(others)):
        state = dict(zip(others, assign))
        state[v] = 2  # sink side
        if any(state[u] == 2 for u in sources):
            continue
        value = sum(q[w] for w, a in state.items() if a == 0)
        if value == INF:
            continue
        for x, y in graph.edges:
            if state[x] == 1 and state[y] == 2:
                value += 1
            elif not graph.directed and state[y] == 1 and state[x] == 2:
                value += 1
        if best is None or value < best:
            best = value
    return 0 if best is None else best


def brute_cut_value_literal(graph: Graph, q, sources, v) -> int:
    """Fully literal dual: enumerate every C in 2^(E + V-v) and test
    reachability after deletion.  Exponential; tiny inputs only."""
    sources = sorted(set(sources) - {v})
    if not sources:
        return 0
    m = len(graph.edges)
    nodes = [w for w in range(graph.n) if w != v]
    best = None
    for edge_mask in range(1 << m):
        kept = [e for i, e in enumerate(graph.edges) if not edge_mask >> i & 1]
        edge_cost = bin(edge_mask).count("1")
        if best is not None and edge_cost >= best:
            continue
        for r in range(len(nodes) + 1):
            for cut_nodes in itertools.combinations(nodes, r):
                value = edge_cost + sum(q[w] for w in cut_nodes)
                if value == INF or (best is not None and value >= best):
                    continue
                if not _reachable(graph, kept, set(cut_nodes), sources, v):
                    best = value
    return best if best is not None else 0


def _reachable(graph: Graph, edges, removed_nodes, sources, v) -> bool:
    alive = [u for u in sources if u not in removed_nodes]
    seen = set(alive)
    stack = list(alive)
    adj: dict[int, list[int]] = {}
    for x, y in edges:
        if x in removed_nodes or y in removed_nodes:
            continue
        adj.setdefault(x, []).append(y)
        if not graph.directed:
            adj.setdefault(y, []).append(x)
    while stack:
        x = stack.pop()
        if x == v:
            return True
        for y in adj.get(x, ()):
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return False


def simple_paths(graph: Graph, start: int, goal: int):
    """All node-simple paths start->goal as tuples of edge indices."""
    out: dict[int, list[tuple[int, int]]] = {}
    for i, (x, y) in enumerate(graph.edges):
        out.setdefault(x, []).append((i, y))
        if not graph.directed:
            out.setdefault(y, []).append((i, x))
    paths = []

    def walk(node, visited, trail):
        if node == goal:
            paths.append(tuple(trail))
            return
        for i, nxt in out.get(node, ()):
            if nxt not in visited:
                visited.add(nxt)
                trail.append(i)
                walk(nxt, visited, trail)
                trail.pop()
                visited.discard(nxt)

    walk(start, {start}, [])
    return paths


def _path_nodes(graph: Graph, start: int, path: tuple[int, ...]):
    nodes = [start]
    for i in path:
        x, y = graph.edges[i]
        nodes.append(y if nodes[-1] == x else x)
    return nodes


def _max_compatible(paths, compatible) -> int:
    best = 0
    order = sorted(range(len(paths)))

    def grow(idx, picked):
        nonlocal best
        best = max(best, len(picked))
        if len(picked) + len(order) - idx <= best:
            return
        for j in range(idx, len(order)):
            p = order[j]
            if all(compatible(p, other) for other in picked):
                picked.append(p)
                grow(j + 1, picked)
                picked.pop()

    grow(0, [])
    return best


def brute_disjoint_paths(graph: Graph, sources, v, shareable) -> int:
    """Maximum path system from the source set to v: paths are pairwise
    edge-disjoint and node-disjoint outside `shareable`."""
    sources = sorted(set(sources))
    all_paths = []
    seen = set()
    for s in sources:
        if s == v:
            continue
        for p in simple_paths(graph, s, v):
            key = (s, p)
            if key not in seen:
                seen.add(key)
                all_paths.append((s, p))
    node_sets = [set(_path_nodes(graph, s, p)) - shareable for s, p in all_paths]
    edge_sets = [set(p) for _, p in all_paths]

    def compatible(i, j):
        return not (node_sets[i] & node_sets[j]) and not (edge_sets[i] & edge_sets[j])

    return _max_compatible(all_paths, compatible)


def brute_kappa_hat(graph: Graph, sources, v):
    sources = set(sources)
    if v in sources:
        return INF
    return brute_disjoint_paths(graph, sources, v, {v})


def brute_kappa_prime(graph: Graph, sources, v):
    sources = set(sources)
    if v not in sources:
        return brute_kappa_hat(graph, sources, v)
    return 1 + brute_disjoint_paths(graph, sources - {v}, v, {v})


def brute_kappa_directed(graph: Graph, sources, v):
    sources = set(sources)
    if v in sources:
        return INF
    return brute_disjoint_paths(graph, sources, v, sources | {v})


def brute_min_flow_cost(graph: Graph, edge_costs, p, q, sources, v, demand):
    """Cheapest edge subset whose induced subgraph alone carries the
    demanded flow; exponential in the edge count."""
    if demand == 0:
        return 0
    m = len(graph.edges)
    best = INF
    for mask in range(1 << m):
        picked = [i for i in range(m) if mask >> i & 1]
        cost = sum((edge_costs[i] for i in picked), 0)
        if cost >= best:
            continue
        sub = Graph(graph.n, tuple(graph.edges[i] for i in picked), graph.directed)
        if lambda_pq(sub, p, q, sources, v, cap=demand) >= demand:
            best = cost
    return best


def brute_min_cover_cost(universe_size, subsets, costs):
    """Exact weighted set cover over bitmask subsets."""
    full = (1 << universe_size) - 1
    best = None
    for pick in range(1 << len(subsets)):
        got = 0
        cost = 0
        for i in range(len(subsets)):
            if pick >> i & 1:
                got |= subsets[i]
                cost += costs[i]
        if got == full and (best is None or cost < best):
            best = cost
    return best


def as_fraction(x) -> Fraction:
    return Fraction(x)
