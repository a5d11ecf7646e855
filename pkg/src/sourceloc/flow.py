"""Node-capacitated flow engines and the connectivity functions built on them.

Every connectivity query reduces to max flow on a split network: a node v
with capacity q_v becomes v_in -> v_out with an arc of capacity q_v, each
original edge becomes an arc between the matching out/in endpoints, and the
query's protected nodes (source set members are attached through their
capacity; the target is exempt) stay unsplit.  Max flow is shortest
augmenting path on integer capacities; flow costs are exact rationals.
Engines are built per query and hold no shared state.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .core import Edge, Graph, InstanceError, check_capacities
from .values import INF, Num, is_finite

CONNECTIVITY_KINDS = ("lambda", "kappa_hat", "kappa_prime", "kappa_directed")


class ArcNetwork:
    """Arc-list flow network with paired residual arcs.

    Arc i and i^1 are a forward/reverse pair.  Tags on forward arcs record
    what the arc models ("node" splitter, "edge" class, "supply") so cuts
    and supports can be mapped back to the original graph.
    """

    def __init__(self):
        self.node_count = 0
        self.head: list[int] = []
        self.cap: list[Num] = []
        self.cost: list = []
        self.tag: list = []
        self.adj: list[list[int]] = []
        self.source: Optional[int] = None
        self.sink: Optional[int] = None

    def add_node(self) -> int:
        self.adj.append([])
        self.node_count += 1
        return self.node_count - 1

    def add_arc(self, tail: int, head: int, cap: Num, cost=0, tag=None) -> int:
        if cap != INF and (not isinstance(cap, int) or cap < 0):
            raise InstanceError(f"arc capacity must be a nonnegative integer or inf, got {cap!r}")
        idx = len(self.head)
        self.head.extend([head, tail])
        self.cap.extend([cap, 0])
        self.cost.extend([cost, -cost])
        self.tag.extend([tag, None])
        self.adj[tail].append(idx)
        self.adj[head].append(idx + 1)
        return idx

    def arc_count(self) -> int:
        return len(self.head) // 2


@dataclass
class FlowResult:
    network: ArcNetwork
    value: Num
    residual: list  # residual capacity per arc slot (forward and reverse)

    def flow_on(self, arc: int) -> int:
        """Flow carried by forward arc `arc` (its reverse residual)."""
        return self.residual[arc + 1]

    def source_side(self) -> set[int]:
        """Nodes reachable from the source in the residual network."""
        return _residual_reach(self.network, self.residual, self.network.source, forward=True)

    def sink_side(self) -> set[int]:
        """Nodes that can reach the sink in the residual network."""
        return _residual_reach(self.network, self.residual, self.network.sink, forward=False)


def _residual_reach(net: ArcNetwork, residual, start: int, forward: bool) -> set[int]:
    seen = {start}
    queue = deque([start])
    while queue:
        x = queue.popleft()
        for idx in net.adj[x]:
            # adj[x] holds slots with tail x; slot idx^1 is the arc into x
            slot = idx if forward else idx ^ 1
            nxt = net.head[idx]
            if residual[slot] > 0 and nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return seen


def _inf_reachable(net: ArcNetwork, source: int, sink: int) -> bool:
    seen = {source}
    queue = deque([source])
    while queue:
        x = queue.popleft()
        for idx in net.adj[x]:
            if idx % 2 == 0 and net.cap[idx] == INF:
                y = net.head[idx]
                if y == sink:
                    return True
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
    return False


def max_flow(net: ArcNetwork, source: int, sink: int, stop_at: Optional[int] = None) -> FlowResult:
    """Shortest-augmenting-path max flow.

    Infinite capacities are legal: if the sink is reachable through
    infinite arcs alone the value is INF, otherwise they are replaced by a
    finite bound (one more than the total finite capacity) which no flow
    can exhaust.  With `stop_at`, augmentation stops once the value reaches
    it and the exact value min(max flow, stop_at) is returned.
    """
    net.source, net.sink = source, sink
    if source == sink:
        raise InstanceError("source and sink coincide")
    if _inf_reachable(net, source, sink):
        return FlowResult(net, INF, list(net.cap))
    finite_total = sum(c for c in net.cap if c != INF)
    bound = finite_total + 1
    residual = [bound if c == INF else c for c in net.cap]
    value = 0
    parent: list = [-1] * net.node_count
    while stop_at is None or value < stop_at:
        for i in range(net.node_count):
            parent[i] = -1
        parent[source] = -2
        queue = deque([source])
        while queue:
            x = queue.popleft()
            if x == sink:
                break
            for idx in net.adj[x]:
                y = net.head[idx]
                if residual[idx] > 0 and parent[y] == -1:
                    parent[y] = idx
                    queue.append(y)
        if parent[sink] == -1:
            break
        push = bound
        y = sink
        while y != source:
            idx = parent[y]
            push = min(push, residual[idx])
            y = net.head[idx ^ 1]
        if stop_at is not None:
            push = min(push, stop_at - value)
        y = sink
        while y != source:
            idx = parent[y]
            residual[idx] -= push
            residual[idx ^ 1] += push
            y = net.head[idx ^ 1]
        value += push
    return FlowResult(net, value, residual)


def min_cost_flow(net: ArcNetwork, source: int, sink: int, target: int):
    """Successive shortest paths up to `target` units; exact costs.

    Returns (sent, cost, FlowResult); sent < target means the network
    cannot carry the requested value.
    """
    net.source, net.sink = source, sink
    residual = [min(c, target) if c == INF else c for c in net.cap]
    sent = 0
    total_cost = 0
    while sent < target:
        dist: list = [None] * net.node_count
        parent: list = [-1] * net.node_count
        dist[source] = 0
        in_queue = [False] * net.node_count
        queue = deque([source])
        in_queue[source] = True
        while queue:  # Bellman-Ford queue relaxation; residual costs may be negative
            x = queue.popleft()
            in_queue[x] = False
            for idx in net.adj[x]:
                if residual[idx] <= 0:
                    continue
                y = net.head[idx]
                cand = dist[x] + net.cost[idx]
                if dist[y] is None or cand < dist[y]:
                    dist[y] = cand
                    parent[y] = idx
                    if not in_queue[y]:
                        in_queue[y] = True
                        queue.append(y)
        if dist[sink] is None:
            break
        push = target - sent
        y = sink
        while y != source:
            idx = parent[y]
            push = min(push, residual[idx])
            y = net.head[idx ^ 1]
        y = sink
        while y != source:
            idx = parent[y]
            residual[idx] -= push
            residual[idx ^ 1] += push
            y = net.head[idx ^ 1]
        sent += push
        total_cost += push * dist[sink]
    return sent, total_cost, FlowResult(net, sent, residual)


# ---------------------------------------------------------------------------
# Split construction and connectivity functions


class SplitNetwork(ArcNetwork):
    """ArcNetwork plus the node mapping produced by the split transform."""

    def __init__(self):
        super().__init__()
        self.in_of: list[int] = []
        self.out_of: list[int] = []
        self.kept: set[int] = set()


def split_transform(graph: Graph, q: Sequence[Num], keep: Iterable[int] = ()) -> SplitNetwork:
    """Replace every node outside `keep` by an in/out pair joined by an arc
    of its capacity; an edge of multiplicity m becomes an arc of capacity m
    (both directions for undirected graphs)."""
    q = check_capacities(q, graph.n)
    keep = set(keep)
    net = SplitNetwork()
    net.kept = keep
    for v in range(graph.n):
        if v in keep:
            node = net.add_node()
            net.in_of.append(node)
            net.out_of.append(node)
        else:
            v_in = net.add_node()
            v_out = net.add_node()
            net.in_of.append(v_in)
            net.out_of.append(v_out)
            net.add_arc(v_in, v_out, q[v], tag=("node", v))
    for (u, v), mult in sorted(graph.edge_multiplicity().items()):
        net.add_arc(net.out_of[u], net.in_of[v], mult, tag=("edge", (u, v)))
        if not graph.directed:
            net.add_arc(net.out_of[v], net.in_of[u], mult, tag=("edge", (u, v)))
    return net


def _check_sources(graph: Graph, sources: Iterable[int], v: int) -> list[int]:
    src = sorted(set(sources))
    for u in src:
        if not (0 <= u < graph.n):
            raise InstanceError(f"source {u} out of range")
    if not (0 <= v < graph.n):
        raise InstanceError(f"target {v} out of range")
    return [u for u in src if u != v]


def lambda_q(graph: Graph, q: Sequence[Num], sources: Iterable[int], v: int,
             cap: Optional[int] = None) -> int:
    """Capacitated connectivity from a source set: the maximum flow from the
    sources (minus v itself) into v, with unit edges and node capacities q.
    The target is exempt from its capacity; everything else, sources
    included, can be cut."""
    src = _check_sources(graph, sources, v)
    if not src:
        return 0
    net = split_transform(graph, q, keep={v})
    s = net.add_node()
    for u in src:
        net.add_arc(s, net.in_of[u], INF, tag=("supply", u))
    result = max_flow(net, s, net.in_of[v], stop_at=cap)
    return result.value


def lambda_q_pair(graph: Graph, q: Sequence[Num], u: int, v: int,
                  cap: Optional[int] = None) -> int:
    """Demand-pair connectivity: max flow between two named endpoints with
    unit edges and capacities on the nodes strictly between them.  Both
    endpoints are exempt (a path at an endpoint does not transit it); this
    is the cut the biset machinery dualizes, as opposed to lambda_q where
    source nodes remain cuttable."""
    if u == v:
        raise InstanceError("demand endpoints coincide")
    _check_sources(graph, {u}, v)
    net = split_transform(graph, q, keep={u, v})
    result = max_flow(net, net.in_of[u], net.in_of[v], stop_at=cap)
    return result.value


def lambda_pq(graph: Graph, p: Sequence[Num], q: Sequence[Num], sources: Iterable[int], v: int,
              cap: Optional[int] = None) -> Num:
    """Supply-and-capacity connectivity: each chosen source u feeds at most
    p_u units in, and the value is INF exactly when v supplies itself
    without limit."""
    if len(p) != graph.n:
        raise InstanceError(f"expected {graph.n} supplies, got {len(p)}")
    for u, pu in enumerate(p):
        if pu != INF and (not isinstance(pu, int) or pu < 0):
            raise InstanceError(f"supply of node {u} must be a nonnegative integer or inf")
        if is_finite(p[u]) and is_finite(q[u]) and q[u] > p[u]:
            raise InstanceError(f"node {u} has capacity above its supply")
    sources = sorted(set(sources))
    _check_sources(graph, sources, v)
    if v in sources and p[v] == INF:
        return INF
    net = split_transform(graph, q, keep={v})
    s = net.add_node()
    for u in sources:
        if u == v:
            net.add_arc(s, net.in_of[v], p[v], tag=("supply", v))
        else:
            net.add_arc(s, net.in_of[u], p[u], tag=("supply", u))
    result = max_flow(net, s, net.in_of[v], stop_at=cap)
    return result.value


def lambda_pq_closed_form(graph: Graph, p, q, sources, v) -> Num:
    """Definition-level shortcut, valid when p_u >= q_u on the source set:
    self-supply plus the plain capacitated connectivity."""
    sources = set(sources)
    if v in sources:
        pv = p[v]
        rest = lambda_q(graph, q, sources, v)
        return INF if pv == INF else pv + rest
    return lambda_q(graph, q, sources, v)


def connectivity(kind: str, graph: Graph, sources: Iterable[int], v: int) -> Num:
    """The classical connectivity flavors as supply/capacity presets.

    lambda: edge connectivity (everything infinite).
    kappa_hat: all transit nodes count, unlimited supply (p=inf, q=1).
    kappa_prime: as kappa_hat but a chosen node feeds itself once (p=q=1).
    kappa_directed: cut nodes outside the source set and the target only;
        computed on the split network with sources attached past their
        capacity arc.  Undirected input is rejected.
    """
    if kind not in CONNECTIVITY_KINDS:
        raise InstanceError(f"unknown connectivity kind {kind!r}")
    n = graph.n
    sources = sorted(set(sources))
    if kind == "lambda":
        return lambda_pq(graph, [INF] * n, [INF] * n, sources, v)
    if kind == "kappa_hat":
        return lambda_pq(graph, [INF] * n, [1] * n, sources, v)
    if kind == "kappa_prime":
        return lambda_pq(graph, [1] * n, [1] * n, sources, v)
    if not graph.directed:
        raise InstanceError("kappa_directed needs a directed graph")
    if v in sources:
        return INF
    _check_sources(graph, sources, v)
    net = split_transform(graph, [1] * n, keep={v})
    s = net.add_node()
    for u in sources:
        # emission bypasses the splitter: source nodes cannot be cut
        net.add_arc(s, net.out_of[u], INF, tag=("supply", u))
    return max_flow(net, s, net.in_of[v]).value


# ---------------------------------------------------------------------------
# Cut certificates


@dataclass(frozen=True)
class CutCertificate:
    """Dual witness: deleting cut_edges and cut_nodes disconnects the query."""

    cut_edges: tuple[Edge, ...]
    cut_nodes: frozenset[int]
    value: int

    def capacity(self, q: Sequence[Num]) -> Num:
        return len(self.cut_edges) + sum(q[w] for w in self.cut_nodes)


def min_cut_certificate(graph: Graph, q: Sequence[Num], sources: Iterable[int], v: int) -> CutCertificate:
    """Source-side-minimal minimum cut for the lambda_q query, read off the
    residual reachability of a maximum flow."""
    q = check_capacities(q, graph.n)
    src = _check_sources(graph, sources, v)
    if not src:
        return CutCertificate((), frozenset(), 0)
    net = split_transform(graph, q, keep={v})
    s = net.add_node()
    for u in src:
        net.add_arc(s, net.in_of[u], INF, tag=("supply", u))
    result = max_flow(net, s, net.in_of[v])
    reach = result.source_side()
    cut_edges: list[Edge] = []
    cut_nodes: set[int] = set()
    for idx in range(0, len(net.head), 2):
        tail, head = net.head[idx ^ 1], net.head[idx]
        if tail in reach and head not in reach:
            tag = net.tag[idx]
            assert tag is not None and tag[0] != "supply", "supply arcs are uncuttable"
            if tag[0] == "node":
                cut_nodes.add(tag[1])
            else:
                cut_edges.extend([tag[1]] * net.cap[idx])
    cert = CutCertificate(tuple(sorted(cut_edges)), frozenset(cut_nodes), result.value)
    assert cert.capacity(q) == result.value, "max-flow/min-cut mismatch"
    return cert


def cut_disconnects(graph: Graph, cert: CutCertificate, sources: Iterable[int], v: int) -> bool:
    """Re-run reachability with the certificate removed (verification path)."""
    removed = dict()
    for e in cert.cut_edges:
        removed[e] = removed.get(e, 0) + 1
    alive = [u for u in sorted(set(sources)) if u != v and u not in cert.cut_nodes]
    adj: dict[int, list[int]] = {u: [] for u in range(graph.n)}
    budget = dict(removed)
    for u, w in graph.edges:
        key = (u, w) if graph.directed else (min(u, w), max(u, w))
        if budget.get(key, 0) > 0:
            budget[key] -= 1
            continue
        adj[u].append(w)
        if not graph.directed:
            adj[w].append(u)
    seen = set(alive)
    queue = deque(alive)
    while queue:
        x = queue.popleft()
        if x == v:
            return False
        for y in adj[x]:
            if y not in seen and (y == v or y not in cert.cut_nodes):
                seen.add(y)
                queue.append(y)
    return v not in seen


# ---------------------------------------------------------------------------
# Flow costs


def min_flow_cost(graph: Graph, edge_costs: Sequence[Num], p, q,
                  sources: Iterable[int], v: int, demand: int,
                  with_support: bool = False):
    """Cheapest edge set carrying `demand` units from the source set to v,
    as a min-cost flow on the costed split network.  INF when the
    connectivity itself falls short.  With `with_support`, also returns the
    indices of the edges the optimal flow uses."""
    if demand < 0:
        raise InstanceError("demand must be nonnegative")
    if len(edge_costs) != len(graph.edges):
        raise InstanceError("edge_costs must match the edge list one-to-one")
    if demand == 0:
        return (0, ()) if with_support else 0
    sources = sorted(set(sources))
    _check_sources(graph, sources, v)
    q = check_capacities(q, graph.n)
    net = SplitNetwork()
    for w in range(graph.n):
        if w == v:
            node = net.add_node()
            net.in_of.append(node)
            net.out_of.append(node)
        else:
            w_in = net.add_node()
            w_out = net.add_node()
            net.in_of.append(w_in)
            net.out_of.append(w_out)
            net.add_arc(w_in, w_out, min(q[w], demand) if q[w] != INF else demand, tag=("node", w))
    edge_arcs: list[list[int]] = []
    for i, (a, b) in enumerate(graph.edges):
        arcs = [net.add_arc(net.out_of[a], net.in_of[b], 1, cost=edge_costs[i], tag=("edge", i))]
        if not graph.directed:
            arcs.append(net.add_arc(net.out_of[b], net.in_of[a], 1, cost=edge_costs[i], tag=("edge", i)))
        edge_arcs.append(arcs)
    s = net.add_node()
    for u in sources:
        pu = p[u]
        cap = demand if pu == INF else min(pu, demand)
        net.add_arc(s, net.in_of[u] if u != v else net.in_of[v], cap, tag=("supply", u))
    sent, cost, result = min_cost_flow(net, s, net.in_of[v], demand)
    if sent < demand:
        return (INF, None) if with_support else INF
    if not with_support:
        return cost
    support = tuple(sorted(i for i, arcs in enumerate(edge_arcs)
                           if any(result.flow_on(a) > 0 for a in arcs)))
    return cost, support
