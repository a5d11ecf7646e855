"""Problem transformations: source-location <-> rooted augmentation, the
directed node-split that removes node cuts, and the set-cover hard-instance
generator.

Each transformation returns the image instance plus a map object that pulls
solutions back and pushes them forward at equal cost.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .core import (CandidateEdge, Demand, Graph, InstanceError, SNAInstance,
                   SSLInstance)
from .values import INF, Num


@dataclass(frozen=True)
class RootedReductionMap:
    """Correspondence for the source-set <-> star-edge-set equivalence.

    `groups[v]` lists the candidate copies running from the root to v; a
    source set maps to the union of its groups and an edge set pulls back
    to the set of leaves it touches.
    """

    root: int
    groups: tuple[tuple[int, ...], ...]

    def picks_for_sources(self, sources: Iterable[int]) -> tuple[int, ...]:
        picks: list[int] = []
        for v in sorted(set(sources)):
            picks.extend(self.groups[v])
        return tuple(picks)

    def sources_for_picks(self, picks: Iterable[int]) -> frozenset[int]:
        rev = {}
        for v, grp in enumerate(self.groups):
            for i in grp:
                rev[i] = v
        return frozenset(rev[i] for i in picks)


def ssl_to_rooted_sna(ssl: SSLInstance) -> tuple[SNAInstance, RootedReductionMap]:
    """Append a free root node, turn each demand into a requirement from the
    root, and offer min(supply, max demand) root edges per node as the
    candidate star.  Node-cost mode; the root is uncuttable and free."""
    n = ssl.graph.n
    k = ssl.max_demand
    root = n
    graph = Graph(n + 1, ssl.graph.edges, ssl.graph.directed)
    capacity = ssl.capacity + (INF,)
    node_costs = ssl.cost + (0,)
    groups: list[tuple[int, ...]] = []
    candidates: list[CandidateEdge] = []
    for v in range(n):
        copies = k if ssl.supply[v] == INF else min(ssl.supply[v], k)
        start = len(candidates)
        candidates.extend(CandidateEdge(root, v, 0) for _ in range(copies))
        groups.append(tuple(range(start, start + copies)))
    demands = tuple(Demand(root, v, ssl.demand[v]) for v in range(n) if ssl.demand[v] > 0)
    instance = SNAInstance(
        graph=graph,
        capacity=capacity,
        candidates=tuple(candidates),
        demands=demands,
        cost_mode="node",
        node_costs=node_costs,
    )
    return instance, RootedReductionMap(root, tuple(groups))


def _root_violation(instance: SNAInstance, s: int) -> Optional[tuple[int, str]]:
    """First violated rooted-instance clause for candidate root s, as a
    (clause rank, message) pair; None when every clause holds."""
    for d in instance.demands:
        if s not in (d.u, d.v):
            return 0, f"demand ({d.u},{d.v}) does not touch the root {s}"
    for e in instance.candidates:
        if s not in (e.u, e.v):
            return 1, f"candidate ({e.u},{e.v}) does not touch the root {s}"
        if instance.graph.directed and e.u != s:
            return 2, f"directed candidate ({e.u},{e.v}) does not leave the root {s}"
    if any(s in (u, v) for u, v in instance.graph.edges):
        return 3, f"the root {s} must be isolated in the base graph"
    if instance.node_costs[s] != 0:
        return 4, f"the root {s} must have cost zero"
    return None


def rooted_sna_to_ssl(instance: SNAInstance) -> tuple[SSLInstance, RootedReductionMap]:
    """Inverse direction; rejects anything that is not a node-cost rooted
    instance with an isolated free root, naming the violated clause."""
    if instance.cost_mode != "node":
        raise InstanceError("reduction needs node costs")
    from .core import _common_set

    options = _common_set([(d.u, d.v) for d in instance.demands])
    if options is None:
        options = _common_set([e.pair for e in instance.candidates])
    if options is None:
        raise InstanceError("cannot locate the root: no demands and no candidates")
    if not options:
        raise InstanceError("demand set is not a star")
    s = None
    best_violation = None
    for cand in sorted(options):
        violation = _root_violation(instance, cand)
        if violation is None:
            s = cand
            break
        # report the clause for the most plausible root (fails latest)
        if best_violation is None or violation[0] > best_violation[0]:
            best_violation = violation
    if s is None:
        raise InstanceError(best_violation[1])
    n = instance.graph.n
    old_to_new = {}
    new_to_old = []
    for v in range(n):
        if v != s:
            old_to_new[v] = len(new_to_old)
            new_to_old.append(v)
    edges = tuple((old_to_new[u], old_to_new[v]) for u, v in instance.graph.edges)
    supply = [0] * (n - 1)
    groups: list[list[int]] = [[] for _ in range(n - 1)]
    for i, e in enumerate(instance.candidates):
        leaf = e.v if e.u == s else e.u
        supply[old_to_new[leaf]] += 1
        groups[old_to_new[leaf]].append(i)
    demand = [0] * (n - 1)
    for d in instance.demands:
        leaf = d.v if d.u == s else d.u
        demand[old_to_new[leaf]] = d.r
    ssl = SSLInstance(
        graph=Graph(n - 1, edges, instance.graph.directed),
        cost=tuple(instance.node_costs[v] for v in new_to_old),
        demand=tuple(demand),
        supply=tuple(supply),
        capacity=tuple(instance.capacity[v] for v in new_to_old),
    )
    return ssl, RootedReductionMap(s, tuple(tuple(g) for g in groups))


# ---------------------------------------------------------------------------
# Directed node-split


@dataclass(frozen=True)
class NodeSplitMap:
    n: int

    def entry(self, v: int) -> int:
        return 2 * v

    def exit(self, v: int) -> int:
        return 2 * v + 1

    def push_sources(self, sources: Iterable[int]) -> frozenset[int]:
        return frozenset(2 * v + 1 for v in sources)

    def pull_sources(self, split_sources: Iterable[int]) -> frozenset[int]:
        return frozenset(w // 2 for w in split_sources if w % 2 == 1)


def node_split_reduction(graph: Graph, cost: Sequence[Num], demand: Sequence[int]
                         ) -> tuple[SSLInstance, NodeSplitMap]:
    """Directed node-connectivity source location as edge connectivity:
    each node becomes an entry/exit pair joined by one arc, exit nodes keep
    the cost and demand, entry nodes get infinite cost and no demand.

    Feasibility tables of S versus its exit image agree for 0/1 demands
    (a single splitter arc caps what a higher demand can receive, so the
    equivalence is only reliable below demand 2)."""
    if not graph.directed:
        raise InstanceError("the node-split reduction is for directed graphs")
    if len(cost) != graph.n or len(demand) != graph.n:
        raise InstanceError("cost and demand must have one entry per node")
    m = NodeSplitMap(graph.n)
    edges = [(m.entry(v), m.exit(v)) for v in range(graph.n)]
    edges.extend((m.exit(u), m.entry(v)) for u, v in graph.edges)
    split = Graph(2 * graph.n, tuple(edges), True)
    n2 = 2 * graph.n
    new_cost = [INF] * n2
    new_demand = [0] * n2
    for v in range(graph.n):
        new_cost[m.exit(v)] = cost[v]
        new_demand[m.exit(v)] = demand[v]
    ssl = SSLInstance(
        graph=split,
        cost=tuple(new_cost),
        demand=tuple(new_demand),
        supply=(INF,) * n2,
        capacity=(INF,) * n2,
    )
    return ssl, m


# ---------------------------------------------------------------------------
# Set-cover gadget


@dataclass(frozen=True)
class SetCoverGadget:
    """Bookkeeping for the hard-instance generator: which candidate index
    buys which set, where the element copies live, and the embedded
    set-cover facts when they are small enough to brute-force."""

    n_sets: int
    n_elements: int
    copies: int
    set_candidate: tuple[int, ...]
    element_nodes: tuple[tuple[int, ...], ...]  # per copy, the node ids
    cover_optimum: Optional[int]
    uncoverable: tuple[int, ...] = field(default_factory=tuple)


def set_cover_optimum(sets: Sequence[Iterable[int]], n_elements: int) -> Optional[int]:
    """Exhaustive minimum set cover; None when some element is uncoverable."""
    masks = []
    for s in sets:
        mask = 0
        for e in s:
            if not (0 <= e < n_elements):
                raise InstanceError(f"element {e} out of range")
            mask |= 1 << e
        masks.append(mask)
    full = (1 << n_elements) - 1
    union = 0
    for mk in masks:
        union |= mk
    if union != full:
        return None
    best = len(masks)
    for pick in range(1 << len(masks)):
        got = 0
        size = 0
        for i, mk in enumerate(masks):
            if pick >> i & 1:
                got |= mk
                size += 1
        if got == full and size < best:
            best = size
    return best


def set_cover_gadget(sets: Sequence[Iterable[int]], n_elements: int,
                     copies: Optional[int] = None, cost_mode: str = "edge",
                     brute_force_cover: bool = True) -> tuple[SNAInstance, SetCoverGadget]:
    """Directed rooted augmentation instance whose cheap solutions are set
    covers.  The element side is replicated `copies` extra times (default
    (|sets|+|elements|)^2) so covering elements one by one is hopeless;
    every candidate edge leaves a new root and costs one unit."""
    sets = [sorted(set(s)) for s in sets]
    if not sets or n_elements <= 0:
        raise InstanceError("the gadget needs at least one set and one element")
    a_count, b_count = len(sets), n_elements
    if copies is None:
        copies = (a_count + b_count) ** 2
    if copies < 0:
        raise InstanceError("the copy count cannot be negative")
    total_copies = copies + 1
    element_nodes = tuple(
        tuple(a_count + c * b_count + j for j in range(b_count)) for c in range(total_copies)
    )
    root = a_count + total_copies * b_count
    edges = []
    for i, members in enumerate(sets):
        for e in members:
            for c in range(total_copies):
                edges.append((i, element_nodes[c][e]))
    graph = Graph(root + 1, tuple(edges), True)
    candidates = tuple(
        CandidateEdge(root, v, 1 if cost_mode == "edge" else 0) for v in range(root)
    )
    demands = tuple(
        Demand(root, node, 1) for copy in element_nodes for node in copy
    )
    node_costs = None
    if cost_mode == "node":
        node_costs = tuple([1] * root + [0])
    instance = SNAInstance(
        graph=graph,
        capacity=(INF,) * (root + 1),
        candidates=candidates,
        demands=demands,
        cost_mode=cost_mode,
        node_costs=node_costs,
    )
    covered = set()
    for members in sets:
        covered.update(members)
    uncoverable = tuple(e for e in range(n_elements) if e not in covered)
    optimum = None
    if brute_force_cover and a_count <= 20:
        optimum = set_cover_optimum(sets, n_elements)
    info = SetCoverGadget(
        n_sets=a_count,
        n_elements=b_count,
        copies=copies,
        set_candidate=tuple(range(a_count)),
        element_nodes=element_nodes,
        cover_optimum=optimum,
        uncoverable=uncoverable,
    )
    return instance, info
