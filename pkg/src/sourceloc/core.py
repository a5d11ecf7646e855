"""Graph, instance, and biset domain types plus the biset algebra.

Nodes are dense 0-based indices.  Parallel edges are first-class: a graph's
edge list is a multiset of ordered pairs (stored once each; undirected
semantics are applied by the operations, not by duplicating storage).
All types are immutable after construction and safe to share.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .values import INF, Num, as_exact, is_finite


class InstanceError(ValueError):
    """Raised when an instance violates a structural precondition."""


Edge = tuple[int, int]


@dataclass(frozen=True)
class Graph:
    """A directed or undirected multigraph without self-loops."""

    n: int
    edges: tuple[Edge, ...]
    directed: bool

    def __post_init__(self):
        if self.n <= 0:
            raise InstanceError("graph needs at least one node")
        object.__setattr__(self, "edges", tuple((int(u), int(v)) for u, v in self.edges))
        for u, v in self.edges:
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise InstanceError(f"edge ({u},{v}) leaves the node range 0..{self.n - 1}")
            if u == v:
                raise InstanceError(f"self-loop at node {u}")

    def with_edges(self, extra: Iterable[Edge]) -> "Graph":
        """A new graph with `extra` appended to the edge multiset."""
        return Graph(self.n, self.edges + tuple(extra), self.directed)

    def edge_multiplicity(self) -> dict[Edge, int]:
        """Multiplicity per parallel class (unordered key when undirected)."""
        counts: dict[Edge, int] = {}
        for u, v in self.edges:
            key = (u, v) if self.directed else (min(u, v), max(u, v))
            counts[key] = counts.get(key, 0) + 1
        return counts


def check_capacities(q: Sequence[Num], n: int) -> tuple[Num, ...]:
    q = tuple(as_exact(x) for x in q)
    if len(q) != n:
        raise InstanceError(f"expected {n} capacities, got {len(q)}")
    for v, qv in enumerate(q):
        if qv != INF and (not isinstance(qv, int) or qv < 1):
            raise InstanceError(f"capacity of node {v} must be a positive integer or inf, got {qv!r}")
    return q


@dataclass(frozen=True)
class SSLInstance:
    """Source-location instance: pick a cheap source set S so that the
    (supply, capacity)-flow into every node v reaches its demand.

    Per node: cost, demand, supply (how much v can inject when chosen),
    capacity (how much may transit v), and an optional per-node bound on
    the cheapest flow cost (only meaningful when `edge_costs` is set).
    """

    graph: Graph
    cost: tuple[Num, ...]
    demand: tuple[int, ...]
    supply: tuple[Num, ...]
    capacity: tuple[Num, ...]
    edge_costs: Optional[tuple[Num, ...]] = None
    flow_cost_bound: Optional[tuple[Num, ...]] = None

    def __post_init__(self):
        n = self.graph.n
        object.__setattr__(self, "cost", tuple(as_exact(c) for c in self.cost))
        object.__setattr__(self, "supply", tuple(as_exact(p) for p in self.supply))
        object.__setattr__(self, "capacity", check_capacities(self.capacity, n))
        object.__setattr__(self, "demand", tuple(int(d) for d in self.demand))
        for name, seq in (("cost", self.cost), ("demand", self.demand), ("supply", self.supply)):
            if len(seq) != n:
                raise InstanceError(f"{name} has {len(seq)} entries for {n} nodes")
        for v, c in enumerate(self.cost):
            if c != INF and c < 0:
                raise InstanceError(f"cost of node {v} is negative")
        k = self.max_demand
        for v in range(n):
            if self.demand[v] < 0:
                raise InstanceError(f"demand of node {v} is negative")
            p, q = self.supply[v], self.capacity[v]
            if p != INF and (not isinstance(p, int) or p < 0):
                raise InstanceError(f"supply of node {v} must be a nonnegative integer or inf")
            if is_finite(p) and is_finite(q) and q > p:
                raise InstanceError(f"node {v} has capacity {q} above its supply {p}")
            if is_finite(p) and p > k and k > 0:
                # supplies above the maximum demand never matter; keep instances canonical
                raise InstanceError(f"node {v} has supply {p} above the maximum demand {k}")
        if self.edge_costs is not None:
            ec = tuple(as_exact(c) for c in self.edge_costs)
            if len(ec) != len(self.graph.edges):
                raise InstanceError("edge_costs must match the edge list one-to-one")
            for i, c in enumerate(ec):
                if c != INF and c < 0:
                    raise InstanceError(f"cost of edge {i} is negative")
            object.__setattr__(self, "edge_costs", ec)
        if self.flow_cost_bound is not None:
            fb = tuple(as_exact(b) for b in self.flow_cost_bound)
            if len(fb) != n:
                raise InstanceError("flow_cost_bound needs one entry per node")
            if self.edge_costs is None:
                raise InstanceError("flow-cost bounds need edge costs")
            object.__setattr__(self, "flow_cost_bound", fb)

    @property
    def max_demand(self) -> int:
        return max(self.demand, default=0)


@dataclass(frozen=True)
class CandidateEdge:
    u: int
    v: int
    cost: Num = 0

    def __post_init__(self):
        object.__setattr__(self, "cost", as_exact(self.cost))

    @property
    def pair(self) -> Edge:
        return (self.u, self.v)


@dataclass(frozen=True)
class Demand:
    u: int
    v: int
    r: int


@dataclass(frozen=True)
class SNAInstance:
    """Augmentation instance: buy a subset of the candidate edges so the
    capacitated connectivity of every demand pair meets its requirement.

    `candidates` lists every purchasable copy individually (parallel copies
    repeat).  Costs are per copy in edge mode and per node in node mode.
    """

    graph: Graph
    capacity: tuple[Num, ...]
    candidates: tuple[CandidateEdge, ...]
    demands: tuple[Demand, ...]
    cost_mode: str
    node_costs: Optional[tuple[Num, ...]] = None

    def __post_init__(self):
        n = self.graph.n
        object.__setattr__(self, "capacity", check_capacities(self.capacity, n))
        object.__setattr__(self, "candidates", tuple(self.candidates))
        object.__setattr__(self, "demands", tuple(self.demands))
        if self.cost_mode not in ("edge", "node"):
            raise InstanceError(f"cost_mode must be 'edge' or 'node', got {self.cost_mode!r}")
        for e in self.candidates:
            if not (0 <= e.u < n and 0 <= e.v < n):
                raise InstanceError(f"candidate edge ({e.u},{e.v}) out of range")
            if e.u == e.v:
                raise InstanceError("candidate self-loop")
            if e.cost != INF and e.cost < 0:
                raise InstanceError("negative candidate cost")
        seen = set()
        for d in self.demands:
            if not (0 <= d.u < n and 0 <= d.v < n) or d.u == d.v:
                raise InstanceError(f"bad demand pair ({d.u},{d.v})")
            if d.r < 1:
                raise InstanceError(f"requirement of demand ({d.u},{d.v}) must be positive")
            key = (d.u, d.v) if self.graph.directed else (min(d.u, d.v), max(d.u, d.v))
            if key in seen:
                raise InstanceError(f"duplicate demand pair ({d.u},{d.v})")
            seen.add(key)
        if self.demands and self.p_max > self.max_requirement:
            raise InstanceError(
                f"candidate parallel class of size {self.p_max} exceeds the "
                f"maximum requirement {self.max_requirement}"
            )
        if self.cost_mode == "node":
            if self.node_costs is None:
                raise InstanceError("node cost mode needs node_costs")
            nc = tuple(as_exact(c) for c in self.node_costs)
            if len(nc) != n:
                raise InstanceError("node_costs needs one entry per node")
            for v, c in enumerate(nc):
                if c != INF and c < 0:
                    raise InstanceError(f"cost of node {v} is negative")
            object.__setattr__(self, "node_costs", nc)

    @property
    def max_requirement(self) -> int:
        return max((d.r for d in self.demands), default=0)

    @property
    def p_max(self) -> int:
        """Largest parallel class in the candidate multiset."""
        counts: dict[Edge, int] = {}
        for e in self.candidates:
            key = (e.u, e.v) if self.graph.directed else (min(e.u, e.v), max(e.u, e.v))
            counts[key] = counts.get(key, 0) + 1
        return max(counts.values(), default=0)

    @property
    def total_requirement(self) -> int:
        return sum(d.r for d in self.demands)

    @property
    def star_center(self) -> Optional[int]:
        """Common endpoint of all candidate edges, or None if F is no star.
        Directed stars prefer a common tail; ambiguous stars prefer the
        demand-side center."""
        cs = _common_set([e.pair for e in self.candidates])
        if cs is None:
            ds = _common_set([(d.u, d.v) for d in self.demands])
            return min(ds) if ds else None
        if not cs:
            return None
        if self.graph.directed:
            tails = {e.u for e in self.candidates}
            if len(tails) == 1 and next(iter(tails)) in cs:
                return next(iter(tails))
        ds = _common_set([(d.u, d.v) for d in self.demands]) or set()
        both = cs & ds
        return min(both) if both else min(cs)

    @property
    def demand_center(self) -> Optional[int]:
        """Common endpoint of all demand pairs, or None (the rooted case)."""
        ds = _common_set([(d.u, d.v) for d in self.demands])
        if not ds:
            return None
        if self.graph.directed:
            tails = {d.u for d in self.demands}
            if len(tails) == 1 and next(iter(tails)) in ds:
                return next(iter(tails))
        cs = _common_set([e.pair for e in self.candidates]) or set()
        both = ds & cs
        return min(both) if both else min(ds)

    def candidate_edges(self, picks: Iterable[int]) -> tuple[Edge, ...]:
        return tuple(self.candidates[i].pair for i in picks)

    def pick_cost(self, picks: Iterable[int]) -> Num:
        """Cost of a candidate-index multiset under the instance's cost mode.

        Node mode follows the node-cost convention for edge sets: the cost
        of the set of endnodes, each distinct endpoint counted once.
        """
        picks = list(picks)
        if self.cost_mode == "edge":
            return sum((self.candidates[i].cost for i in picks), 0)
        touched = set()
        for i in picks:
            touched.add(self.candidates[i].u)
            touched.add(self.candidates[i].v)
        return sum((self.node_costs[v] for v in sorted(touched)), 0)


def _common_set(pairs: list[Edge]) -> Optional[set[int]]:
    """Endpoints shared by every pair; None for an empty pair list."""
    if not pairs:
        return None
    common = {pairs[0][0], pairs[0][1]}
    for u, v in pairs[1:]:
        common &= {u, v}
        if not common:
            break
    return common


# ---------------------------------------------------------------------------
# Bisets


@dataclass(frozen=True)
class Biset:
    """Nested pair of node sets; the boundary is outer minus inner."""

    inner: frozenset[int]
    outer: frozenset[int]

    def __post_init__(self):
        object.__setattr__(self, "inner", frozenset(self.inner))
        object.__setattr__(self, "outer", frozenset(self.outer))
        if not self.inner <= self.outer:
            raise InstanceError("biset inner part must be contained in the outer part")

    @property
    def boundary(self) -> frozenset[int]:
        return self.outer - self.inner

    def contains(self, other: "Biset") -> bool:
        """Biset inclusion: both parts nested."""
        return other.inner <= self.inner and other.outer <= self.outer

    def reversed(self, n: int) -> "Biset":
        """Complement biset (V minus outer, V minus inner) on universe 0..n-1."""
        universe = frozenset(range(n))
        return Biset(universe - self.outer, universe - self.inner)


def biset_intersect(a: Biset, b: Biset) -> Biset:
    return Biset(a.inner & b.inner, a.outer & b.outer)


def biset_union(a: Biset, b: Biset) -> Biset:
    return Biset(a.inner | b.inner, a.outer | b.outer)


def biset_minus(a: Biset, b: Biset) -> Biset:
    return Biset(a.inner - b.outer, a.outer - b.inner)


def covers(edge: Edge, b: Biset, directed: bool = False) -> bool:
    """Does the edge cross from the inner part to outside the outer part?

    Directed edges must leave the inner part (tail inside, head beyond the
    outer part); undirected edges may cross in either orientation.  An edge
    touching the boundary never covers.
    """
    u, v = edge
    if u in b.inner and v not in b.outer:
        return True
    if not directed and v in b.inner and u not in b.outer:
        return True
    return False


def delta(edges: Iterable[Edge], b: Biset, directed: bool = False) -> tuple[Edge, ...]:
    """The sub-multiset of edges covering the biset, multiplicity kept."""
    return tuple(e for e in edges if covers(e, b, directed))


def delta_count(edges: Iterable[Edge], b: Biset, directed: bool = False) -> int:
    return sum(1 for e in edges if covers(e, b, directed))


def d_dependent(a: Biset, b: Biset, demand_edges: Iterable[Edge], directed: bool = False) -> bool:
    """True iff some demand edge covering `a` avoids the boundary of `b`
    while some demand edge covering `b` avoids the boundary of `a`."""
    demand_edges = tuple(demand_edges)
    a_ok = any(
        covers(e, a, directed) and not (set(e) & b.boundary) for e in demand_edges
    )
    if not a_ok:
        return False
    return any(covers(e, b, directed) and not (set(e) & a.boundary) for e in demand_edges)


def t_dependent(a: Biset, b: Biset, terminals: frozenset[int] | set[int]) -> bool:
    terminals = frozenset(terminals)
    if a.inner & terminals <= b.boundary:
        return False
    if b.inner & terminals <= a.boundary:
        return False
    return True


@dataclass(frozen=True)
class BisetFamily:
    """Explicit finite biset family over the universe 0..n-1."""

    n: int
    members: frozenset[Biset] = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "members", frozenset(self.members))
        for b in self.members:
            if any(not (0 <= v < self.n) for v in b.outer):
                raise InstanceError("biset leaves the family universe")

    def __iter__(self):
        return iter(self.members)

    def __len__(self):
        return len(self.members)

    def __contains__(self, b: Biset) -> bool:
        return b in self.members

    @property
    def max_boundary(self) -> int:
        """gamma: the largest boundary size over the members."""
        return max((len(b.boundary) for b in self.members), default=0)

    def is_symmetric(self) -> bool:
        return all(b.reversed(self.n) in self.members for b in self.members)


def minimal_members(family: BisetFamily) -> BisetFamily:
    """The inclusion-minimal members (an antichain under biset inclusion)."""
    keep = []
    for b in family.members:
        if not any(other != b and b.contains(other) for other in family.members):
            keep.append(b)
    return BisetFamily(family.n, frozenset(keep))


def _uncross_holds(family: BisetFamily, a: Biset, b: Biset) -> bool:
    first = biset_intersect(a, b) in family and biset_union(a, b) in family
    if first:
        return True
    return biset_minus(a, b) in family and biset_minus(b, a) in family


def is_d_uncrossable(family: BisetFamily, demand_edges: Iterable[Edge], directed: bool = False) -> bool:
    """Quadratic exhaustive check: the demand edges cover every member, and
    every dependent pair uncrosses (intersection+union or both differences
    stay in the family)."""
    demand_edges = tuple(demand_edges)
    members = sorted(family.members, key=_biset_key)
    for b in members:
        if not any(covers(e, b, directed) for e in demand_edges):
            return False
    for a, b in itertools.combinations(members, 2):
        if d_dependent(a, b, demand_edges, directed) and not _uncross_holds(family, a, b):
            return False
    return True


def is_t_uncrossable(family: BisetFamily, terminals: Iterable[int]) -> bool:
    terminals = frozenset(terminals)
    members = sorted(family.members, key=_biset_key)
    for b in members:
        if not (b.inner & terminals):
            return False
    for a, b in itertools.combinations(members, 2):
        if t_dependent(a, b, terminals) and not _uncross_holds(family, a, b):
            return False
    return True


def _biset_key(b: Biset):
    return (sorted(b.inner), sorted(b.outer))


def all_bisets(n: int, limit: int = 12):
    """Every biset on 0..n-1 (3^n of them): each node is inside, on the
    boundary, or outside.  Refuses universes past `limit`."""
    if n > limit:
        raise InstanceError(f"enumerating 3^{n} bisets exceeds the cap of {limit} nodes")
    for assignment in itertools.product((0, 1, 2), repeat=n):
        inner = frozenset(v for v, a in enumerate(assignment) if a == 0)
        boundary = frozenset(v for v, a in enumerate(assignment) if a == 1)
        yield Biset(inner, inner | boundary)
