"""Undirected augmentation through biset covers.

A demand pair is deficient at a biset when the requirement exceeds the
biset's cut capacity (boundary capacities plus crossing edges); an
augmentation is feasible exactly when every biset's deficiency is covered.
Single-step instances (every requirement one above the current pair
connectivity) have 0/1 deficiencies, and the tight (deficiency-one) family
is covered by a star on a transversal of its minimal inner parts.  The
sequential solver lifts this one step at a time to general requirements.

Everything here is undirected; demand-pair connectivity exempts both
endpoints, matching the cut family the bisets range over.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .bounds import sequential_edge_bound, sequential_node_bound
from .core import (Biset, BisetFamily, Demand, Graph, InstanceError,
                   SNAInstance, SSLInstance, all_bisets, covers, delta_count,
                   minimal_members)
from .flow import lambda_q_pair, max_flow, split_transform
from .submodular import SolveResult, star_leaf, sna_feasible
from .values import INF, Num, is_finite


def _require_undirected(instance: SNAInstance):
    if instance.graph.directed:
        raise InstanceError("biset covering works on undirected instances")


def biset_requirement(instance: SNAInstance, b: Biset) -> int:
    """Largest requirement among the demand pairs the biset separates."""
    best = 0
    for d in instance.demands:
        if covers((d.u, d.v), b, instance.graph.directed) and d.r > best:
            best = d.r
    return best


def deficiency(instance: SNAInstance, b: Biset) -> int:
    """How many cover edges the biset still needs: requirement minus
    boundary capacity minus crossing base edges, floored at zero."""
    r = biset_requirement(instance, b)
    if r == 0:
        return 0
    q_gamma: Num = 0
    for w in b.boundary:
        q_gamma += instance.capacity[w]
    if not is_finite(q_gamma):
        return 0
    crossing = delta_count(instance.graph.edges, b, instance.graph.directed)
    return max(r - (q_gamma + crossing), 0)


def validate_single_step(instance: SNAInstance):
    """Single-step instances require each demand exactly one unit above its
    current pair connectivity."""
    _require_undirected(instance)
    for d in instance.demands:
        lam = lambda_q_pair(instance.graph, instance.capacity, d.u, d.v, cap=d.r + 1)
        if d.r != lam + 1:
            raise InstanceError(
                f"demand ({d.u},{d.v}) requires {d.r} but the current pair "
                f"connectivity is {lam}; single-step solving needs r = current + 1"
            )


def tight_bisets(instance: SNAInstance, limit: int = 12) -> BisetFamily:
    """Every deficiency-one biset, by full 3^n enumeration (the reference
    oracle; `limit` guards the blow-up)."""
    _require_undirected(instance)
    members = [b for b in all_bisets(instance.graph.n, limit) if deficiency(instance, b) == 1]
    return BisetFamily(instance.graph.n, frozenset(members))


def min_cut_biset(graph: Graph, q: Sequence[Num], u: int, v: int) -> Biset:
    """The inclusion-minimal minimum-cut biset separating v from u (v on the
    inner side), read off residual reachability toward the sink."""
    net = split_transform(graph, q, keep={u, v})
    result = max_flow(net, net.in_of[u], net.in_of[v])
    side = result.sink_side()
    inner = {v}
    boundary = set()
    for w in range(graph.n):
        if w in (u, v):
            continue
        w_in, w_out = net.in_of[w], net.out_of[w]
        if w_in in side and w_out in side:
            inner.add(w)
        elif w_out in side:
            boundary.add(w)
        else:
            assert w_in not in side, "residual sink side split a node inconsistently"
    assert net.in_of[u] not in side, "source ended up on the sink side"
    return Biset(frozenset(inner), frozenset(inner | boundary))


def minimal_tight_bisets(instance: SNAInstance, method: str = "fast",
                         limit: int = 12) -> BisetFamily:
    """Inclusion-minimal tight bisets.

    The fast path takes, per demand, the two one-sided minimal min-cut
    bisets (each side's tight bisets form a lattice, so the residual cut is
    its unique minimum) and prunes to an antichain; enumeration stays
    available as the oracle it is checked against.
    """
    if method == "enumerate":
        return minimal_members(tight_bisets(instance, limit))
    if method != "fast":
        raise InstanceError(f"unknown method {method!r}")
    validate_single_step(instance)
    candidates = set()
    for d in instance.demands:
        candidates.add(min_cut_biset(instance.graph, instance.capacity, d.u, d.v))
        candidates.add(min_cut_biset(instance.graph, instance.capacity, d.v, d.u))
    family = BisetFamily(instance.graph.n, frozenset(candidates))
    return minimal_members(family)


def _rooted_minimal_tight(instance: SNAInstance, root: int) -> BisetFamily:
    """Minimal members of the subfamily keeping the root beyond the outer
    part: only the leaf-side cut per demand qualifies."""
    candidates = set()
    for d in instance.demands:
        leaf = d.v if d.u == root else d.u
        candidates.add(min_cut_biset(instance.graph, instance.capacity, root, leaf))
    return minimal_members(BisetFamily(instance.graph.n, frozenset(candidates)))


def menger_feasible(instance: SNAInstance, picks: Iterable[int], method: str = "flow",
                    limit: int = 12) -> tuple[bool, Optional[Biset]]:
    """Is the picked edge set a feasible augmentation?  `flow` recomputes
    pair connectivities and extracts a violated biset from the residual
    cut; `enumerate` scans every biset for a deficiency the picks miss."""
    _require_undirected(instance)
    picks = tuple(picks)
    chosen_edges = instance.candidate_edges(picks)
    if method == "flow":
        graph = instance.graph.with_edges(chosen_edges)
        for d in instance.demands:
            lam = lambda_q_pair(graph, instance.capacity, d.u, d.v, cap=d.r)
            if lam < d.r:
                witness = min_cut_biset(graph, instance.capacity, d.u, d.v)
                return False, witness
        return True, None
    if method != "enumerate":
        raise InstanceError(f"unknown method {method!r}")
    for b in all_bisets(instance.graph.n, limit):
        need = deficiency(instance, b)
        if need and delta_count(chosen_edges, b, False) < need:
            return False, b
    return True, None


# ---------------------------------------------------------------------------
# Transversals


@dataclass(frozen=True)
class TransversalProblem:
    n: int
    hyperedges: tuple[frozenset[int], ...]
    costs: tuple[Num, ...]

    def __post_init__(self):
        for h in self.hyperedges:
            if not h:
                raise InstanceError("empty hyperedge: no transversal exists")
            if any(not (0 <= v < self.n) for v in h):
                raise InstanceError("hyperedge leaves the universe")

    @property
    def max_degree(self) -> int:
        deg = [0] * self.n
        for h in self.hyperedges:
            for v in h:
                deg[v] += 1
        return max(deg, default=0)


@dataclass(frozen=True)
class TransversalResult:
    nodes: tuple[int, ...]
    cost: Num
    feasible: bool
    blocked: Optional[frozenset[int]] = None


def greedy_transversal(problem: TransversalProblem) -> TransversalResult:
    """Pick the node hitting the most uncovered hyperedges per unit cost
    (free useful nodes first, lowest index on ties) until everything is
    hit.  Cost stays within H(max degree) of the optimal transversal."""
    uncovered = set(range(len(problem.hyperedges)))
    chosen: list[int] = []
    total: Num = 0
    while uncovered:
        best = None
        for v in range(problem.n):
            if v in chosen or problem.costs[v] == INF:
                continue
            hits = sum(1 for i in uncovered if v in problem.hyperedges[i])
            if hits == 0:
                continue
            ratio = INF if problem.costs[v] == 0 else Fraction(hits) / Fraction(problem.costs[v])
            if best is None or ratio > best[0]:
                best = (ratio, v, hits)
        if best is None:
            blocked = problem.hyperedges[min(uncovered)]
            return TransversalResult(tuple(chosen), total, False, blocked)
        _, v, _ = best
        chosen.append(v)
        total += problem.costs[v]
        uncovered = {i for i in uncovered if v not in problem.hyperedges[i]}
    return TransversalResult(tuple(sorted(chosen)), total, True)


def star_cover_from_transversal(instance: SNAInstance, transversal: Iterable[int],
                                family: BisetFamily,
                                pool: Optional[Sequence[int]] = None) -> tuple[int, ...]:
    """Cheapest star edge into each transversal node; valid when the star
    center stays off every boundary of a symmetric family, or beyond every
    outer part.  The offending biset is named when neither holds."""
    a = instance.star_center
    if a is None:
        raise InstanceError("star cover needs a star candidate set")
    condition_outside = all(a not in b.outer for b in family)
    if not condition_outside:
        if not family.is_symmetric():
            bad = next(b for b in sorted(family, key=lambda x: sorted(x.inner)) if a in b.outer)
            raise InstanceError(f"star center {a} is inside the outer part of {bad} "
                                "and the family is not symmetric")
        for b in family:
            if a in b.boundary:
                raise InstanceError(f"star center {a} lies on the boundary of {b}; "
                                    "a star cover cannot cover this family")
    pool = tuple(pool) if pool is not None else tuple(range(len(instance.candidates)))
    picks = []
    for v in sorted(set(transversal)):
        best = None
        for i in pool:
            if star_leaf(instance, i) != v:
                continue
            if best is None or instance.candidates[i].cost < instance.candidates[best].cost:
                best = i
        if best is None:
            raise InstanceError(f"no candidate edge reaches transversal node {v}")
        picks.append(best)
    return tuple(picks)


# ---------------------------------------------------------------------------
# Single-step solver


@dataclass(frozen=True)
class StageReport:
    stage: int
    demands: tuple[tuple[int, int], ...]
    family_size: int
    minimal_size: int
    gamma: int
    degree: int
    rooted: bool
    picks: tuple[int, ...]
    cost: Num
    degree_cap: int


def _node_price(instance: SNAInstance, pool: Sequence[int]) -> list[Num]:
    """Transversal prices: cheapest usable star edge per leaf (edge mode) or
    the node's own cost provided an edge into it remains (node mode)."""
    price: list[Num] = [INF] * instance.graph.n
    for i in pool:
        leaf = star_leaf(instance, i)
        if instance.cost_mode == "edge":
            price[leaf] = min(price[leaf], instance.candidates[i].cost)
        else:
            price[leaf] = min(price[leaf], instance.node_costs[leaf])
    return price


def solve_star_dsna(instance: SNAInstance, pool: Optional[Sequence[int]] = None,
                    method: str = "enumerate", limit: int = 12,
                    stage: int = 1) -> tuple[Optional[StageReport], Optional[Biset]]:
    """Cover the tight family of a single-step instance with a star.

    Covers the subfamily whose outer parts avoid the star center (its
    transversal plus the star covers everything, by symmetry); reports the
    realized boundary size and hypergraph degree next to the cap the stage
    index implies.  Returns (report, None) or (None, witness biset) when
    some tight biset cannot be covered."""
    _require_undirected(instance)
    a = instance.star_center
    if a is None:
        raise InstanceError("single-step solving needs a star candidate set")
    validate_single_step(instance)
    pool = tuple(pool) if pool is not None else tuple(range(len(instance.candidates)))
    rooted = instance.demand_center == a and instance.demands != ()
    if not instance.demands:
        return StageReport(stage, (), 0, 0, 0, 0, rooted, (), 0, 1), None
    if method == "fast":
        if not rooted:
            raise InstanceError("the fast family path needs a rooted instance; "
                                "use enumeration for general demand sets")
        cover_family = _rooted_minimal_tight(instance, a)
        full = None
    else:
        full = tight_bisets(instance, limit)
        for b in full:
            if a in b.boundary:
                raise InstanceError(f"star center {a} lies on the boundary of tight biset {b}")
        acceptable = BisetFamily(instance.graph.n,
                                 frozenset(b for b in full if a not in b.outer))
        cover_family = minimal_members(acceptable)
    hyperedges = sorted({b.inner for b in cover_family}, key=lambda s: (len(s), sorted(s)))
    gamma = cover_family.max_boundary
    for h in hyperedges:
        if not h:
            witness = next(b for b in cover_family if b.inner == h)
            return None, witness
    prices = _node_price(instance, pool)
    problem = TransversalProblem(instance.graph.n, tuple(hyperedges), tuple(prices))
    degree = problem.max_degree
    outcome = greedy_transversal(problem)
    if not outcome.feasible:
        witness = next(b for b in cover_family if b.inner == outcome.blocked)
        return None, witness
    picks = star_cover_from_transversal(instance, outcome.nodes, cover_family, pool)
    check_family = full if full is not None else cover_family
    for b in check_family:
        if delta_count(instance.candidate_edges(picks), b, False) < 1:
            raise AssertionError(f"star cover missed tight biset {b}")
    report = StageReport(
        stage=stage,
        demands=tuple((d.u, d.v) for d in instance.demands),
        family_size=len(full) if full is not None else len(cover_family),
        minimal_size=len(cover_family),
        gamma=gamma,
        degree=degree,
        rooted=rooted,
        picks=picks,
        cost=instance.pick_cost(picks),
        degree_cap=(2 * gamma + 1) if rooted else (4 * gamma + 1) ** 2,
    )
    return report, None


# ---------------------------------------------------------------------------
# Sequential multi-stage solver


def solve_star_sna_sequential(instance: SNAInstance, method: str = "enumerate",
                              limit: int = 12) -> SolveResult:
    """Raise every demand to its requirement one connectivity unit per
    stage: stage L serves the demands lagging exactly k-L+1 units, covering
    that stage's tight family with star edges drawn from the remaining
    candidate pool."""
    _require_undirected(instance)
    a = instance.star_center
    if a is None:
        raise InstanceError("the sequential solver needs a star candidate set")
    feasible_at_full, witness = sna_feasible(instance, range(len(instance.candidates)))
    k = instance.max_requirement
    rooted = instance.demand_center == a and instance.demands != ()
    if instance.cost_mode == "edge":
        bound = sequential_edge_bound(k, rooted) if k else Fraction(0)
        formula = "sum_L H(deg cap)/(k-L+1)"
    else:
        bound = sequential_node_bound(k, max(instance.p_max, 1), rooted) if k else Fraction(0)
        formula = "sum_L H(deg cap)*min(p_max/(k-L+1),1)"
    if not feasible_at_full:
        return SolveResult(
            solver="seq-biset", feasible=False, picks=(), nodes=(), cost=INF,
            bound_formula=formula, bound_value=bound, certificate=witness,
        )
    pool = set(range(len(instance.candidates)))
    taken: list[int] = []
    stages: list[StageReport] = []
    graph = instance.graph
    for stage in range(1, k + 1):
        lagging = []
        for d in instance.demands:
            lam = lambda_q_pair(graph, instance.capacity, d.u, d.v, cap=d.r)
            if lam == d.r - k + stage - 1:
                lagging.append(d)
        if not lagging:
            stages.append(StageReport(stage, (), 0, 0, 0, 0, rooted, (), 0, 1))
            continue
        stage_pool = _cheapest_copy_per_class(instance, pool)
        stage_instance = SNAInstance(
            graph=graph,
            capacity=instance.capacity,
            candidates=tuple(instance.candidates[i] for i in stage_pool),
            demands=tuple(
                Demand(d.u, d.v, lambda_q_pair(graph, instance.capacity, d.u, d.v) + 1)
                for d in lagging
            ),
            cost_mode=instance.cost_mode,
            node_costs=instance.node_costs,
        )
        report, bad = solve_star_dsna(stage_instance, method=method, limit=limit, stage=stage)
        if report is None:
            return SolveResult(
                solver="seq-biset", feasible=False, picks=tuple(taken), nodes=(), cost=INF,
                bound_formula=formula, bound_value=bound, certificate=bad,
                notes=(f"stage {stage} cannot cover its tight family",),
            )
        chosen = tuple(stage_pool[i] for i in report.picks)
        report = StageReport(stage, report.demands, report.family_size, report.minimal_size,
                             report.gamma, report.degree, report.rooted, chosen,
                             instance.pick_cost(chosen), report.degree_cap)
        stages.append(report)
        taken.extend(chosen)
        pool.difference_update(chosen)
        graph = graph.with_edges(instance.candidate_edges(chosen))
        for d in instance.demands:
            lam = lambda_q_pair(graph, instance.capacity, d.u, d.v, cap=d.r)
            assert lam >= d.r - k + stage, (
                f"stage {stage} left demand ({d.u},{d.v}) behind schedule")
    ok, bad_demand = sna_feasible(instance, taken)
    if not ok:
        raise AssertionError(f"sequential solution failed final verification at {bad_demand}")
    picks = tuple(sorted(taken))
    return SolveResult(
        solver="seq-biset",
        feasible=True,
        picks=picks,
        nodes=tuple(sorted({star_leaf(instance, i) for i in picks})),
        cost=instance.pick_cost(picks),
        bound_formula=formula,
        bound_value=bound,
        details={"stages": tuple(stages), "rooted": rooted, "k": k},
    )


def _cheapest_copy_per_class(instance: SNAInstance, pool: set[int]) -> tuple[int, ...]:
    """One copy per parallel class: a single stage never buys two parallel
    edges, so offering the cheapest remaining copy loses nothing."""
    best: dict[tuple[int, int], int] = {}
    for i in sorted(pool):
        e = instance.candidates[i]
        key = (min(e.u, e.v), max(e.u, e.v))
        if key not in best or e.cost < instance.candidates[best[key]].cost:
            best[key] = i
    return tuple(best[key] for key in sorted(best))


def solve_ssl_sequential(ssl: SSLInstance, method: str = "enumerate",
                         limit: int = 12) -> SolveResult:
    """Undirected source location by the staged rooted augmentation."""
    from .reductions import ssl_to_rooted_sna

    if ssl.graph.directed:
        raise InstanceError("the sequential solver is for undirected instances")
    sna, rmap = ssl_to_rooted_sna(ssl)
    inner = solve_star_sna_sequential(sna, method=method, limit=limit)
    if not inner.feasible:
        cert = inner.certificate
        witness = cert.v if isinstance(cert, Demand) else cert
        return SolveResult(
            solver="ssl-seq", feasible=False, picks=(), nodes=(), cost=INF,
            bound_formula=inner.bound_formula, bound_value=inner.bound_value,
            certificate=witness, notes=inner.notes,
        )
    from .submodular import ssl_feasible

    sources = tuple(sorted(rmap.sources_for_picks(inner.picks)))
    ok, bad = ssl_feasible(ssl, sources)
    if not ok:
        raise AssertionError(f"pulled-back source set failed at node {bad}")
    details = dict(inner.details)
    details["image_picks"] = inner.picks
    return SolveResult(
        solver="ssl-seq",
        feasible=True,
        picks=(),
        nodes=sources,
        cost=sum((ssl.cost[v] for v in sources), 0),
        bound_formula=inner.bound_formula,
        bound_value=inner.bound_value,
        notes=inner.notes,
        details=details,
    )
