"""Greedy covering machinery and the solvers built from it.

The generic greedy repeatedly buys the element with the best marginal
progress per unit cost until the progress function reaches its target; for
monotone submodular progress its cost is within H(max single-element gain)
of optimal.  The concrete progress functions here truncate each demand's
connectivity at its requirement and sum, so feasibility is exactly
"progress equals total requirement".
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Hashable, Iterable, Optional, Sequence

from .bounds import harmonic
from .core import Demand, InstanceError, SNAInstance, SSLInstance
from .flow import lambda_pq, lambda_q_pair, min_flow_cost
from .values import INF, NEG_INF, Num


class SolverError(RuntimeError):
    """A solver met a state its guarantees exclude (bad oracle, stalled)."""


@dataclass(frozen=True)
class CoverProblem:
    """Submodular cover instance: groundset ids, per-element costs, and an
    integer-valued progress oracle.  `target` defaults to the oracle's
    value on the full groundset."""

    elements: tuple[Hashable, ...]
    costs: dict
    oracle: Callable[[frozenset], Num]
    target: Optional[Num] = None


@dataclass(frozen=True)
class GreedyStep:
    element: Hashable
    gain: Num
    cost: Num


@dataclass(frozen=True)
class GreedyTrace:
    steps: tuple[GreedyStep, ...]
    chosen: tuple
    total_cost: Num
    base: Num
    achieved: Num
    target: Num
    alpha: int
    feasible: bool
    evaluations: int = 0

    @property
    def bound(self) -> Fraction:
        """H(alpha): the greedy's multiplicative guarantee."""
        return harmonic(self.alpha)


def greedy_cover(problem: CoverProblem) -> GreedyTrace:
    """Best gain-per-cost greedy with memoized oracle calls.

    Zero-cost elements with positive gain are taken up front (they never
    hurt the bound); ties are broken toward the smallest element.  If the
    groundset cannot reach the target the trace comes back infeasible.
    """
    memo: dict[frozenset, Num] = {}
    calls = [0]

    def g(sub: frozenset) -> Num:
        if sub not in memo:
            calls[0] += 1
            memo[sub] = problem.oracle(sub)
        return memo[sub]

    elements = sorted(problem.elements)
    if len(set(elements)) != len(elements):
        raise InstanceError("duplicate groundset elements")
    full = frozenset(elements)
    base = g(frozenset())
    target = problem.target if problem.target is not None else g(full)
    chosen: set = set()
    steps: list[GreedyStep] = []
    current = base
    for u in elements:
        if problem.costs[u] == 0:
            gain = g(frozenset(chosen | {u})) - current
            if gain > 0:
                chosen.add(u)
                current += gain
                steps.append(GreedyStep(u, gain, 0))
    while current < target:
        best = None
        for u in elements:  # sorted, so strict improvement keeps the lowest id on ties
            if u in chosen:
                continue
            cost = problem.costs[u]
            if cost == INF:
                continue
            gain = g(frozenset(chosen | {u})) - current
            if gain <= 0:
                continue
            ratio = INF if cost == 0 else Fraction(gain) / Fraction(cost)
            if best is None or ratio > best[0]:
                best = (ratio, u, gain, cost)
        if best is None:
            if g(full) < target:
                break  # genuinely unreachable
            raise SolverError("greedy stalled below target on a reachable instance; "
                              "the progress oracle is not monotone submodular")
        _, u, gain, cost = best
        chosen.add(u)
        current += gain
        steps.append(GreedyStep(u, gain, cost))
    alpha = 0
    for u in elements:
        single = g(frozenset({u})) - base
        if single > alpha:
            alpha = single
    return GreedyTrace(
        steps=tuple(steps),
        chosen=tuple(sorted(chosen)),
        total_cost=sum((problem.costs[u] for u in chosen), 0),
        base=base,
        achieved=current,
        target=target,
        alpha=int(alpha),
        feasible=current >= target,
        evaluations=calls[0],
    )


# ---------------------------------------------------------------------------
# Progress functions


def edge_progress(instance: SNAInstance, picks: Iterable[int]) -> int:
    """Sum over demands of the connectivity in the augmented graph,
    truncated at the requirement.  Hits the total requirement exactly on
    feasible pick sets."""
    extra = instance.candidate_edges(picks)
    graph = instance.graph.with_edges(extra)
    total = 0
    for d in instance.demands:
        lam = lambda_q_pair(graph, instance.capacity, d.u, d.v, cap=d.r)
        total += min(d.r, lam)
    return total


def star_leaf(instance: SNAInstance, index: int) -> int:
    center = instance.star_center
    if center is None:
        raise InstanceError("candidate set is not a star")
    e = instance.candidates[index]
    return e.v if e.u == center else e.u


def candidates_into(instance: SNAInstance, nodes: Iterable[int]) -> tuple[int, ...]:
    """Indices of the star edges whose leaf lies in `nodes`."""
    nodes = set(nodes)
    return tuple(i for i in range(len(instance.candidates))
                 if star_leaf(instance, i) in nodes)


def node_progress(instance: SNAInstance, nodes: Iterable[int]) -> int:
    """Node-picked progress: buy every star edge into the chosen nodes."""
    return edge_progress(instance, candidates_into(instance, nodes))


# ---------------------------------------------------------------------------
# Solver results


@dataclass(frozen=True)
class SolveResult:
    """Uniform solver outcome: picked candidate copies (and chosen nodes
    where the groundset is nodes), exact cost, the bound the solver claims,
    and an infeasibility certificate when there is one."""

    solver: str
    feasible: bool
    picks: tuple[int, ...]
    nodes: tuple[int, ...]
    cost: Num
    bound_formula: str
    bound_value: Optional[Fraction]
    alpha: Optional[int] = None
    alpha_cap: Optional[int] = None
    trace: Optional[GreedyTrace] = None
    certificate: Optional[object] = None
    notes: tuple[str, ...] = ()
    details: dict = field(default_factory=dict)


def sna_feasible(instance: SNAInstance, picks: Iterable[int]) -> tuple[bool, Optional[Demand]]:
    """Fresh flow recomputation, independent of any solver bookkeeping."""
    graph = instance.graph.with_edges(instance.candidate_edges(picks))
    for d in instance.demands:
        if lambda_q_pair(graph, instance.capacity, d.u, d.v, cap=d.r) < d.r:
            return False, d
    return True, None


def greedy_alpha_caps(instance: SNAInstance) -> dict:
    dcount = len(instance.demands)
    return {
        "edge": dcount,
        "node": min(instance.total_requirement, dcount * instance.p_max),
    }


def solve_sna_greedy(instance: SNAInstance) -> SolveResult:
    """Greedy cover for star-candidate augmentation, edge or node costs.

    Directed instances carry the H(alpha) guarantee; undirected input is
    solved on undirected flow semantics and the claimed ratio is doubled in
    the notes."""
    if instance.star_center is None:
        raise InstanceError("greedy augmentation needs a star candidate set")
    notes: list[str] = []
    if not instance.graph.directed:
        notes.append("undirected input: directed guarantee carries over at twice the ratio")
    feasible_at_full, witness = sna_feasible(instance, range(len(instance.candidates)))
    target = instance.total_requirement
    cap = greedy_alpha_caps(instance)[instance.cost_mode]
    if not feasible_at_full:
        return SolveResult(
            solver="greedy-sna",
            feasible=False,
            picks=(),
            nodes=(),
            cost=INF,
            bound_formula=f"H({cap})",
            bound_value=harmonic(cap),
            certificate=witness,
            notes=tuple(notes),
        )
    if instance.cost_mode == "edge":
        problem = CoverProblem(
            elements=tuple(range(len(instance.candidates))),
            costs={i: instance.candidates[i].cost for i in range(len(instance.candidates))},
            oracle=lambda sub: edge_progress(instance, sub),
            target=target,
        )
        trace = greedy_cover(problem)
        picks = trace.chosen
        nodes: tuple[int, ...] = ()
        cost = trace.total_cost
    else:
        problem = CoverProblem(
            elements=tuple(range(instance.graph.n)),
            costs={v: instance.node_costs[v] for v in range(instance.graph.n)},
            oracle=lambda sub: node_progress(instance, sub),
            target=target,
        )
        trace = greedy_cover(problem)
        nodes = trace.chosen
        picks = candidates_into(instance, nodes)
        cost = instance.pick_cost(picks)
    ok, witness = sna_feasible(instance, picks)
    if not ok:
        raise SolverError(f"greedy output failed independent verification at demand {witness}")
    return SolveResult(
        solver="greedy-sna",
        feasible=True,
        picks=picks,
        nodes=nodes,
        cost=cost,
        bound_formula=f"H(min(alpha, {cap}))",
        bound_value=harmonic(min(trace.alpha, cap)),
        alpha=trace.alpha,
        alpha_cap=cap,
        trace=trace,
        notes=tuple(notes),
    )


def ssl_feasible(ssl: SSLInstance, sources: Iterable[int]) -> tuple[bool, Optional[int]]:
    """Demand (and budget, when present) check for a source set; the
    witness is a node whose demand or budget fails."""
    sources = set(sources)
    for v in range(ssl.graph.n):
        if ssl.demand[v] > 0:
            lam = lambda_pq(ssl.graph, ssl.supply, ssl.capacity, sources, v, cap=ssl.demand[v])
            if lam < ssl.demand[v]:
                return False, v
        if ssl.flow_cost_bound is not None and ssl.flow_cost_bound[v] != INF:
            mu = min_flow_cost(ssl.graph, ssl.edge_costs, ssl.supply, ssl.capacity,
                               sources, v, ssl.demand[v])
            if mu > ssl.flow_cost_bound[v]:
                return False, v
    return True, None


def solve_ssl_greedy(ssl: SSLInstance) -> SolveResult:
    """Source location through the rooted-augmentation image: reduce, run
    the node-cost greedy, pull the leaf set back."""
    from .reductions import ssl_to_rooted_sna

    sna, rmap = ssl_to_rooted_sna(ssl)
    inner = solve_sna_greedy(sna)
    if not inner.feasible:
        witness = inner.certificate.v if inner.certificate is not None else None
        return SolveResult(
            solver="ssl-greedy",
            feasible=False,
            picks=(),
            nodes=(),
            cost=INF,
            bound_formula=inner.bound_formula,
            bound_value=inner.bound_value,
            certificate=witness,
            notes=inner.notes,
        )
    sources = tuple(sorted(rmap.sources_for_picks(inner.picks)))
    ok, witness = ssl_feasible(ssl, sources)
    if not ok:
        raise SolverError(f"pulled-back source set failed at node {witness}")
    return SolveResult(
        solver="ssl-greedy",
        feasible=True,
        picks=(),
        nodes=sources,
        cost=sum((ssl.cost[v] for v in sources), 0),
        bound_formula=inner.bound_formula,
        bound_value=inner.bound_value,
        alpha=inner.alpha,
        alpha_cap=inner.alpha_cap,
        trace=inner.trace,
        notes=inner.notes,
        details={"image_picks": inner.picks},
    )


# ---------------------------------------------------------------------------
# Two-phase double cover


@dataclass(frozen=True)
class DoubleCoverResult:
    chosen: tuple
    cost: Num
    first_trace: GreedyTrace
    second_trace: Optional[GreedyTrace]
    feasible: bool
    bound_value: Optional[Fraction]
    certificate: Optional[object] = None


def solve_double_cover(elements: Sequence[Hashable], costs: dict,
                       f_oracle: Callable[[frozenset], Num],
                       g_oracle: Callable[[frozenset], Num],
                       f_target: Optional[Num] = None,
                       g_target: Optional[Num] = None) -> DoubleCoverResult:
    """Cover two monotone submodular targets where the second function may
    sit at -infinity until the first is satisfied.

    Phase one covers f; the set it buys makes g finite (anything else is a
    hard error, the ordering property is a precondition); phase two covers
    the residual of g on the leftover groundset.  The combined guarantee is
    H(alpha_f) + H(alpha_residual)."""
    elements = tuple(elements)
    f_problem = CoverProblem(elements=elements, costs=costs, oracle=f_oracle, target=f_target)
    first = greedy_cover(f_problem)
    if not first.feasible:
        return DoubleCoverResult(first.chosen, first.total_cost, first, None, False,
                                 None, certificate="first target unreachable")
    base_set = frozenset(first.chosen)
    g_at_first = g_oracle(base_set)
    if g_at_first == NEG_INF:
        raise SolverError("ordering property violated: the second progress function "
                          "is still -infinity after the first target is met")
    rest = tuple(u for u in elements if u not in base_set)

    def residual(sub: frozenset) -> Num:
        val = g_oracle(base_set | sub)
        if val == NEG_INF:
            raise SolverError("second progress function fell to -infinity on a superset "
                              "of a finite point; it is not non-decreasing")
        return val

    g_problem = CoverProblem(elements=rest, costs=costs, oracle=residual,
                             target=g_target if g_target is not None
                             else g_oracle(frozenset(elements)))
    second = greedy_cover(g_problem)
    chosen = tuple(sorted(set(first.chosen) | set(second.chosen)))
    cost = sum((costs[u] for u in chosen), 0)
    feasible = second.feasible
    bound = harmonic(first.alpha) + harmonic(second.alpha) if feasible else None
    return DoubleCoverResult(chosen, cost, first, second, feasible, bound,
                             certificate=None if feasible else "second target unreachable")


def solve_ssl_flow_bounds(ssl: SSLInstance) -> SolveResult:
    """Source location under per-node budgets on the cheapest feasible flow.

    The demand side is the usual truncated connectivity sum; the budget
    side sums min(-flow cost, -budget) over budgeted nodes, which is
    -infinity until every demand is reachable.  Instances whose budgets are
    unattainable even from the full node set are reported infeasible with
    the violating node."""
    if ssl.edge_costs is None or ssl.flow_cost_bound is None:
        raise InstanceError("flow-cost solving needs edge costs and per-node bounds")
    for c in ssl.edge_costs:
        if not isinstance(c, int):
            raise InstanceError("flow-cost bounds need integer edge costs "
                                "(the budget progress function must be integral)")
    for b in ssl.flow_cost_bound:
        if b != INF and not isinstance(b, int):
            raise InstanceError("budgets must be integers or inf")
    n = ssl.graph.n
    everyone = frozenset(range(n))
    budgeted = tuple(v for v in range(n) if ssl.flow_cost_bound[v] != INF)

    def mu(sub: frozenset, v: int) -> Num:
        return min_flow_cost(ssl.graph, ssl.edge_costs, ssl.supply, ssl.capacity,
                             sub, v, ssl.demand[v])

    for v in range(n):
        worst = mu(everyone, v)
        if worst > ssl.flow_cost_bound[v]:
            return SolveResult(
                solver="ssl-flow-bounds", feasible=False, picks=(), nodes=(),
                cost=INF, bound_formula="", bound_value=None, certificate=v,
                notes=(f"node {v} cannot meet its budget even from the full node set",),
            )

    def f_oracle(sub: frozenset) -> int:
        total = 0
        for v in range(n):
            if ssl.demand[v] > 0:
                lam = lambda_pq(ssl.graph, ssl.supply, ssl.capacity, sub, v, cap=ssl.demand[v])
                total += min(ssl.demand[v], lam)
        return total

    def g_oracle(sub: frozenset) -> Num:
        total = 0
        for v in budgeted:
            cost_v = mu(sub, v)
            if cost_v == INF:
                return NEG_INF
            total += min(-cost_v, -ssl.flow_cost_bound[v])
        return total

    result = solve_double_cover(tuple(range(n)), {v: ssl.cost[v] for v in range(n)},
                                f_oracle, g_oracle,
                                f_target=sum(ssl.demand),
                                g_target=-sum(ssl.flow_cost_bound[v] for v in budgeted))
    if not result.feasible:
        return SolveResult(
            solver="ssl-flow-bounds", feasible=False, picks=(), nodes=(), cost=INF,
            bound_formula="", bound_value=None, certificate=result.certificate,
        )
    sources = tuple(sorted(result.chosen))
    ok, witness = ssl_feasible(ssl, sources)
    if not ok:
        raise SolverError(f"double-cover output failed independent verification at node {witness}")
    d_total = sum(ssl.demand)
    c_total = sum(ssl.edge_costs, 0)
    return SolveResult(
        solver="ssl-flow-bounds",
        feasible=True,
        picks=(),
        nodes=sources,
        cost=sum((ssl.cost[v] for v in sources), 0),
        bound_formula=f"H({d_total})+H({c_total})",
        bound_value=harmonic(d_total) + harmonic(int(c_total)),
        trace=result.first_trace,
        details={"second_trace": result.second_trace,
                 "realized_bound": result.bound_value},
    )
