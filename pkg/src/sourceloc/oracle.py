"""Exact desk-scale solvers and the randomized property suite.

The exact solvers enumerate candidate sets in (cost, lexicographic) order
and judge each one with the same public feasibility predicates the
approximation solvers are verified against; the first feasible set is an
optimum and counting continues through its cost level.  Caps are hard
errors, never silent truncation.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Sequence

from .core import (BisetFamily, InstanceError, SNAInstance, SSLInstance,
                   all_bisets, biset_intersect, biset_union, delta_count,
                   is_d_uncrossable, is_t_uncrossable, minimal_members)
from .flow import lambda_q_pair
from .submodular import (edge_progress, node_progress, sna_feasible,
                         ssl_feasible)
from .values import Num

DEFAULT_SSL_CAP = 12
DEFAULT_SNA_CAP = 16
DEFAULT_TRANSVERSAL_CAP = 20


class OracleCapError(InstanceError):
    """The instance exceeds the configured enumeration cap."""


@dataclass(frozen=True)
class ExactResult:
    feasible: bool
    optimum: Optional[Num]
    solution: Optional[tuple[int, ...]]
    optimum_count: int
    checked: int


def _scan_cheapest(subsets: Iterable[tuple[int, ...]], cost_of, feasible) -> ExactResult:
    """Cost-ordered scan: first feasible subset is optimal; ties counted."""
    ordered = sorted(subsets, key=lambda s: (cost_of(s), s))
    best: Optional[Num] = None
    witness = None
    count = 0
    checked = 0
    for sub in ordered:
        cost = cost_of(sub)
        if best is not None and cost > best:
            break
        checked += 1
        if feasible(sub):
            if best is None:
                best, witness = cost, sub
            count += 1
    if best is None:
        return ExactResult(False, None, None, 0, checked)
    return ExactResult(True, best, witness, count, checked)


def exact_ssl(ssl: SSLInstance, cap: int = DEFAULT_SSL_CAP) -> ExactResult:
    """Minimum-cost feasible source set by subset enumeration."""
    n = ssl.graph.n
    if n > cap:
        raise OracleCapError(f"{n} nodes exceed the subset-enumeration cap {cap}")
    ok, _ = ssl_feasible(ssl, range(n))
    if not ok:
        return ExactResult(False, None, None, 0, 1)

    def cost_of(sub: tuple[int, ...]) -> Num:
        return sum((ssl.cost[v] for v in sub), 0)

    subsets = (tuple(c) for size in range(n + 1)
               for c in itertools.combinations(range(n), size))
    return _scan_cheapest(subsets, cost_of, lambda sub: ssl_feasible(ssl, sub)[0])


def exact_sna(instance: SNAInstance, cap: int = DEFAULT_SNA_CAP) -> ExactResult:
    """Minimum-cost feasible candidate subset by subset enumeration."""
    m = len(instance.candidates)
    if m > cap:
        raise OracleCapError(f"{m} candidate edges exceed the subset-enumeration cap {cap}")
    ok, _ = sna_feasible(instance, range(m))
    if not ok:
        return ExactResult(False, None, None, 0, 1)
    subsets = (tuple(c) for size in range(m + 1)
               for c in itertools.combinations(range(m), size))
    return _scan_cheapest(subsets, instance.pick_cost,
                          lambda sub: sna_feasible(instance, sub)[0])


def exact_transversal(n: int, hyperedges: Sequence[frozenset[int]],
                      costs: Sequence[Num], cap: int = DEFAULT_TRANSVERSAL_CAP) -> ExactResult:
    """Minimum-cost hitting set over all node subsets (bitmask scan)."""
    if n > cap:
        raise OracleCapError(f"{n} nodes exceed the transversal cap {cap}")
    if not hyperedges:
        return ExactResult(True, 0, (), 1, 1)
    masks = []
    for h in hyperedges:
        mask = 0
        for v in h:
            mask |= 1 << v
        masks.append(mask)
    if 0 in masks:
        return ExactResult(False, None, None, 0, 1)

    def cost_of(sub: tuple[int, ...]) -> Num:
        return sum((costs[v] for v in sub), 0)

    def hits(sub: tuple[int, ...]) -> bool:
        mask = 0
        for v in sub:
            mask |= 1 << v
        return all(mask & h for h in masks)

    subsets = (tuple(c) for size in range(n + 1)
               for c in itertools.combinations(range(n), size))
    return _scan_cheapest(subsets, cost_of, hits)


# ---------------------------------------------------------------------------
# Property suite


@dataclass(frozen=True)
class CheckOutcome:
    name: str
    cases: int
    violations: int
    note: str = ""

    @property
    def passed(self) -> bool:
        return self.violations == 0


@dataclass(frozen=True)
class SuiteReport:
    seed: int
    outcomes: tuple[CheckOutcome, ...]
    artifacts: tuple[str, ...] = ()

    @property
    def passed(self) -> bool:
        return all(o.passed for o in self.outcomes)


def quadruple_violations(fn: Callable[[frozenset], Num], universe: Sequence[int]):
    """Exhaustive submodularity witness search: every base set and pair
    whose marginal gains grow instead of shrink."""
    universe = tuple(universe)
    bad = []
    for size in range(len(universe) + 1):
        for base in itertools.combinations(universe, size):
            base_set = frozenset(base)
            rest = [u for u in universe if u not in base_set]
            for e1, e2 in itertools.combinations(rest, 2):
                lhs = fn(base_set | {e1}) + fn(base_set | {e2})
                rhs = fn(base_set) + fn(base_set | {e1, e2})
                if lhs < rhs:
                    bad.append((base_set, e1, e2))
    return bad


def monotonicity_violations(fn: Callable[[frozenset], Num], universe: Sequence[int]):
    universe = tuple(universe)
    bad = []
    for size in range(len(universe) + 1):
        for base in itertools.combinations(universe, size):
            base_set = frozenset(base)
            val = fn(base_set)
            for u in universe:
                if u not in base_set and fn(base_set | {u}) < val:
                    bad.append((base_set, u))
    return bad


def _pair_connectivity_fn(instance: SNAInstance, u: int, v: int) -> Callable[[frozenset], int]:
    memo: dict[frozenset, int] = {}

    def fn(picks: frozenset) -> int:
        if picks not in memo:
            graph = instance.graph.with_edges(instance.candidate_edges(picks))
            memo[picks] = lambda_q_pair(graph, instance.capacity, u, v)
        return memo[picks]

    return fn


def single_step_witness(instance: SNAInstance, picks: Sequence[int], u: int, v: int) -> bool:
    """When adding `picks` lifts the pair connectivity by h, at least h of
    its edges must each lift it by one on their own."""
    fn = _pair_connectivity_fn(instance, u, v)
    before = fn(frozenset())
    lift = fn(frozenset(picks)) - before
    singles = sum(1 for i in picks if fn(frozenset({i})) == before + 1)
    return singles >= lift


def biset_cut_submodular_violations(n: int, edges: Sequence[tuple[int, int]]):
    """|delta(X^Y)| + |delta(XvY)| <= |delta(X)| + |delta(Y)| over all biset
    pairs of a small universe, undirected counting."""
    bisets = list(all_bisets(n, limit=5))
    counts = {b: delta_count(edges, b, False) for b in bisets}
    bad = []
    for x, y in itertools.combinations_with_replacement(bisets, 2):
        lhs = counts[biset_intersect(x, y)] + counts[biset_union(x, y)]
        if lhs > counts[x] + counts[y]:
            bad.append((x, y))
    return bad


def tight_family_violations(instance: SNAInstance, limit: int = 10):
    """D-uncrossability, symmetry, fast-path agreement, and the degree
    bounds, all on the realized tight family of a single-step instance."""
    from .bisetcover import minimal_tight_bisets, tight_bisets

    problems = []
    family = tight_bisets(instance, limit)
    if not family.members:
        return problems
    demand_pairs = [(d.u, d.v) for d in instance.demands]
    if not family.is_symmetric():
        problems.append("tight family is not symmetric")
    if not is_d_uncrossable(family, demand_pairs, False):
        problems.append("tight family is not demand-uncrossable")
    enum_min = minimal_members(family)
    fast_min = minimal_tight_bisets(instance, method="fast")
    if enum_min.members != fast_min.members:
        problems.append("fast minimal-family path disagrees with enumeration")
    gamma = enum_min.max_boundary
    degree = _family_degree(instance.graph.n, enum_min)
    if degree > (4 * gamma + 1) ** 2:
        problems.append(f"degree {degree} above (4*{gamma}+1)^2")
    s = instance.demand_center
    if s is not None:
        rooted_family = BisetFamily(instance.graph.n,
                                    frozenset(b for b in family if s not in b.outer))
        terminals = {d.v if d.u == s else d.u for d in instance.demands}
        if rooted_family.members and not is_t_uncrossable(rooted_family, terminals):
            problems.append("rooted tight subfamily is not terminal-uncrossable")
        rooted_min = minimal_members(rooted_family)
        g2 = rooted_min.max_boundary
        d2 = _family_degree(instance.graph.n, rooted_min)
        if rooted_min.members and d2 > 2 * g2 + 1:
            problems.append(f"rooted degree {d2} above 2*{g2}+1")
    return problems


def _family_degree(n: int, family: BisetFamily) -> int:
    inner_parts = {b.inner for b in family}
    deg = [0] * n
    for part in inner_parts:
        for v in part:
            deg[v] += 1
    return max(deg, default=0)


@dataclass(frozen=True)
class SuiteSizes:
    instances: int = 50
    n: int = 5
    m: int = 7
    f: int = 5
    k: int = 3


def property_suite(seed: int, sizes: SuiteSizes = SuiteSizes(),
                   artifact_dir: Optional[str] = None,
                   checks: Optional[Sequence[str]] = None) -> SuiteReport:
    """Run the randomized structural checks over seeded instances.

    Any violated instance is serialized next to a description (when an
    artifact directory is given) and fails the run; zero instances is a
    vacuous pass flagged in the notes.
    """
    import random

    from . import generators

    all_checks = ("pair-submodular", "star-pushforward", "single-step-witness",
                  "progress-monotone", "biset-cut-submodular", "tight-family")
    selected = tuple(checks) if checks is not None else all_checks
    for name in selected:
        if name not in all_checks:
            raise InstanceError(f"unknown property check {name!r}")
    rng = random.Random(seed)
    tallies = {name: [0, 0] for name in selected}
    artifacts: list[str] = []

    def record(name: str, instance, violated, label: str):
        tallies[name][0] += 1
        if violated:
            tallies[name][1] += 1
            if artifact_dir is not None:
                artifacts.append(_dump_counterexample(artifact_dir, name, instance, label,
                                                      len(artifacts)))

    for case in range(sizes.instances):
        inst = generators.random_sna(rng, n=sizes.n, m=sizes.m, f_size=sizes.f,
                                     k=sizes.k, directed=True, cost_mode="edge")
        universe = range(len(inst.candidates))
        if "pair-submodular" in selected:
            bad = []
            for d in inst.demands[:2]:
                fn = _pair_connectivity_fn(inst, d.u, d.v)
                bad.extend(quadruple_violations(fn, universe))
            record("pair-submodular", inst, bad, f"case {case}: pair submodularity")
        if "single-step-witness" in selected:
            bad = []
            for d in inst.demands[:2]:
                if not single_step_witness(inst, tuple(universe), d.u, d.v):
                    bad.append(d)
            record("single-step-witness", inst, bad, f"case {case}: witness count")
        if "progress-monotone" in selected:
            bad = monotonicity_violations(lambda s: edge_progress(inst, s), universe)
            record("progress-monotone", inst, bad, f"case {case}: progress monotone")
        if "star-pushforward" in selected:
            node_universe = range(inst.graph.n)
            bad = quadruple_violations(lambda s: node_progress(inst, s), node_universe)
            record("star-pushforward", inst, bad, f"case {case}: node pushforward")
        if "biset-cut-submodular" in selected:
            und = generators.random_graph(rng, sizes.n, sizes.m, directed=False)
            bad = biset_cut_submodular_violations(und.n, und.edges)
            record("biset-cut-submodular", und, bad, f"case {case}: biset cut counts")
        if "tight-family" in selected:
            step = generators.random_single_step(rng, n=sizes.n, m=sizes.m, f_size=sizes.f)
            if step is not None:
                bad = tight_family_violations(step)
                record("tight-family", step, bad, f"case {case}: tight family")
    outcomes = []
    for name in selected:
        cases, violations = tallies[name]
        note = "vacuous pass: no cases generated" if cases == 0 else ""
        outcomes.append(CheckOutcome(name, cases, violations, note))
    return SuiteReport(seed, tuple(outcomes), tuple(artifacts))


def _dump_counterexample(artifact_dir: str, check: str, instance, label: str, index: int) -> str:
    import os

    from .instancefile import serialize_instance

    os.makedirs(artifact_dir, exist_ok=True)
    path = os.path.join(artifact_dir, f"counterexample-{index:03d}-{check}.json")
    try:
        text = serialize_instance(instance, metadata={"note": label, "check": check})
    except Exception:
        text = repr(instance) + "\n"
    with open(path, "w") as fh:
        fh.write(text)
    return path
