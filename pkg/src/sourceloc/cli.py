"""Command-line interface: generate, solve, verify, oracle-solve, sweep.

Exit codes: 0 solved/verified, 2 infeasible, 3 algorithm/instance
mismatch, 4 parse or reference error, 5 oracle cap exceeded.  Reports are
deterministic for a fixed seed and flags (no timestamps, exact numbers).
"""

from __future__ import annotations

import argparse
import os
import random
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from typing import Optional

from . import generators, oracle
from .bisetcover import menger_feasible, solve_ssl_sequential, solve_star_sna_sequential
from .core import InstanceError, SNAInstance, SSLInstance
from .flow import min_flow_cost
from .instancefile import (FORMAT_REPORT, ParseError, ParsedInstance,
                           canonical_dumps, content_hash, parse_instance,
                           parse_solution, serialize_instance,
                           serialize_solution)
from .reductions import set_cover_gadget
from .submodular import (SolveResult, sna_feasible, solve_sna_greedy,
                         solve_ssl_flow_bounds, solve_ssl_greedy, ssl_feasible)
from .values import INF, format_number, is_finite, parse_number

EXIT_OK = 0
EXIT_INFEASIBLE = 2
EXIT_INCOMPATIBLE = 3
EXIT_PARSE = 4
EXIT_CAP = 5

ALGORITHMS = ("greedy-sna", "seq-biset", "ssl", "ssl-flow-bounds")


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except oracle.OracleCapError as exc:
        print(f"oracle cap: {exc}", file=sys.stderr)
        return EXIT_CAP
    except InstanceError as exc:
        print(f"incompatible: {exc}", file=sys.stderr)
        return EXIT_INCOMPATIBLE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sourceloc",
        description="source location / network augmentation solvers with exact desk-scale oracles",
    )
    sub = parser.add_subparsers(required=True)

    g = sub.add_parser("gen", help="generate a seeded instance file")
    g.add_argument("--kind", required=True,
                   choices=("ssl", "sna", "dsna", "ssl-flow-bounds", "setcover"))
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--n", type=int, default=6)
    g.add_argument("--m", type=int, default=8)
    g.add_argument("--k", type=int, default=2)
    g.add_argument("--f-size", type=int, default=6)
    g.add_argument("--mode", default="general", choices=generators.SSL_MODES)
    g.add_argument("--cost-max", type=int, default=9)
    g.add_argument("--cost-mode", default="edge", choices=("edge", "node"))
    g.add_argument("--directed", action="store_true")
    g.add_argument("--rooted", action="store_true")
    g.add_argument("--sets", type=int, default=3)
    g.add_argument("--elements", type=int, default=3)
    g.add_argument("--copies", type=int, default=None,
                   help="extra element copies in the set-cover gadget "
                        "(default (sets+elements)^2)")
    g.add_argument("--density", type=float, default=0.5)
    g.add_argument("--out", required=True)
    g.set_defaults(func=cmd_gen)

    s = sub.add_parser("solve", help="run an approximation algorithm on an instance file")
    s.add_argument("instance")
    s.add_argument("--algorithm", required=True, choices=ALGORITHMS)
    s.add_argument("--method", default="enumerate", choices=("enumerate", "fast"),
                   help="tight-family computation for seq-biset")
    s.add_argument("--out", help="write the solution file here")
    s.add_argument("--report", help="write the JSON report here")
    s.add_argument("--with-oracle", action="store_true",
                   help="also compute the exact optimum and realized ratio")
    s.add_argument("--cap", type=int, default=None, help="oracle enumeration cap")
    s.set_defaults(func=cmd_solve)

    v = sub.add_parser("verify", help="check a solution file against its instance")
    v.add_argument("instance")
    v.add_argument("solution")
    v.set_defaults(func=cmd_verify)

    o = sub.add_parser("oracle", help="solve an instance exactly by enumeration")
    o.add_argument("instance")
    o.add_argument("--cap", type=int, default=None)
    o.add_argument("--out", help="write the exact result as JSON here")
    o.set_defaults(func=cmd_oracle)

    r = sub.add_parser("ratio-report", help="solve a directory of instances and tabulate ratios")
    r.add_argument("directory")
    r.add_argument("--algorithm", required=True, choices=ALGORITHMS)
    r.add_argument("--method", default="enumerate", choices=("enumerate", "fast"))
    r.add_argument("--cap", type=int, default=None)
    r.add_argument("--jobs", type=int, default=4)
    r.set_defaults(func=cmd_ratio_report)

    p = sub.add_parser("property-suite", help="run the randomized structural checks")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--instances", type=int, default=25)
    p.add_argument("--n", type=int, default=5)
    p.add_argument("--m", type=int, default=7)
    p.add_argument("--f", type=int, default=5)
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--artifacts", help="directory for counterexample artifacts")
    p.set_defaults(func=cmd_property_suite)
    return parser


# ---------------------------------------------------------------------------


def cmd_gen(args) -> int:
    rng = random.Random(args.seed)
    params = {"seed": args.seed}
    kind = args.kind
    if kind == "ssl":
        instance = generators.random_ssl(rng, args.n, args.m, args.k, args.mode,
                                         args.directed, args.cost_max)
        params.update({"n": args.n, "m": args.m, "k": args.k, "mode": args.mode,
                       "directed": args.directed, "cost_max": args.cost_max})
    elif kind == "ssl-flow-bounds":
        instance = generators.random_ssl_flow_bounds(rng, args.n, args.m, args.k,
                                                     args.cost_max)
        params.update({"n": args.n, "m": args.m, "k": args.k, "cost_max": args.cost_max})
    elif kind in ("sna", "dsna"):
        if kind == "sna":
            instance = generators.random_sna(rng, args.n, args.m, args.f_size, args.k,
                                             args.directed, args.cost_mode,
                                             rooted=args.rooted, cost_max=args.cost_max)
        else:
            instance = generators.random_single_step(rng, args.n, args.m, args.f_size,
                                                     rooted=args.rooted,
                                                     cost_mode=args.cost_mode,
                                                     cost_max=args.cost_max)
            if instance is None:
                print("generation produced no usable demand pairs; try another seed",
                      file=sys.stderr)
                return EXIT_INCOMPATIBLE
        params.update({"n": args.n, "m": args.m, "k": args.k, "f_size": args.f_size,
                       "cost_mode": args.cost_mode, "directed": args.directed,
                       "rooted": args.rooted, "cost_max": args.cost_max})
    else:
        sets = generators.random_membership(rng, args.sets, args.elements, args.density)
        instance, info = set_cover_gadget(sets, args.elements, copies=args.copies,
                                          cost_mode=args.cost_mode)
        kind = "sna"
        params.update({"sets": args.sets, "elements": args.elements,
                       "copies": info.copies, "density": args.density,
                       "membership": sets})
        if info.cover_optimum is not None:
            params["known_optimum"] = info.cover_optimum
        if info.uncoverable:
            params["uncoverable_elements"] = list(info.uncoverable)
    text = serialize_instance(instance, kind=kind, metadata=params)
    with open(args.out, "w") as fh:
        fh.write(text)
    print(f"{args.out} {content_hash(text)}")
    return EXIT_OK


def _dispatch(parsed: ParsedInstance, algorithm: str, method: str) -> SolveResult:
    kind, instance = parsed.kind, parsed.instance
    if algorithm == "greedy-sna":
        if not isinstance(instance, SNAInstance):
            raise InstanceError("greedy-sna runs on augmentation instances")
        return solve_sna_greedy(instance)
    if algorithm == "seq-biset":
        if isinstance(instance, SNAInstance):
            if instance.graph.directed:
                raise InstanceError("seq-biset needs an undirected instance")
            return solve_star_sna_sequential(instance, method=method)
        if kind == "ssl" and not instance.graph.directed:
            return solve_ssl_sequential(instance, method=method)
        raise InstanceError("seq-biset runs on undirected augmentation or "
                            "undirected source-location instances")
    if algorithm == "ssl":
        if kind != "ssl" or not isinstance(instance, SSLInstance):
            raise InstanceError("the ssl algorithm runs on plain ssl instances")
        return solve_ssl_greedy(instance)
    if kind != "ssl-flow-bounds":
        raise InstanceError("ssl-flow-bounds runs on budgeted ssl instances")
    return solve_ssl_flow_bounds(instance)


def _independent_verdict(parsed: ParsedInstance, result: SolveResult) -> bool:
    instance = parsed.instance
    if isinstance(instance, SSLInstance):
        return ssl_feasible(instance, result.nodes)[0]
    if not instance.graph.directed:
        return menger_feasible(instance, result.picks)[0]
    return sna_feasible(instance, result.picks)[0]


def _exact_optimum(parsed: ParsedInstance, cap: Optional[int]):
    instance = parsed.instance
    if isinstance(instance, SSLInstance):
        res = oracle.exact_ssl(instance, cap or oracle.DEFAULT_SSL_CAP)
    else:
        res = oracle.exact_sna(instance, cap or oracle.DEFAULT_SNA_CAP)
    return res


def _ratio(cost, optimum) -> Optional[Fraction]:
    if optimum is None:
        return None
    if optimum == 0:
        return Fraction(1) if cost == 0 else None
    if not is_finite(cost):
        return None
    return Fraction(cost) / Fraction(optimum)


def _report_doc(parsed: ParsedInstance, args, result: SolveResult,
                verified: bool, optimum, ratio) -> dict:
    solution: dict = {}
    if result.nodes:
        solution["sources"] = [parsed.label_of(v) for v in result.nodes]
    if result.picks:
        solution["picks"] = list(result.picks)
    doc = {
        "format": FORMAT_REPORT,
        "solver": result.solver,
        "algorithm": args.algorithm,
        "instance_hash": parsed.text_hash,
        "feasible": result.feasible,
        "verified": verified,
        "solution": solution,
        "cost": format_number(result.cost) if result.feasible else "inf",
        "bound": {"formula": result.bound_formula,
                  "value": format_number(result.bound_value)
                  if result.bound_value is not None else None},
        "alpha": result.alpha,
        "alpha_cap": result.alpha_cap,
        "certificate": repr(result.certificate) if result.certificate is not None else None,
        "oracle_optimum": format_number(optimum) if optimum is not None else None,
        "realized_ratio": format_number(ratio) if ratio is not None else None,
        "notes": list(result.notes),
    }
    return doc


def cmd_solve(args) -> int:
    parsed = _load_instance(args.instance)
    result = _dispatch(parsed, args.algorithm, args.method)
    verified = _independent_verdict(parsed, result) if result.feasible else False
    optimum = None
    ratio = None
    if args.with_oracle:
        exact = _exact_optimum(parsed, args.cap)
        optimum = exact.optimum if exact.feasible else None
        ratio = _ratio(result.cost, optimum) if result.feasible else None
    doc = _report_doc(parsed, args, result, verified, optimum, ratio)
    text = canonical_dumps(doc)
    if args.report:
        with open(args.report, "w") as fh:
            fh.write(text)
    print(text, end="")
    if result.feasible and args.out:
        sol = serialize_solution(
            parsed.text_hash, parsed.kind, parsed.labels,
            sources=result.nodes if result.nodes else None,
            picks=result.picks if result.picks else None,
            metadata={"algorithm": args.algorithm, "cost": format_number(result.cost)},
        )
        with open(args.out, "w") as fh:
            fh.write(sol)
    if not result.feasible:
        return EXIT_INFEASIBLE
    if not verified:
        print("solver output failed independent verification", file=sys.stderr)
        return EXIT_INFEASIBLE
    return EXIT_OK


def _load_instance(path: str) -> ParsedInstance:
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(path, str(exc)) from None
    return parse_instance(text)


def cmd_verify(args) -> int:
    parsed = _load_instance(args.instance)
    try:
        with open(args.solution) as fh:
            sol = parse_solution(fh.read())
    except OSError as exc:
        raise ParseError(args.solution, str(exc)) from None
    if sol["instance_hash"] != parsed.text_hash:
        raise ParseError("$.instance_hash", "solution references a different instance")
    instance = parsed.instance
    ok = True
    if isinstance(instance, SSLInstance):
        label_index = {lbl: i for i, lbl in enumerate(parsed.labels)}
        sources = set()
        for lbl in sol.get("sources", []):
            if lbl not in label_index:
                raise ParseError("$.sources", f"unknown node label {lbl!r}")
            sources.add(label_index[lbl])
        from .flow import lambda_pq

        for v in range(instance.graph.n):
            if instance.demand[v] == 0 and instance.flow_cost_bound is None:
                continue
            lam = lambda_pq(instance.graph, instance.supply, instance.capacity, sources, v)
            met = lam >= instance.demand[v]
            line = (f"node {parsed.label_of(v)}: connectivity "
                    f"{format_number(lam)} / demand {instance.demand[v]}")
            if instance.flow_cost_bound is not None and instance.flow_cost_bound[v] != INF:
                mu = min_flow_cost(instance.graph, instance.edge_costs, instance.supply,
                                   instance.capacity, sources, v, instance.demand[v])
                within = mu <= instance.flow_cost_bound[v]
                line += (f", flow cost {format_number(mu)} / budget "
                         f"{format_number(instance.flow_cost_bound[v])}")
                met = met and within
            ok = ok and met
            print(("ok   " if met else "FAIL ") + line)
    else:
        picks = sol.get("picks", [])
        for i in picks:
            if not isinstance(i, int) or not (0 <= i < len(instance.candidates)):
                raise ParseError("$.picks", f"candidate index {i!r} out of range")
        graph = instance.graph.with_edges(instance.candidate_edges(picks))
        from .flow import lambda_q_pair

        for d in instance.demands:
            lam = lambda_q_pair(graph, instance.capacity, d.u, d.v)
            met = lam >= d.r
            ok = ok and met
            print(("ok   " if met else "FAIL ")
                  + f"demand {parsed.label_of(d.u)}-{parsed.label_of(d.v)}: "
                    f"connectivity {lam} / requirement {d.r}")
    print("feasible" if ok else "infeasible")
    return EXIT_OK if ok else EXIT_INFEASIBLE


def cmd_oracle(args) -> int:
    parsed = _load_instance(args.instance)
    res = _exact_optimum(parsed, args.cap)
    doc = {
        "feasible": res.feasible,
        "optimum": format_number(res.optimum) if res.optimum is not None else None,
        "solution": list(res.solution) if res.solution is not None else None,
        "optimum_count": res.optimum_count,
        "checked": res.checked,
    }
    text = canonical_dumps(doc)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    print(text, end="")
    return EXIT_OK if res.feasible else EXIT_INFEASIBLE


def cmd_ratio_report(args) -> int:
    names = sorted(f for f in os.listdir(args.directory) if f.endswith(".json"))
    rows = []

    def run(name: str):
        path = os.path.join(args.directory, name)
        try:
            parsed = _load_instance(path)
        except ParseError as exc:
            return (name, "parse-error", str(exc))
        try:
            result = _dispatch(parsed, args.algorithm, args.method)
        except InstanceError as exc:
            return (name, "incompatible", str(exc))
        optimum = None
        capped = False
        known = parsed.metadata.get("known_optimum")
        if known is not None:
            optimum = parse_number(known)
        else:
            try:
                exact = _exact_optimum(parsed, args.cap)
                optimum = exact.optimum if exact.feasible else None
            except oracle.OracleCapError:
                capped = True
        ratio = _ratio(result.cost, optimum) if result.feasible else None
        return (name, result, optimum, ratio, capped)

    with ThreadPoolExecutor(max_workers=max(args.jobs, 1)) as pool:
        rows = list(pool.map(run, names))
    header = f"{'instance':<32} {'cost':>8} {'optimum':>8} {'ratio':>10} {'bound':>10} flag"
    print(header)
    print("-" * len(header))
    violations = 0
    capped_count = 0
    for row in rows:
        if len(row) == 3:
            print(f"{row[0]:<32} {row[1]}: {row[2]}")
            continue
        name, result, optimum, ratio, capped = row
        bound = result.bound_value
        flag = ""
        if capped:
            flag = "cap-exceeded"
            capped_count += 1
        if not result.feasible:
            flag = "infeasible"
        elif ratio is not None and bound is not None and ratio > bound:
            flag = "BOUND-VIOLATION"
            violations += 1
        print(f"{name:<32} "
              f"{format_number(result.cost) if result.feasible else '-':>8} "
              f"{format_number(optimum) if optimum is not None else '-':>8} "
              f"{format_number(ratio) if ratio is not None else '-':>10} "
              f"{format_number(bound) if bound is not None else '-':>10} {flag}")
    print(f"instances={len(rows)} bound_violations={violations} cap_exceeded={capped_count}")
    return EXIT_OK


def cmd_property_suite(args) -> int:
    sizes = oracle.SuiteSizes(instances=args.instances, n=args.n, m=args.m,
                              f=args.f, k=args.k)
    report = oracle.property_suite(args.seed, sizes, artifact_dir=args.artifacts)
    for outcome in report.outcomes:
        status = "PASS" if outcome.passed else "FAIL"
        extra = f" ({outcome.note})" if outcome.note else ""
        print(f"{status} {outcome.name}: cases={outcome.cases} "
              f"violations={outcome.violations}{extra}")
    for path in report.artifacts:
        print(f"counterexample: {path}")
    return EXIT_OK if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())
