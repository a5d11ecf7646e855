"""Canonical JSON wire format for instances, solutions, and reports.

Field order and number formatting are fixed, so parsing a file this module
wrote and serializing it again reproduces the bytes exactly; solution files
reference their instance by content hash.  Numbers are integers, "p/q"
rationals, or "inf"; floats never appear.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from typing import Optional, Sequence

from .core import CandidateEdge, Demand, Graph, InstanceError, SNAInstance, SSLInstance
from .values import format_number, parse_number

FORMAT_INSTANCE = "sl-instance/1"
FORMAT_SOLUTION = "sl-solution/1"
FORMAT_REPORT = "sl-report/1"

KINDS = ("ssl", "sna", "dsna", "ssl-flow-bounds")


class ParseError(ValueError):
    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


def canonical_dumps(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=True) + "\n"


def content_hash(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()


@dataclass(frozen=True)
class ParsedInstance:
    kind: str
    instance: object
    labels: tuple[str, ...]
    metadata: dict
    text_hash: str

    def label_of(self, index: int) -> str:
        return self.labels[index]


def default_labels(n: int) -> tuple[str, ...]:
    return tuple(f"v{i}" for i in range(n))


def infer_kind(instance) -> str:
    if isinstance(instance, SSLInstance):
        return "ssl-flow-bounds" if instance.flow_cost_bound is not None else "ssl"
    if isinstance(instance, SNAInstance):
        return "sna"
    raise InstanceError(f"cannot serialize {type(instance).__name__}")


def serialize_instance(instance, kind: Optional[str] = None,
                       labels: Optional[Sequence[str]] = None,
                       metadata: Optional[dict] = None) -> str:
    kind = kind or infer_kind(instance)
    if kind not in KINDS:
        raise InstanceError(f"unknown kind {kind!r}")
    graph: Graph = instance.graph
    labels = tuple(labels) if labels is not None else default_labels(graph.n)
    if len(labels) != graph.n or len(set(labels)) != graph.n:
        raise InstanceError("labels must be unique and cover every node")
    doc: dict = {"format": FORMAT_INSTANCE, "kind": kind, "directed": graph.directed}
    nodes = []
    for v in range(graph.n):
        rec: dict = {"label": labels[v]}
        if kind in ("ssl", "ssl-flow-bounds"):
            rec["cost"] = format_number(instance.cost[v])
            rec["demand"] = instance.demand[v]
            rec["supply"] = format_number(instance.supply[v])
            rec["capacity"] = format_number(instance.capacity[v])
            if kind == "ssl-flow-bounds":
                rec["flow_cost_bound"] = format_number(instance.flow_cost_bound[v])
        else:
            rec["capacity"] = format_number(instance.capacity[v])
            if instance.cost_mode == "node":
                rec["cost"] = format_number(instance.node_costs[v])
        nodes.append(rec)
    doc["nodes"] = nodes
    edges = []
    for i, (u, v) in enumerate(graph.edges):
        rec = {"u": labels[u], "v": labels[v]}
        if getattr(instance, "edge_costs", None) is not None:
            rec["cost"] = format_number(instance.edge_costs[i])
        edges.append(rec)
    doc["edges"] = edges
    if kind in ("sna", "dsna"):
        doc["cost_mode"] = instance.cost_mode
        doc["candidates"] = [
            {"u": labels[e.u], "v": labels[e.v], "cost": format_number(e.cost)}
            for e in instance.candidates
        ]
        doc["demands"] = [
            {"u": labels[d.u], "v": labels[d.v], "r": d.r} for d in instance.demands
        ]
    doc["metadata"] = _canonical_metadata(metadata or {})
    return canonical_dumps(doc)


def _canonical_metadata(meta: dict) -> dict:
    out = {}
    for key in sorted(meta):
        val = meta[key]
        if isinstance(val, dict):
            val = _canonical_metadata(val)
        out[key] = val
    return out


def _need(doc: dict, key: str, path: str):
    if key not in doc:
        raise ParseError(path, f"missing field {key!r}")
    return doc[key]


def _num(doc: dict, key: str, path: str):
    try:
        return parse_number(_need(doc, key, path))
    except ValueError as exc:
        raise ParseError(f"{path}.{key}", str(exc)) from None


def _int(doc: dict, key: str, path: str) -> int:
    val = _need(doc, key, path)
    if not isinstance(val, int) or isinstance(val, bool):
        raise ParseError(f"{path}.{key}", f"expected an integer, got {val!r}")
    return val


def parse_instance(text: str) -> ParsedInstance:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError("$", f"not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise ParseError("$", "top level must be an object")
    if doc.get("format") != FORMAT_INSTANCE:
        raise ParseError("$.format", f"expected {FORMAT_INSTANCE!r}")
    kind = _need(doc, "kind", "$")
    if kind not in KINDS:
        raise ParseError("$.kind", f"unknown kind {kind!r}")
    directed = _need(doc, "directed", "$")
    if not isinstance(directed, bool):
        raise ParseError("$.directed", "expected true or false")
    nodes = _need(doc, "nodes", "$")
    if not isinstance(nodes, list) or not nodes:
        raise ParseError("$.nodes", "expected a nonempty array")
    labels = []
    index_of = {}
    for i, rec in enumerate(nodes):
        label = _need(rec, "label", f"$.nodes[{i}]")
        if label in index_of:
            raise ParseError(f"$.nodes[{i}].label", f"duplicate label {label!r}")
        index_of[label] = i
        labels.append(label)

    def node_ref(rec: dict, key: str, path: str) -> int:
        label = _need(rec, key, path)
        if label not in index_of:
            raise ParseError(f"{path}.{key}", f"unknown node label {label!r}")
        return index_of[label]

    raw_edges = _need(doc, "edges", "$")
    edges = []
    edge_costs = []
    has_edge_costs = any(isinstance(rec, dict) and "cost" in rec for rec in raw_edges)
    for i, rec in enumerate(raw_edges):
        path = f"$.edges[{i}]"
        edges.append((node_ref(rec, "u", path), node_ref(rec, "v", path)))
        if has_edge_costs:
            edge_costs.append(_num(rec, "cost", path))
    try:
        graph = Graph(len(nodes), tuple(edges), directed)
    except InstanceError as exc:
        raise ParseError("$.edges", str(exc)) from None
    metadata = doc.get("metadata", {})
    try:
        if kind in ("ssl", "ssl-flow-bounds"):
            instance = SSLInstance(
                graph=graph,
                cost=tuple(_num(rec, "cost", f"$.nodes[{i}]") for i, rec in enumerate(nodes)),
                demand=tuple(_int(rec, "demand", f"$.nodes[{i}]") for i, rec in enumerate(nodes)),
                supply=tuple(_num(rec, "supply", f"$.nodes[{i}]") for i, rec in enumerate(nodes)),
                capacity=tuple(_num(rec, "capacity", f"$.nodes[{i}]") for i, rec in enumerate(nodes)),
                edge_costs=tuple(edge_costs) if has_edge_costs else None,
                flow_cost_bound=tuple(
                    _num(rec, "flow_cost_bound", f"$.nodes[{i}]") for i, rec in enumerate(nodes)
                ) if kind == "ssl-flow-bounds" else None,
            )
        else:
            cost_mode = _need(doc, "cost_mode", "$")
            raw_cands = _need(doc, "candidates", "$")
            candidates = []
            for i, rec in enumerate(raw_cands):
                path = f"$.candidates[{i}]"
                candidates.append(CandidateEdge(
                    node_ref(rec, "u", path), node_ref(rec, "v", path),
                    _num(rec, "cost", path) if "cost" in rec else 0,
                ))
            raw_demands = _need(doc, "demands", "$")
            demands = []
            for i, rec in enumerate(raw_demands):
                path = f"$.demands[{i}]"
                demands.append(Demand(node_ref(rec, "u", path), node_ref(rec, "v", path),
                                      _int(rec, "r", path)))
            node_costs = None
            if cost_mode == "node":
                node_costs = tuple(_num(rec, "cost", f"$.nodes[{i}]")
                                   for i, rec in enumerate(nodes))
            instance = SNAInstance(
                graph=graph,
                capacity=tuple(_num(rec, "capacity", f"$.nodes[{i}]")
                               for i, rec in enumerate(nodes)),
                candidates=tuple(candidates),
                demands=tuple(demands),
                cost_mode=cost_mode,
                node_costs=node_costs,
            )
    except InstanceError as exc:
        raise ParseError("$", str(exc)) from None
    return ParsedInstance(kind, instance, tuple(labels), metadata, content_hash(text))


def serialize_solution(parsed_hash: str, kind: str, labels: Sequence[str],
                       sources: Optional[Sequence[int]] = None,
                       picks: Optional[Sequence[int]] = None,
                       metadata: Optional[dict] = None) -> str:
    doc: dict = {"format": FORMAT_SOLUTION, "instance_hash": parsed_hash, "kind": kind}
    if sources is not None:
        doc["sources"] = [labels[v] for v in sorted(sources)]
    if picks is not None:
        doc["picks"] = sorted(picks)
    doc["metadata"] = _canonical_metadata(metadata or {})
    return canonical_dumps(doc)


def parse_solution(text: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError("$", f"not valid JSON: {exc}") from None
    if not isinstance(doc, dict) or doc.get("format") != FORMAT_SOLUTION:
        raise ParseError("$.format", f"expected {FORMAT_SOLUTION!r}")
    _need(doc, "instance_hash", "$")
    return doc
