"""Bit-exact instance files and DOT export.

Instances are UTF-8 JSON with all rationals encoded as lowest-terms "p/q"
strings (plain "p" for integers); JSON numbers cannot represent exact
fractions. Keys are emitted sorted and lists in canonical order, so
serialization is byte-stable and parse(serialize(x)) reproduces x.
One file may carry both an instance and a penalty configuration, making
solver outputs self-contained and replayable.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any, Iterable

from .errors import InstanceSyntaxError, SchemaError, ValidationError
from .graph import CostConfiguration, TaskGraph, as_rational, validate
from .instances import Instance

SCHEMA_VERSION = 1


def format_rational(value: Fraction) -> str:
    value = as_rational(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def parse_rational(text: Any, where: str) -> Fraction:
    if not isinstance(text, str):
        raise SchemaError(f"{where}: rational must be a string, got {text!r}")
    try:
        return as_rational(text)
    except (ValueError, TypeError) as exc:
        raise SchemaError(f"{where}: {exc}") from None


def serialize(instance: Instance, config: CostConfiguration | None = None) -> str:
    """Canonical JSON document for an instance (and optionally a config)."""
    graph = instance.graph
    doc: dict[str, Any] = {
        "schema_version": SCHEMA_VERSION,
        "nodes": [
            {"id": i} if graph.labels[i] is None else {"id": i, "label": graph.labels[i]}
            for i in range(graph.n)
        ],
        "edges": [
            {"from": e.tail, "to": e.head, "cost": format_rational(e.cost)}
            for e in sorted(graph.edges, key=lambda e: (e.tail, e.head))
        ],
        "source": graph.source,
        "target": graph.target,
        "beta": format_rational(instance.beta),
    }
    if instance.reward is not None:
        doc["reward"] = format_rational(instance.reward)
    if config is not None:
        doc["extra_costs"] = [
            {"from": u, "to": v, "extra": format_rational(x)}
            for (u, v), x in sorted(config.items())
        ]
    if instance.annotations is not None:
        doc["annotations"] = instance.annotations
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _require(doc: dict, key: str, kind: type, where: str = "document") -> Any:
    if key not in doc:
        raise SchemaError(f"{where}: missing key {key!r}")
    value = doc[key]
    if kind is int and isinstance(value, bool) or not isinstance(value, kind):
        raise SchemaError(f"{where}: key {key!r} must be {kind.__name__}")
    return value


def parse(text: str, *, check: bool = True) -> tuple[Instance, CostConfiguration | None]:
    """Inverse of serialize. With check=True, graph invariants are enforced.

    Raises InstanceSyntaxError for malformed JSON (with line/column),
    SchemaError for structural problems, and ValidationError when the graph
    breaks task-graph invariants.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceSyntaxError(
            f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}",
            line=exc.lineno, column=exc.colno) from None
    if not isinstance(doc, dict):
        raise SchemaError("document root must be an object")
    version = _require(doc, "schema_version", int)
    if version != SCHEMA_VERSION:
        raise SchemaError(f"unsupported schema_version {version}")

    raw_nodes = _require(doc, "nodes", list)
    labels: list[str | None] = [None] * len(raw_nodes)
    seen_ids: set[int] = set()
    for entry in raw_nodes:
        if not isinstance(entry, dict):
            raise SchemaError("nodes entries must be objects")
        node_id = _require(entry, "id", int, "node")
        if not 0 <= node_id < len(raw_nodes) or node_id in seen_ids:
            raise SchemaError(f"node ids must be dense and unique; offending id {node_id}")
        seen_ids.add(node_id)
        if "label" in entry:
            if not isinstance(entry["label"], str):
                raise SchemaError("node label must be a string")
            labels[node_id] = entry["label"]

    raw_edges = _require(doc, "edges", list)
    edges: list[tuple[int, int, Fraction]] = []
    for entry in raw_edges:
        if not isinstance(entry, dict):
            raise SchemaError("edges entries must be objects")
        tail = _require(entry, "from", int, "edge")
        head = _require(entry, "to", int, "edge")
        if not (0 <= tail < len(raw_nodes) and 0 <= head < len(raw_nodes)):
            raise SchemaError(f"edge ({tail}, {head}) references unknown node")
        cost = parse_rational(_require(entry, "cost", object, "edge"), "edge cost")
        edges.append((tail, head, cost))

    source = _require(doc, "source", int)
    target = _require(doc, "target", int)
    if not (0 <= source < len(raw_nodes) and 0 <= target < len(raw_nodes)):
        raise SchemaError("source/target id out of range")
    beta_raw = parse_rational(_require(doc, "beta", object), "beta")
    if not 0 < beta_raw <= 1:
        raise SchemaError(f"beta must lie in (0, 1], got {beta_raw}")

    reward = None
    if "reward" in doc:
        reward = parse_rational(doc["reward"], "reward")

    annotations = None
    if "annotations" in doc:
        if not isinstance(doc["annotations"], dict):
            raise SchemaError("annotations must be an object")
        annotations = doc["annotations"]

    try:
        graph = TaskGraph(len(raw_nodes), edges, source, target, labels)
    except ValueError as exc:
        raise SchemaError(str(exc)) from None

    config = None
    if "extra_costs" in doc:
        raw_extras = doc["extra_costs"]
        if not isinstance(raw_extras, list):
            raise SchemaError("extra_costs must be a list")
        extra: dict[tuple[int, int], Fraction] = {}
        for entry in raw_extras:
            if not isinstance(entry, dict):
                raise SchemaError("extra_costs entries must be objects")
            tail = _require(entry, "from", int, "extra")
            head = _require(entry, "to", int, "extra")
            if not graph.has_edge(tail, head):
                raise SchemaError(f"extra cost on missing edge ({tail}, {head})")
            value = parse_rational(_require(entry, "extra", object, "extra"), "extra cost")
            if value < 0:
                raise SchemaError(f"extra cost on ({tail}, {head}) is negative")
            if (tail, head) in extra:
                raise SchemaError(f"duplicate extra cost for edge ({tail}, {head})")
            extra[(tail, head)] = value
        config = CostConfiguration(extra)

    if check:
        violations = validate(graph)
        if violations:
            raise ValidationError(violations)

    instance = Instance(graph=graph, beta=beta_raw, reward=reward, annotations=annotations)
    return instance, config


_DOT_ESCAPES = str.maketrans({'"': '\\"', "\\": "\\\\"})


def _dot_quote(text: str) -> str:
    return '"' + text.translate(_DOT_ESCAPES) + '"'


def to_dot(instance: Instance,
           config: CostConfiguration | None = None,
           highlight: Iterable[int] | None = None) -> str:
    """Deterministic DOT rendering; edge labels show cost and any extra."""
    graph = instance.graph
    path_nodes = list(highlight) if highlight is not None else []
    path_edges = set(zip(path_nodes, path_nodes[1:]))
    path_set = set(path_nodes)
    lines = ["digraph task_graph {", "  rankdir=LR;"]
    for v in range(graph.n):
        attrs = [f"label={_dot_quote(graph.describe_node(v))}"]
        if v == graph.source or v == graph.target:
            attrs.append("shape=doublecircle")
        if v in path_set:
            attrs.append("color=red")
        lines.append(f"  {v} [{' '.join(attrs)}];")
    for e in sorted(graph.edges, key=lambda e: (e.tail, e.head)):
        label = format_rational(e.cost)
        if config is not None:
            bump = config.get(e.tail, e.head)
            if bump != 0:
                label += f" (+{format_rational(bump)})"
        attrs = [f"label={_dot_quote(label)}"]
        if (e.tail, e.head) in path_edges:
            attrs.append("color=red")
            attrs.append("penwidth=2")
        lines.append(f"  {e.tail} -> {e.head} [{' '.join(attrs)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
