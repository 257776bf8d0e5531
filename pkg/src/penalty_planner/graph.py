"""Task graphs with exact rational costs.

A project is modeled as a DAG: nodes are states, edges are tasks with
nonnegative costs, and every source-to-target path is a valid way to finish.
Penalty schemes ("cost configurations") add extra cost to chosen edges.

All arithmetic uses `fractions.Fraction`. Agent behavior hinges on exact
ties between perceived costs, so floats are rejected at the boundary.
"""

from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

from .errors import (
    BiasOutOfRangeError,
    GraphStructureError,
    NoPathError,
    TargetHasNoChoiceError,
    UnknownEdgeError,
)

Rational = Fraction
RationalLike = Union[Fraction, int, str]

ZERO = Fraction(0)
ONE = Fraction(1)


def as_rational(value: RationalLike) -> Fraction:
    """Coerce an int, a 'p/q' string, or a Fraction to an exact Fraction.

    Floats are rejected: silently converting them would change tie semantics.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rational values")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not a rational: {value!r}") from exc
    raise TypeError(f"exact rational required, got {type(value).__name__} ({value!r})")


def check_bias(beta: RationalLike, *, strict: bool = False) -> Fraction:
    """Validate a present-bias value: 0 < beta <= 1 (beta < 1 when strict)."""
    b = as_rational(beta)
    if not 0 < b <= 1 or (strict and b == 1):
        bound = "(0, 1)" if strict else "(0, 1]"
        raise BiasOutOfRangeError(f"present bias must lie in {bound}, got {b}")
    return b


@dataclass(frozen=True)
class Edge:
    tail: int
    head: int
    cost: Fraction


@dataclass(frozen=True)
class Violation:
    kind: str
    message: str


class TaskGraph:
    """Directed task graph with dense integer node ids and optional labels.

    Construction is permissive so that `validate` can report problems
    (cycles, negative costs, parallel edges) as data; only node ids out of
    range and duplicate labels are rejected outright. All planning
    operations assume a graph for which `validate` returns no violations
    and which has been through `preprocess`.
    """

    __slots__ = ("n", "labels", "edges", "source", "target",
                 "_out", "_in", "_pair", "_topo", "_label_to_id")

    def __init__(
        self,
        n: int,
        edges: Iterable[tuple[int, int, RationalLike]],
        source: int,
        target: int,
        labels: Sequence[str | None] | None = None,
    ):
        if n <= 0:
            raise ValueError("graph needs at least one node")
        if not 0 <= source < n or not 0 <= target < n:
            raise ValueError("source/target id out of range")
        self.n = n
        if labels is None:
            self.labels: tuple[str | None, ...] = (None,) * n
        else:
            if len(labels) != n:
                raise ValueError("labels length must equal node count")
            self.labels = tuple(labels)
        built = []
        for tail, head, cost in edges:
            if not 0 <= tail < n or not 0 <= head < n:
                raise ValueError(f"edge ({tail}, {head}) references unknown node")
            built.append(Edge(tail, head, as_rational(cost)))
        self.edges: tuple[Edge, ...] = tuple(built)
        self.source = source
        self.target = target

        out: list[list[int]] = [[] for _ in range(n)]
        inc: list[list[int]] = [[] for _ in range(n)]
        pair: dict[tuple[int, int], int] = {}
        for idx, e in enumerate(self.edges):
            out[e.tail].append(idx)
            inc[e.head].append(idx)
            pair.setdefault((e.tail, e.head), idx)
        self._out = tuple(tuple(v) for v in out)
        self._in = tuple(tuple(v) for v in inc)
        self._pair = pair
        self._topo: tuple[int, ...] | None = None

        label_to_id: dict[str, int] = {}
        for i, lab in enumerate(self.labels):
            if lab is None:
                continue
            if lab in label_to_id:
                raise ValueError(f"duplicate node label {lab!r}")
            label_to_id[lab] = i
        self._label_to_id = label_to_id

    # -- basic queries ----------------------------------------------------

    def out_edges(self, v: int) -> tuple[Edge, ...]:
        return tuple(self.edges[i] for i in self._out[v])

    def in_edges(self, v: int) -> tuple[Edge, ...]:
        return tuple(self.edges[i] for i in self._in[v])

    def out_indices(self, v: int) -> tuple[int, ...]:
        return self._out[v]

    def in_indices(self, v: int) -> tuple[int, ...]:
        return self._in[v]

    def has_edge(self, tail: int, head: int) -> bool:
        return (tail, head) in self._pair

    def edge_index(self, tail: int, head: int) -> int:
        try:
            return self._pair[(tail, head)]
        except KeyError:
            raise UnknownEdgeError(f"no edge {self.describe_node(tail)} -> "
                                   f"{self.describe_node(head)}") from None

    def cost(self, tail: int, head: int) -> Fraction:
        return self.edges[self.edge_index(tail, head)].cost

    def edge_pairs(self) -> list[tuple[int, int]]:
        return [(e.tail, e.head) for e in self.edges]

    def node_by_label(self, label: str) -> int:
        try:
            return self._label_to_id[label]
        except KeyError:
            raise KeyError(f"no node labeled {label!r}") from None

    def describe_node(self, v: int) -> str:
        lab = self.labels[v]
        return lab if lab is not None else str(v)

    # -- structure ---------------------------------------------------------

    def _kahn(self) -> tuple[list[int], bool]:
        indeg = [0] * self.n
        for e in self.edges:
            indeg[e.head] += 1
        ready = [v for v in range(self.n) if indeg[v] == 0]
        heapq.heapify(ready)
        order: list[int] = []
        while ready:
            v = heapq.heappop(ready)
            order.append(v)
            for idx in self._out[v]:
                h = self.edges[idx].head
                indeg[h] -= 1
                if indeg[h] == 0:
                    heapq.heappush(ready, h)
        return order, len(order) == self.n

    def topological_order(self) -> tuple[int, ...]:
        """Deterministic (lexicographically smallest) topological order."""
        if self._topo is None:
            order, acyclic = self._kahn()
            if not acyclic:
                raise GraphStructureError("graph contains a cycle")
            self._topo = tuple(order)
        return self._topo

    def reachable_from(self, start: int, *, backward: bool = False) -> set[int]:
        adj = self._in if backward else self._out
        seen = {start}
        queue = deque([start])
        while queue:
            v = queue.popleft()
            for idx in adj[v]:
                e = self.edges[idx]
                w = e.tail if backward else e.head
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
        return seen

    # -- equality ----------------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, TaskGraph):
            return NotImplemented
        return (self.n == other.n
                and self.labels == other.labels
                and self.source == other.source
                and self.target == other.target
                and set(self.edges) == set(other.edges))

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return (f"TaskGraph(n={self.n}, edges={len(self.edges)}, "
                f"source={self.describe_node(self.source)}, "
                f"target={self.describe_node(self.target)})")


class CostConfiguration:
    """Nonnegative extra cost per edge; edges absent from the map pay zero.

    Zero entries are dropped on construction, so configurations with the
    same semantics compare equal.
    """

    __slots__ = ("_extra",)

    def __init__(self, extra: Mapping[tuple[int, int], RationalLike] | None = None):
        store: dict[tuple[int, int], Fraction] = {}
        if extra:
            for (tail, head), value in extra.items():
                x = as_rational(value)
                if x < 0:
                    raise ValueError(f"extra cost on ({tail}, {head}) is negative: {x}")
                if x != 0:
                    store[(int(tail), int(head))] = x
        self._extra = store

    @property
    def extra(self) -> dict[tuple[int, int], Fraction]:
        return dict(self._extra)

    def get(self, tail: int, head: int) -> Fraction:
        return self._extra.get((tail, head), ZERO)

    def is_zero(self) -> bool:
        return not self._extra

    def items(self):
        return self._extra.items()

    def __len__(self) -> int:
        return len(self._extra)

    def check_for(self, graph: TaskGraph) -> None:
        """Raise UnknownEdgeError if any keyed edge is not in the graph."""
        for (tail, head) in self._extra:
            if not (0 <= tail < graph.n and 0 <= head < graph.n
                    and graph.has_edge(tail, head)):
                raise UnknownEdgeError(f"configuration references missing edge ({tail}, {head})")

    def __eq__(self, other) -> bool:
        if not isinstance(other, CostConfiguration):
            return NotImplemented
        return self._extra == other._extra

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        if self.is_zero():
            return "CostConfiguration.zero()"
        inside = ", ".join(f"({u}, {v}): {x}" for (u, v), x in sorted(self._extra.items()))
        return f"CostConfiguration({{{inside}}})"

    @staticmethod
    def zero() -> "CostConfiguration":
        return _ZERO_CONFIG


_ZERO_CONFIG = CostConfiguration()


def _coerce_config(config: CostConfiguration | Mapping | None) -> CostConfiguration:
    if config is None:
        return _ZERO_CONFIG
    if isinstance(config, CostConfiguration):
        return config
    return CostConfiguration(config)


# -- operations -------------------------------------------------------------


def validate(graph: TaskGraph) -> list[Violation]:
    """Check task-graph invariants; violations are returned, never raised.

    Reported kinds: dangling-edge (impossible through the constructor, kept
    for parsed raw data), parallel-edge, negative-cost, cycle, no-path.
    """
    violations: list[Violation] = []
    seen_pairs: set[tuple[int, int]] = set()
    for e in graph.edges:
        key = (e.tail, e.head)
        if key in seen_pairs:
            violations.append(Violation(
                "parallel-edge",
                f"more than one edge {graph.describe_node(e.tail)} -> {graph.describe_node(e.head)}"))
        seen_pairs.add(key)
        if e.cost < 0:
            violations.append(Violation(
                "negative-cost",
                f"edge {graph.describe_node(e.tail)} -> {graph.describe_node(e.head)} "
                f"has cost {e.cost}"))
    _, acyclic = graph._kahn()
    if not acyclic:
        violations.append(Violation("cycle", "graph is not acyclic"))
    elif graph.target not in graph.reachable_from(graph.source):
        violations.append(Violation(
            "no-path",
            f"target {graph.describe_node(graph.target)} unreachable from "
            f"source {graph.describe_node(graph.source)}"))
    return violations


def preprocess(graph: TaskGraph) -> TaskGraph:
    """Restrict to nodes lying on some source-to-target path.

    Node ids are re-densified (ascending old id); labels, source and target
    survive. Idempotent. Raises NoPathError if the target is unreachable.
    """
    forward = graph.reachable_from(graph.source)
    if graph.target not in forward:
        raise NoPathError("target unreachable from source")
    backward = graph.reachable_from(graph.target, backward=True)
    keep = sorted(forward & backward)
    remap = {old: new for new, old in enumerate(keep)}
    edges = [(remap[e.tail], remap[e.head], e.cost)
             for e in graph.edges if e.tail in remap and e.head in remap]
    labels = [graph.labels[old] for old in keep]
    return TaskGraph(len(keep), edges, remap[graph.source], remap[graph.target], labels)


def cheapest_costs(graph: TaskGraph,
                   config: CostConfiguration | Mapping | None = None) -> dict[int, Fraction]:
    """Exact cost of a cheapest path to the target from every node.

    Edge costs are base cost plus configured extra. Computed by a single
    reverse-topological sweep; requires a preprocessed graph (every node
    must reach the target).
    """
    cfg = _coerce_config(config)
    d: dict[int, Fraction] = {}
    for v in reversed(graph.topological_order()):
        if v == graph.target:
            d[v] = ZERO
            continue
        best: Fraction | None = None
        for idx in graph.out_indices(v):
            e = graph.edges[idx]
            if e.head not in d:
                continue
            candidate = e.cost + cfg.get(e.tail, e.head) + d[e.head]
            if best is None or candidate < best:
                best = candidate
        if best is None:
            raise NoPathError(
                f"node {graph.describe_node(v)} has no path to the target; "
                "run preprocess() first")
        d[v] = best
    return d


def perceived_cost(graph: TaskGraph,
                   config: CostConfiguration | Mapping | None,
                   beta: RationalLike,
                   edge: tuple[int, int]) -> Fraction:
    """Immediate edge cost (with extra) plus discounted remaining cost."""
    b = check_bias(beta)
    cfg = _coerce_config(config)
    tail, head = edge
    e = graph.edges[graph.edge_index(tail, head)]
    d = cheapest_costs(graph, cfg)
    return e.cost + cfg.get(tail, head) + b * d[head]


def lowest_perceived(graph: TaskGraph,
                     config: CostConfiguration | Mapping | None,
                     beta: RationalLike,
                     node: int) -> tuple[Fraction, frozenset[tuple[int, int]]]:
    """Minimum perceived cost at a node and the full set of edges attaining it.

    The complete argmin set matters: ties are broken arbitrarily, so every
    minimizing edge is a move the agent might make.
    """
    if node == graph.target:
        raise TargetHasNoChoiceError("the target node has no outgoing choice")
    b = check_bias(beta)
    cfg = _coerce_config(config)
    d = cheapest_costs(graph, cfg)
    best: Fraction | None = None
    argmin: list[tuple[int, int]] = []
    for idx in graph.out_indices(node):
        e = graph.edges[idx]
        val = e.cost + cfg.get(e.tail, e.head) + b * d[e.head]
        if best is None or val < best:
            best = val
            argmin = [(e.tail, e.head)]
        elif val == best:
            argmin.append((e.tail, e.head))
    if best is None:
        raise NoPathError(f"node {graph.describe_node(node)} has no outgoing edge")
    return best, frozenset(argmin)
