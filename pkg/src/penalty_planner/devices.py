"""Penalty-based commitment devices.

Constructions: fencing a chosen path with just-enough penalties, the
two-phase minmax-path approximation with its built-in guarantee check,
subgraph emulation via prohibitive extras, and two exhaustive oracles
(exact infimum over paths, brute-force subgraph optimization).

The exact-infimum search works in scaled integer arithmetic internally;
every value it produces is an exact rational, and the unit tests check it
against the straightforward fence recursion, path by path.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence

from .agent import WalkReport, is_motivating
from .errors import (
    BudgetExceededError,
    DisconnectedError,
    InternalVerificationError,
    InvalidPathError,
    UnknownEdgeError,
)
from .graph import (
    CostConfiguration,
    RationalLike,
    TaskGraph,
    ZERO,
    as_rational,
    check_bias,
    cheapest_costs,
)

DEFAULT_PATH_BUDGET = 100_000
DEFAULT_EDGE_BUDGET = 20


def check_path(graph: TaskGraph, path: Sequence[int]) -> tuple[int, ...]:
    """Validate a node sequence as a source-to-target path of the graph."""
    nodes = tuple(int(v) for v in path)
    if len(nodes) < 2:
        raise InvalidPathError("a path needs at least two nodes")
    if nodes[0] != graph.source:
        raise InvalidPathError("path must start at the source")
    if nodes[-1] != graph.target:
        raise InvalidPathError("path must end at the target")
    if len(set(nodes)) != len(nodes):
        raise InvalidPathError("path repeats a node")
    for u, v in zip(nodes, nodes[1:]):
        if not (0 <= u < graph.n and 0 <= v < graph.n and graph.has_edge(u, v)):
            raise InvalidPathError(
                f"missing edge {graph.describe_node(u)} -> {graph.describe_node(v)}")
    return nodes


def _fence_on_path(graph: TaskGraph, beta: Fraction, path: tuple[int, ...],
                   margin: Fraction) -> tuple[dict[tuple[int, int], Fraction],
                                              list[Fraction]]:
    """Shared fence recursion.

    Walks the path backwards; at each path node, every straying edge gets
    exactly enough extra cost to exceed the on-path perceived cost by
    `margin`. Assignments at a node never affect perceived costs already
    fixed at later nodes (the graph is acyclic), so recomputing distances
    once per node is sound. Returns the extras and the on-path perceived
    costs, which are final.
    """
    extra: dict[tuple[int, int], Fraction] = {}
    on_path_eta: list[Fraction] = [ZERO] * (len(path) - 1)
    for i in range(len(path) - 2, -1, -1):
        v, nxt = path[i], path[i + 1]
        d = cheapest_costs(graph, extra)
        eta_on = graph.cost(v, nxt) + beta * d[nxt]
        on_path_eta[i] = eta_on
        for e in graph.out_edges(v):
            if e.head == nxt:
                continue
            eta_off = e.cost + beta * d[e.head]
            bump = eta_on - eta_off + margin
            if bump > 0:
                extra[(e.tail, e.head)] = bump
    return extra, on_path_eta


def path_and_fence(graph: TaskGraph,
                   beta: RationalLike,
                   path: Sequence[int],
                   epsilon: RationalLike) -> CostConfiguration:
    """Fence the given path: penalties that make straying strictly worse.

    For a path of m nodes, every edge leaving the path ends up with a
    perceived cost at least beta*epsilon/(m-2) above the on-path edge, so
    the path nodes are exactly what the agent can reach. The divisor is
    clamped to 1 for degenerate two- and three-node paths.
    """
    b = check_bias(beta)
    eps = as_rational(epsilon)
    if eps <= 0:
        raise ValueError(f"epsilon must be positive, got {eps}")
    nodes = check_path(graph, path)
    margin = b * eps / max(1, len(nodes) - 2)
    extra, _ = _fence_on_path(graph, b, nodes, margin)
    return CostConfiguration(extra)


def fence_required_reward(graph: TaskGraph,
                          beta: RationalLike,
                          path: Sequence[int]) -> Fraction:
    """Reward the fences of this path need, in the limit of vanishing margin.

    Runs the fence recursion with margin zero (ties allowed) and returns the
    maximum on-path perceived cost divided by beta. Every assigned extra is
    a composition of max(0, linear-in-margin) terms, so the on-path costs
    are continuous at margin zero: the returned value is the infimum over
    positive margins of the fenced graph's minimum motivating reward.
    """
    b = check_bias(beta)
    nodes = check_path(graph, path)
    _, etas = _fence_on_path(graph, b, nodes, ZERO)
    return max(etas) / b


@dataclass(frozen=True)
class InfimumResult:
    """Outcome of the exhaustive path search.

    `value` is the infimum of rewards admitting a motivating penalty scheme
    (it may not be attained by any single scheme); `path` is a witness whose
    fences approach it. When the path budget is hit, `exhausted` is set and
    the incumbent so far is returned.
    """

    value: Fraction | None
    path: tuple[int, ...] | None
    exhausted: bool
    paths_evaluated: int


class _SearchStop(Exception):
    pass


def exact_infimum(graph: TaskGraph,
                  beta: RationalLike,
                  path_budget: int = DEFAULT_PATH_BUDGET) -> InfimumResult:
    """Infimum of motivating rewards over all penalty schemes, with witness.

    Every scheme can be replaced by a fence along the agent's path at an
    arbitrarily small premium, so the infimum equals the minimum of
    `fence_required_reward` over all source-to-target paths. The search
    enumerates paths backwards from the target, growing the fence
    incrementally (suffix extras are final once placed), and prunes with
    two sound bounds: the exact suffix maximum and a bottleneck bound on
    any prefix under the unmodified perceived costs.
    """
    b = check_bias(beta)
    if path_budget < 1:
        raise ValueError("path budget must be at least 1")
    if graph.source == graph.target:
        return InfimumResult(ZERO, (graph.source,), False, 0)

    n = graph.n
    source, target = graph.source, graph.target
    p, q = b.numerator, b.denominator
    scale = 1
    for e in graph.edges:
        scale = lcm(scale, e.cost.denominator)
    cost_num = [int(e.cost * scale) for e in graph.edges]
    heads = [e.head for e in graph.edges]
    tails = [e.tail for e in graph.edges]
    out_idx = [list(graph.out_indices(v)) for v in range(n)]
    in_idx = [sorted(graph.in_indices(v), key=lambda i: tails[i]) for v in range(n)]
    rtopo = list(reversed(graph.topological_order()))

    # prefix bottleneck bound under the unmodified perceived costs
    d0 = cheapest_costs(graph)
    eta0 = [graph.edges[i].cost + b * d0[heads[i]] for i in range(len(graph.edges))]
    bottleneck: list[Fraction | None] = [None] * n
    bottleneck[source] = ZERO
    for v in graph.topological_order():
        bv = bottleneck[v]
        if bv is None:
            continue
        for i in out_idx[v]:
            cand = bv if bv > eta0[i] else eta0[i]
            w = heads[i]
            if bottleneck[w] is None or cand < bottleneck[w]:
                bottleneck[w] = cand

    # base distances, scaled by `scale`
    d_base = [0] * n
    for u in rtopo:
        if u == target:
            continue
        d_base[u] = min(cost_num[i] + d_base[heads[i]] for i in out_idx[u])

    best_eta: Fraction | None = None  # incumbent, in perceived-cost units
    best_path: tuple[int, ...] | None = None
    evaluated = 0
    exhausted = False
    suffix: list[int] = [target]
    on_suffix = [False] * n
    on_suffix[target] = True

    def recurse(head: int, d_num: list[int], extras: dict[int, int],
                eta_max: int, mult: int) -> None:
        nonlocal best_eta, best_path, evaluated, exhausted
        mult_next = mult * q
        denom_next = scale * mult_next
        for eidx in in_idx[head]:
            v = tails[eidx]
            if on_suffix[v]:
                continue
            bneck = bottleneck[v]
            if bneck is None:  # v not reachable from the source at all
                continue
            eta_on = cost_num[eidx] * mult_next + p * d_num[head]
            new_max = eta_max * q
            if eta_on > new_max:
                new_max = eta_on
            cand = Fraction(new_max, denom_next)
            if best_eta is not None:
                bound = cand if bneck < cand else bneck
                if bound >= best_eta:
                    continue
            if v == source:
                if evaluated >= path_budget:
                    exhausted = True
                    raise _SearchStop
                evaluated += 1
                if best_eta is None or cand < best_eta:
                    best_eta = cand
                    best_path = (v, *reversed(suffix))
                continue
            new_extras = {i: x * q for i, x in extras.items()}
            for oe in out_idx[v]:
                if oe == eidx:
                    continue
                bump = eta_on - (cost_num[oe] * mult_next + p * d_num[heads[oe]])
                if bump > 0:
                    new_extras[oe] = bump
            new_d = [0] * n
            for u in rtopo:
                if u == target:
                    continue
                new_d[u] = min(cost_num[i] * mult_next + new_extras.get(i, 0) + new_d[heads[i]]
                               for i in out_idx[u])
            suffix.append(v)
            on_suffix[v] = True
            recurse(v, new_d, new_extras, new_max, mult_next)
            suffix.pop()
            on_suffix[v] = False

    # recursion depth tracks path length, which can reach the node count
    import sys
    limit = sys.getrecursionlimit()
    if limit < n + 120:
        sys.setrecursionlimit(n + 120)
    try:
        recurse(target, d_base, {}, 0, 1)
    except _SearchStop:
        pass
    finally:
        sys.setrecursionlimit(limit)

    value = None if best_eta is None else best_eta / b
    return InfimumResult(value=value, path=best_path,
                         exhausted=exhausted, paths_evaluated=evaluated)


def minmax_path(graph: TaskGraph, beta: RationalLike) -> tuple[tuple[int, ...], Fraction]:
    """Path minimizing the maximum perceived edge cost, and that maximum.

    Edges are inserted in non-decreasing order of unmodified perceived cost
    (ties by edge index) until the target becomes reachable; any path inside
    the inserted set is a minmax path. Deterministic.
    """
    b = check_bias(beta)
    if graph.source == graph.target:
        return (graph.source,), ZERO
    d0 = cheapest_costs(graph)
    eta0 = [e.cost + b * d0[e.head] for e in graph.edges]
    order = sorted(range(len(graph.edges)), key=lambda i: (eta0[i], i))
    adj: list[list[int]] = [[] for _ in range(graph.n)]
    for eidx in order:
        e = graph.edges[eidx]
        adj[e.tail].append(e.head)
        # breadth-first search over the inserted edges
        parent: dict[int, int] = {graph.source: -1}
        queue = [graph.source]
        qi = 0
        while qi < len(queue):
            v = queue[qi]
            qi += 1
            if v == graph.target:
                break
            for w in adj[v]:
                if w not in parent:
                    parent[w] = v
                    queue.append(w)
        if graph.target in parent:
            nodes = [graph.target]
            while parent[nodes[-1]] != -1:
                nodes.append(parent[nodes[-1]])
            path = tuple(reversed(nodes))
            rho = max(eta0[graph.edge_index(u, v)] for u, v in zip(path, path[1:]))
            return path, rho
    raise DisconnectedError("target unreachable from source")


def successor_map(graph: TaskGraph) -> dict[int, int]:
    """Cheapest-path successor for every non-target node (lowest id on ties).

    Following the map from any node spells out a cheapest path to the
    target with respect to the base costs.
    """
    d0 = cheapest_costs(graph)
    sig: dict[int, int] = {}
    for v in range(graph.n):
        if v == graph.target:
            continue
        sig[v] = min(e.head for e in graph.out_edges(v)
                     if e.cost + d0[e.head] == d0[v])
    return sig


@dataclass(frozen=True)
class ApproxResult:
    """Penalty scheme with a factor-2 guarantee.

    The scheme is motivating at `guaranteed_reward` = 2*rho/beta (verified
    on construction); no scheme is motivating below `lower_bound` = rho/beta.
    """

    config: CostConfiguration
    minmax_path: tuple[int, ...]
    rho: Fraction
    guaranteed_reward: Fraction
    lower_bound: Fraction
    verification: WalkReport


def minmax_path_approx(graph: TaskGraph, beta: RationalLike) -> ApproxResult:
    """Two-phase factor-2 approximation of the optimal penalty scheme.

    Keeps the minmax path and all cheapest-path successor edges off it free;
    edges that are neither get a prohibitive 3*rho/beta; a successor edge
    leaving a minmax-path node is charged the most expensive base cost on
    its successor chain up to the next shared node. The published guarantee
    is machine-checked on every call.
    """
    b = check_bias(beta)
    path, rho = minmax_path(graph, b)
    sig = successor_map(graph)
    p_edges = set(zip(path, path[1:]))
    p_nodes = set(path)
    prohibitive = 3 * rho / b
    extra: dict[tuple[int, int], Fraction] = {}
    for e in graph.edges:
        key = (e.tail, e.head)
        if key in p_edges:
            continue
        if sig[e.tail] == e.head:
            if e.tail not in p_nodes:
                continue
            # most expensive edge on the successor chain up to the next
            # node shared with the minmax path
            cur = e.tail
            seg_max = ZERO
            while True:
                nxt = sig[cur]
                c = graph.cost(cur, nxt)
                if c > seg_max:
                    seg_max = c
                cur = nxt
                if cur in p_nodes:
                    break
            if seg_max > 0:
                extra[key] = seg_max
        else:
            if prohibitive > 0:
                extra[key] = prohibitive
    config = CostConfiguration(extra)
    guaranteed = 2 * rho / b
    report = is_motivating(graph, config, b, guaranteed)
    if not report.motivating:
        raise InternalVerificationError(
            "approximation failed its own guarantee; this is a bug")
    return ApproxResult(config=config, minmax_path=path, rho=rho,
                        guaranteed_reward=guaranteed, lower_bound=rho / b,
                        verification=report)


def emulate_subgraph(graph: TaskGraph,
                     kept_edges: Iterable[tuple[int, int]],
                     reward: RationalLike) -> CostConfiguration:
    """Penalty scheme equivalent to deleting all edges outside `kept_edges`.

    Removed edges get extra cost reward + 1: any plan crossing one is
    perceived as more expensive than the reward is worth.
    """
    r = as_rational(reward)
    kept = set()
    for (u, v) in kept_edges:
        if not (0 <= u < graph.n and 0 <= v < graph.n and graph.has_edge(u, v)):
            raise UnknownEdgeError(f"kept edge ({u}, {v}) is not in the graph")
        kept.add((u, v))
    # connectivity of the kept subgraph
    seen = {graph.source}
    stack = [graph.source]
    while stack:
        v = stack.pop()
        for e in graph.out_edges(v):
            if (e.tail, e.head) in kept and e.head not in seen:
                seen.add(e.head)
                stack.append(e.head)
    if graph.target not in seen:
        raise DisconnectedError("kept edges do not connect source to target")
    extra = {(e.tail, e.head): r + 1 for e in graph.edges
             if (e.tail, e.head) not in kept}
    return CostConfiguration(extra)


@dataclass(frozen=True)
class SubgraphOptResult:
    kept_edges: frozenset[tuple[int, int]]
    value: Fraction


def brute_subgraph_opt(graph: TaskGraph,
                       beta: RationalLike,
                       edge_budget: int = DEFAULT_EDGE_BUDGET) -> SubgraphOptResult:
    """Best prohibition device by exhaustive enumeration of edge subsets.

    Considers every subset that still connects source to target, simulates
    the agent on the induced (implicitly preprocessed) subgraph, and returns
    a subset minimizing the minimum motivating reward. Intended as a small-
    scale oracle; refuses graphs with more than `edge_budget` edges.
    """
    b = check_bias(beta)
    m = len(graph.edges)
    if m > edge_budget:
        raise BudgetExceededError(
            f"{m} edges exceed the enumeration budget of {edge_budget}")
    n = graph.n
    source, target = graph.source, graph.target
    p, q = b.numerator, b.denominator
    scale = 1
    for e in graph.edges:
        scale = lcm(scale, e.cost.denominator)
    cost_num = [int(e.cost * scale) for e in graph.edges]
    heads = [e.head for e in graph.edges]
    out_idx = [list(graph.out_indices(v)) for v in range(n)]
    rtopo = [v for v in reversed(graph.topological_order()) if v != target]

    best_num: int | None = None
    best_mask = 0
    for mask in range(1 << m):
        # distances to target over kept edges; None marks dead ends, which
        # the implicit preprocessing removes along with edges into them
        d: list[int | None] = [None] * n
        d[target] = 0
        for u in rtopo:
            best_d: int | None = None
            for i in out_idx[u]:
                if not mask >> i & 1:
                    continue
                dw = d[heads[i]]
                if dw is None:
                    continue
                val = cost_num[i] + dw
                if best_d is None or val < best_d:
                    best_d = val
            d[u] = best_d
        if d[source] is None:
            continue
        # worst lowest-perceived-cost over the tie-reachable set
        worst = 0
        seen = 1 << source
        stack = [source]
        while stack:
            v = stack.pop()
            if v == target:
                continue
            zeta: int | None = None
            tie_heads: list[int] = []
            for i in out_idx[v]:
                if not mask >> i & 1:
                    continue
                dw = d[heads[i]]
                if dw is None:
                    continue
                val = cost_num[i] * q + p * dw
                if zeta is None or val < zeta:
                    zeta = val
                    tie_heads = [heads[i]]
                elif val == zeta:
                    tie_heads.append(heads[i])
            if zeta > worst:
                worst = zeta
            for w in tie_heads:
                if not seen >> w & 1:
                    seen |= 1 << w
                    stack.append(w)
        if best_num is None or worst < best_num:
            best_num = worst
            best_mask = mask
    if best_num is None:
        raise DisconnectedError("no edge subset connects source to target")
    kept = frozenset((graph.edges[i].tail, graph.edges[i].head)
                     for i in range(m) if best_mask >> i & 1)
    return SubgraphOptResult(kept_edges=kept, value=Fraction(best_num, scale * p))
