"""Simulation of the present-biased agent.

The agent walks from source toward target, always along an edge of minimum
perceived cost, and keeps going at a node only while that minimum does not
exceed the discounted reward. Ties are broken arbitrarily, so the analysis
is done over the closure of all tie choices rather than a single walk.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .graph import (
    CostConfiguration,
    RationalLike,
    TaskGraph,
    ZERO,
    _coerce_config,
    as_rational,
    check_bias,
    cheapest_costs,
)

DEFAULT_WALK_CAP = 64


@dataclass(frozen=True)
class AgentView:
    """All derived quantities for a fixed (graph, configuration, bias).

    `d` is the cheapest remaining cost per node, `eta` the perceived cost per
    edge, `zeta` the minimum perceived cost per non-target node, and `argmin`
    the set of edges attaining that minimum.
    """

    graph: TaskGraph
    config: CostConfiguration
    beta: Fraction
    d: Mapping[int, Fraction]
    eta: Mapping[tuple[int, int], Fraction]
    zeta: Mapping[int, Fraction]
    argmin: Mapping[int, frozenset[tuple[int, int]]]


@dataclass(frozen=True)
class WalkReport:
    """Outcome of simulating the agent for a fixed reward."""

    reward: Fraction
    motivating: bool
    reachable: frozenset[int]
    abandon_nodes: frozenset[int]
    walks: tuple[tuple[int, ...], ...]
    truncated: bool


def build_view(graph: TaskGraph,
               config: CostConfiguration | Mapping | None,
               beta: RationalLike) -> AgentView:
    """Populate d, eta, zeta and the argmin relation, all exactly."""
    b = check_bias(beta)
    cfg = _coerce_config(config)
    d = cheapest_costs(graph, cfg)
    eta: dict[tuple[int, int], Fraction] = {}
    zeta: dict[int, Fraction] = {}
    argmin: dict[int, frozenset[tuple[int, int]]] = {}
    for v in range(graph.n):
        if v == graph.target:
            continue
        best: Fraction | None = None
        ties: list[tuple[int, int]] = []
        for e in graph.out_edges(v):
            val = e.cost + cfg.get(e.tail, e.head) + b * d[e.head]
            eta[(e.tail, e.head)] = val
            if best is None or val < best:
                best = val
                ties = [(e.tail, e.head)]
            elif val == best:
                ties.append((e.tail, e.head))
        # preprocessed graphs guarantee an outgoing edge at every non-target node
        assert best is not None, "non-target node without outgoing edges"
        zeta[v] = best
        argmin[v] = frozenset(ties)
    return AgentView(graph=graph, config=cfg, beta=b, d=d, eta=eta,
                     zeta=zeta, argmin=argmin)


def reachable_by_ties(view: AgentView) -> frozenset[int]:
    """Nodes the agent can occupy under some tie-breaking, for any reward.

    Closure of the source under the argmin relation. Edge choice never
    depends on the reward, only the decision to stop does, so this set is
    reward-independent.
    """
    graph = view.graph
    seen = {graph.source}
    queue = deque([graph.source])
    while queue:
        v = queue.popleft()
        if v == graph.target:
            continue
        for (_, head) in view.argmin[v]:
            if head not in seen:
                seen.add(head)
                queue.append(head)
    return frozenset(seen)


def tie_walk(view: AgentView) -> tuple[int, ...]:
    """One concrete walk from source to target (lowest head id on ties)."""
    graph = view.graph
    walk = [graph.source]
    v = graph.source
    while v != graph.target:
        v = min(head for (_, head) in view.argmin[v])
        walk.append(v)
    return tuple(walk)


def _enumerate_walks(view: AgentView, threshold: Fraction,
                     cap: int) -> tuple[tuple[tuple[int, ...], ...], bool]:
    """Tie walks from the source; each ends at the target or at the first
    node whose lowest perceived cost exceeds the threshold."""
    graph = view.graph
    walks: list[tuple[int, ...]] = []
    truncated = False
    stack: list[tuple[int, ...]] = [(graph.source,)]
    while stack:
        prefix = stack.pop()
        v = prefix[-1]
        if v == graph.target or view.zeta[v] > threshold:
            if len(walks) >= cap:
                truncated = True
                break
            walks.append(prefix)
            continue
        heads = sorted((head for (_, head) in view.argmin[v]), reverse=True)
        for head in heads:
            stack.append(prefix + (head,))
    return tuple(walks), truncated


def is_motivating(graph: TaskGraph,
                  config: CostConfiguration | Mapping | None,
                  beta: RationalLike,
                  reward: RationalLike,
                  *,
                  walk_cap: int = DEFAULT_WALK_CAP) -> WalkReport:
    """Decide whether the agent reaches the target under every tie choice.

    Motivating means: at every reachable non-target node the lowest
    perceived cost is at most beta * reward (the threshold is closed).
    Walk enumeration is for reporting only and is capped; the verdict is
    computed on the reachable set, which is exact.
    """
    r = as_rational(reward)
    if r < 0:
        raise ValueError("reward must be nonnegative")
    view = build_view(graph, config, beta)
    threshold = view.beta * r
    reachable = reachable_by_ties(view)
    abandon = frozenset(v for v in reachable
                        if v != graph.target and view.zeta[v] > threshold)
    walks, truncated = _enumerate_walks(view, threshold, walk_cap)
    return WalkReport(reward=r,
                      motivating=not abandon,
                      reachable=reachable,
                      abandon_nodes=abandon,
                      walks=walks,
                      truncated=truncated)


def min_motivating_reward(graph: TaskGraph,
                          config: CostConfiguration | Mapping | None,
                          beta: RationalLike) -> Fraction:
    """Least reward for which the configured graph is motivating.

    This is max zeta over reachable decision nodes, divided by beta; the
    graph is motivating exactly for rewards >= the returned value.
    """
    view = build_view(graph, config, beta)
    reachable = reachable_by_ties(view)
    worst = ZERO
    for v in reachable:
        if v != graph.target and view.zeta[v] > worst:
            worst = view.zeta[v]
    return worst / view.beta
