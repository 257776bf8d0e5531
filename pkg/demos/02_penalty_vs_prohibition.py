"""Why penalties beat outright prohibition, by up to a factor of 1/beta.

The benchmark graph: a long chain of very cheap tasks, where every
interior node offers a free shortcut into a hub whose exit costs 1/beta.
A designer who can only *forbid* tasks must sever so many shortcuts that
the agent needs a reward of 1/beta^2. A designer who may *price* the
shortcuts gets away with (1+eps)/beta: the mere threat of a small fee
keeps the agent walking, and the fee is never collected.
"""

from fractions import Fraction as F

from penalty_planner import (
    CostConfiguration,
    TaskGraph,
    gen_ratio,
    is_motivating,
    min_motivating_reward,
    preprocess,
)

beta, eps = F(1, 2), F(1, 2)
instance = gen_ratio(beta, eps)
graph = instance.graph
hub = graph.node_by_label("w")
print(f"graph: {graph.n} nodes, {len(graph.edges)} edges, beta={beta}, eps={eps}\n")

# penalties: price every hub entry at eps
penalty = CostConfiguration({(e.tail, e.head): eps
                             for e in graph.edges if e.head == hub})
target_reward = (1 + eps) / beta
print(f"penalty scheme (extra {eps} on each shortcut) is motivating at "
      f"(1+eps)/beta = {target_reward}: "
      f"{is_motivating(graph, penalty, beta, target_reward).motivating}")

# prohibition: cut the first k shortcuts and simulate the remaining subgraph
def value_cutting_first(k: int) -> F:
    removed = {(e.tail, e.head) for e in graph.edges if e.head == hub}
    removed = set(sorted(removed)[:k])
    kept = [(e.tail, e.head, e.cost) for e in graph.edges
            if (e.tail, e.head) not in removed]
    sub = preprocess(TaskGraph(graph.n, kept, graph.source, graph.target, graph.labels))
    return min_motivating_reward(sub, None, beta)

print("\nprohibition needs, cutting the first k shortcuts:")
for k in (0, 16, 32, 48, 64):
    print(f"  k = {k:2d}: reward {value_cutting_first(k)}")
print(f"\nno prohibition gets below 1/beta^2 = {1 / beta ** 2}; "
      f"penalties reach {target_reward} - a factor {(1/beta**2)/target_reward} apart")
