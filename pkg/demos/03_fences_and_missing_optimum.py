"""Fencing a path, and a graph whose best penalty scheme does not exist.

The fence construction charges every edge that strays from a chosen path
just enough that staying on the path is strictly preferred. On the
seven-node graph built here, the agent starts out exactly indifferent
between two branches; any fence must break the tie with a positive margin,
so the required reward can get arbitrarily close to 1/beta without ever
reaching it. That is why the solver reports an infimum, not a minimum.
"""

from fractions import Fraction as F

from penalty_planner import (
    build_view,
    exact_infimum,
    fence_required_reward,
    gen_noopt,
    min_motivating_reward,
    path_and_fence,
)

beta = F(1, 2)
graph = gen_noopt(beta).graph
view = build_view(graph, None, beta)
v1 = graph.node_by_label("v1")
print(f"at v1 both choices have perceived cost "
      f"{view.eta[(v1, graph.node_by_label('v2'))]} - an exact tie\n")

chain = [graph.node_by_label(x) for x in ("s", "v1", "v2", "v3", "v4", "t")]
print("fencing the chain with shrinking margins:")
for k in (1, 2, 4, 8, 16):
    eps = F(1, 2 ** k)
    fence = path_and_fence(graph, beta, chain, eps)
    needed = min_motivating_reward(graph, fence, beta)
    print(f"  margin {str(eps):>8}: extras {dict(fence.items())}, "
          f"motivating from {needed}")

limit = fence_required_reward(graph, beta, chain)
result = exact_infimum(graph, beta)
print(f"\nlimit of those values: {limit}")
print(f"exact_infimum agrees: {result.value} "
      f"(witness {' -> '.join(graph.describe_node(v) for v in result.path)})")
print("no single scheme attains it: every fence leaves the start node's "
      "perceived cost strictly above 1.")
