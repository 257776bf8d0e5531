"""A present-biased student, week by week.

A course runs for ten weeks. Each week she can hand in a homework set
(effort 1) or give a one-off presentation (effort 3) and be done. Anyone
minimizing total effort presents in week one. A present-biased agent with
beta = 1/3 perceives future effort at a third of its size - and that makes
her postpone the presentation forever.
"""

from fractions import Fraction as F

from penalty_planner import (
    build_view,
    gen_alice,
    is_motivating,
    min_motivating_reward,
)

instance = gen_alice(m=10, beta=F(1, 3), reward=6)
graph, beta = instance.graph, instance.beta

view = build_view(graph, None, beta)
week1 = graph.source
present_now = view.eta[(week1, graph.target)]
do_homework = view.eta[(week1, week1 + 1)]
print(f"week 1: presenting feels like {present_now}, homework+later-presentation "
      f"feels like {do_homework}")
print("so she does the homework... and repeats that reasoning every week.\n")

report = is_motivating(graph, None, beta, instance.reward)
walk = " -> ".join(graph.describe_node(v) for v in report.walks[0])
print(f"with reward {instance.reward} she reaches the end: {walk}")
print(f"total effort along that walk: "
      f"{sum(graph.cost(u, v) for u, v in zip(report.walks[0], report.walks[0][1:]))} "
      f"(the presentation would have cost 3)\n")

threshold = min_motivating_reward(graph, None, beta)
print(f"minimum motivating reward: {threshold}")
below = is_motivating(graph, None, beta, threshold - F(1, 1000))
print(f"at {threshold - F(1, 1000)} she abandons immediately at "
      f"{[graph.describe_node(v) for v in sorted(below.abandon_nodes)][0]}")
