"""Commitment devices: fences, exact search, approximation, subgraph tools."""

import random
from fractions import Fraction as F

import pytest

from penalty_planner import (
    BudgetExceededError,
    DisconnectedError,
    InvalidPathError,
    TaskGraph,
    UnknownEdgeError,
    brute_subgraph_opt,
    build_view,
    cheapest_costs,
    emulate_subgraph,
    exact_infimum,
    fence_required_reward,
    gen_alice,
    gen_noopt,
    gen_random,
    gen_ratio,
    is_motivating,
    min_motivating_reward,
    minmax_path,
    minmax_path_approx,
    path_and_fence,
    reachable_by_ties,
    successor_map,
    tie_walk,
)
from oracles import brute_infimum, materialize_subgraph, random_config

ALICE_CHAIN = tuple(range(11))


def alice(m=10):
    return gen_alice(m).graph


# -- path validation ----------------------------------------------------------


def test_check_path_errors():
    g = alice(4)
    with pytest.raises(InvalidPathError):
        path_and_fence(g, F(1, 3), [0, 1, 2], 1)          # does not end at target
    with pytest.raises(InvalidPathError):
        path_and_fence(g, F(1, 3), [1, 2, 3, 4], 1)       # does not start at source
    with pytest.raises(InvalidPathError):
        path_and_fence(g, F(1, 3), [0, 2, 4], 1)          # missing edge
    with pytest.raises(InvalidPathError):
        path_and_fence(g, F(1, 3), [0], 1)


# -- path_and_fence -----------------------------------------------------------


def test_fence_breaks_noopt_tie_by_margin():
    g = gen_noopt(F(1, 2)).graph
    cfg = path_and_fence(g, F(1, 2), [0, 1, 5, 6], F(1, 10))
    # four-node path: margin = beta*eps/(m-2) = 1/40 lands on the tied chain edge
    assert cfg.extra == {(1, 2): F(1, 40)}


def test_fence_on_alice_chain_needs_no_extras():
    g = alice()
    for eps in (F(1, 10), F(1, 1000)):
        cfg = path_and_fence(g, F(1, 3), ALICE_CHAIN, eps)
        assert cfg.is_zero()


def test_fence_two_node_path_clamps_divisor():
    # s -> t directly, with one straying edge; divisor clamps to 1
    g = TaskGraph(3, [(0, 2, 2), (0, 1, 1), (1, 2, 1)], 0, 2)
    beta, eps = F(1, 2), F(1, 4)
    cfg = path_and_fence(g, beta, [0, 2], eps)
    eta_on = F(2)
    eta_off = 1 + beta * 1
    assert cfg.extra == {(0, 1): eta_on - eta_off + beta * eps}


@pytest.mark.parametrize("seed", range(40))
def test_fence_strictness_and_closeness(seed):
    beta = [F(1, 5), F(1, 3), F(1, 2), F(4, 5)][seed % 4]
    g = gen_random(3 + seed % 9, 0.5, beta, seed=700 + seed).graph
    cfg_star = random_config(g, random.Random(seed))
    r = min_motivating_reward(g, cfg_star, beta)
    path = tie_walk(build_view(g, cfg_star, beta))
    for eps in (F(1), F(1, 10)):
        fence = path_and_fence(g, beta, path, eps)
        fview = build_view(g, fence, beta)
        # the agent's argmin at each path node is exactly the path edge
        for i, v in enumerate(path[:-1]):
            assert fview.argmin[v] == frozenset({(v, path[i + 1])})
        assert reachable_by_ties(fview) == frozenset(path)
        # motivating at a premium of eps over the original scheme
        assert is_motivating(g, fence, beta, r + eps).motivating


# -- fence_required_reward ----------------------------------------------------


def test_required_reward_noopt_chain_is_critical_value():
    for beta in (F(1, 5), F(1, 2), F(2, 3)):
        g = gen_noopt(beta).graph
        assert fence_required_reward(g, beta, [0, 1, 2, 3, 4, 6]) == 1 / beta


def test_required_reward_noopt_branch_pays_the_hub_edge():
    # the branch path carries the 2-beta edge, so its fences cannot do better
    for beta in (F(1, 5), F(1, 2)):
        g = gen_noopt(beta).graph
        assert fence_required_reward(g, beta, [0, 1, 5, 6]) == (2 - beta) / beta


def test_required_reward_alice_chain():
    assert fence_required_reward(alice(), F(1, 3), ALICE_CHAIN) == 6


def test_required_reward_single_edge():
    g = TaskGraph(2, [(0, 1, 5)], 0, 1)
    assert fence_required_reward(g, F(1, 2), [0, 1]) == 10


def test_required_reward_is_limit_of_fenced_min_rewards():
    beta = F(1, 2)
    g = gen_noopt(beta).graph
    chain = (0, 1, 2, 3, 4, 6)
    limit = fence_required_reward(g, beta, chain)
    previous = None
    for k in range(1, 9):
        eps = F(1, 4 ** k)
        got = min_motivating_reward(g, path_and_fence(g, beta, chain, eps), beta)
        assert got > limit
        if previous is not None:
            assert got < previous
        previous = got
    assert previous - limit <= F(1, 4 ** 7)


# -- exact_infimum ------------------------------------------------------------


def test_exact_infimum_noopt():
    for beta in (F(1, 5), F(1, 3), F(1, 2), F(3, 4)):
        g = gen_noopt(beta).graph
        result = exact_infimum(g, beta)
        assert result.value == 1 / beta
        assert result.path == (0, 1, 2, 3, 4, 6)
        assert not result.exhausted


def test_exact_infimum_alice():
    result = exact_infimum(alice(), F(1, 3))
    assert result.value == 6
    assert result.path == ALICE_CHAIN


def test_exact_infimum_single_path_graph():
    g = TaskGraph(3, [(0, 1, 2), (1, 2, 3)], 0, 2)
    result = exact_infimum(g, F(1, 2))
    assert result.value == fence_required_reward(g, F(1, 2), [0, 1, 2])
    assert result.paths_evaluated == 1


@pytest.mark.parametrize("seed", range(60))
def test_exact_infimum_matches_enumeration_oracle(seed):
    beta = [F(1, 5), F(1, 3), F(1, 2), F(2, 3), F(9, 10), F(1)][seed % 6]
    g = gen_random(2 + seed % 9, 0.55, beta, seed=800 + seed).graph
    value, _ = brute_infimum(g, beta)
    result = exact_infimum(g, beta)
    assert result.value == value
    assert not result.exhausted
    # the witness path's own fence value equals the reported infimum
    assert fence_required_reward(g, beta, result.path) == result.value


def test_exact_infimum_budget_flag():
    g = gen_noopt(F(1, 2)).graph  # two paths
    result = exact_infimum(g, F(1, 2), path_budget=1)
    assert result.paths_evaluated == 1
    assert result.value is not None
    # exhausted only if a second evaluation was actually attempted
    full = exact_infimum(g, F(1, 2))
    assert not full.exhausted
    with pytest.raises(ValueError):
        exact_infimum(g, F(1, 2), path_budget=0)


@pytest.mark.parametrize("seed", range(20))
def test_exact_infimum_dominated_by_any_scheme(seed):
    beta = [F(1, 4), F(1, 2), F(5, 6)][seed % 3]
    g = gen_random(3 + seed % 8, 0.5, beta, seed=900 + seed).graph
    inf = exact_infimum(g, beta).value
    for trial in range(3):
        cfg = random_config(g, random.Random(seed * 31 + trial))
        assert inf <= min_motivating_reward(g, cfg, beta)


# -- minmax path & successor map ---------------------------------------------


def test_minmax_alice():
    path, rho = minmax_path(alice(), F(1, 3))
    assert path == ALICE_CHAIN
    assert rho == 2


def test_minmax_single_edge():
    g = TaskGraph(2, [(0, 1, 5)], 0, 1)
    path, rho = minmax_path(g, F(1, 2))
    assert path == (0, 1) and rho == 5


def test_minmax_ratio_instance_stays_on_main_path():
    inst = gen_ratio(F(1, 2), F(1, 2))
    g = inst.graph
    path, rho = minmax_path(g, F(1, 2))
    assert path == tuple(range(65))  # the full main chain
    assert rho == F(9, 8)


def test_minmax_deterministic():
    g = gen_random(10, 0.6, F(1, 2), seed=42).graph
    assert minmax_path(g, F(1, 2)) == minmax_path(g, F(1, 2))


def test_successor_map_chain():
    g = TaskGraph(4, [(0, 1, 1), (1, 2, 1), (2, 3, 1)], 0, 3)
    assert successor_map(g) == {0: 1, 1: 2, 2: 3}


def test_successor_map_alice_tie_resolved_to_lower_id():
    m = 10
    g = alice(m)
    sig = successor_map(g)
    # direct edge is the unique cheapest start until the chain tail
    for i in range(m - 3):
        assert sig[i] == g.target
    # at v_{m-2} (id m-3): chain 1 + d(v_{m-1}) = 3 ties the direct edge; lower id wins
    assert sig[m - 3] == m - 2
    assert sig[m - 2] == m - 1
    assert sig[m - 1] == g.target


def test_successor_map_noopt_prefers_branch():
    # from v1 the branch continuation is strictly cheaper than the chain
    for beta in (F(1, 5), F(1, 2), F(3, 4)):
        g = gen_noopt(beta).graph
        sig = successor_map(g)
        assert sig[1] == 5
        d = cheapest_costs(g)
        assert d[1] == (1 - beta) ** 2 + (2 - beta)


def test_successor_paths_are_cheapest_paths():
    for seed in range(10):
        g = gen_random(4 + seed % 7, 0.5, F(1, 2), seed=1000 + seed).graph
        sig = successor_map(g)
        d = cheapest_costs(g)
        for v in range(g.n):
            total = F(0)
            cur = v
            while cur != g.target:
                total += g.cost(cur, sig[cur])
                cur = sig[cur]
            assert total == d[v]


# -- minmax_path_approx -------------------------------------------------------


def test_approx_alice_exact_numbers():
    g = alice()
    result = minmax_path_approx(g, F(1, 3))
    assert result.minmax_path == ALICE_CHAIN
    assert result.rho == 2
    assert result.guaranteed_reward == 12
    assert result.lower_bound == 6
    # direct edges on the successor chain get their own cost; the two
    # whose successor is the chain get the prohibitive extra
    expected = {(i, 10): F(3) for i in range(7)}
    expected.update({(7, 10): F(18), (8, 10): F(18)})
    assert result.config.extra == expected
    assert result.verification.motivating
    # the scheme is motivating from reward 9 on (extras raise on-path costs)
    assert min_motivating_reward(g, result.config, F(1, 3)) == 9


def test_approx_single_edge_trivial():
    g = TaskGraph(2, [(0, 1, 5)], 0, 1)
    result = minmax_path_approx(g, F(1, 2))
    assert result.config.is_zero()
    assert result.rho == 5
    assert result.guaranteed_reward == 20
    assert result.lower_bound == 10


@pytest.mark.parametrize("seed", range(60))
def test_approx_guarantees_on_random_graphs(seed):
    beta = [F(1, 5), F(1, 3), F(1, 2), F(2, 3), F(9, 10)][seed % 5]
    g = gen_random(3 + seed % 10, 0.5, beta, seed=1100 + seed).graph
    result = minmax_path_approx(g, beta)
    assert is_motivating(g, result.config, beta, result.guaranteed_reward).motivating
    inf = exact_infimum(g, beta).value
    assert inf >= result.lower_bound
    assert result.guaranteed_reward <= 2 * inf
    d0 = cheapest_costs(g)
    dc = cheapest_costs(g, result.config)
    for v in range(g.n):
        assert dc[v] <= 2 * d0[v]
    # every node the agent can visit keeps zeta at most 2*rho
    view = build_view(g, result.config, beta)
    for v in reachable_by_ties(view):
        if v != g.target:
            assert view.zeta[v] <= 2 * result.rho


# -- emulate_subgraph ---------------------------------------------------------


def test_emulate_keep_everything_is_zero():
    g = alice(5)
    cfg = emulate_subgraph(g, [(e.tail, e.head) for e in g.edges], 6)
    assert cfg.is_zero()


def test_emulate_alice_homework_chain():
    m = 10
    g = alice(m)
    chain = [(i, i + 1) for i in range(m - 1)] + [(m - 1, m)]
    cfg = emulate_subgraph(g, chain, 6)
    assert cfg.extra == {(i, m): F(7) for i in range(m - 1)}


def test_emulate_rejects_disconnection_and_unknown_edges():
    g = alice(4)
    with pytest.raises(DisconnectedError):
        emulate_subgraph(g, [(0, 1)], 6)
    with pytest.raises(UnknownEdgeError):
        emulate_subgraph(g, [(2, 0)], 6)


@pytest.mark.parametrize("seed", range(20))
def test_emulation_equivalent_to_true_deletion(seed):
    from oracles import random_connected_subset
    beta = [F(1, 4), F(1, 2), F(1)][seed % 3]
    g = gen_random(4 + seed % 7, 0.55, beta, seed=1200 + seed).graph
    rng = random.Random(seed)
    kept = random_connected_subset(g, rng)
    sub = materialize_subgraph(g, kept)
    r_star = min_motivating_reward(sub, None, beta)
    for reward in (r_star, r_star + 1, max(F(0), r_star - F(1, 2))):
        cfg = emulate_subgraph(g, kept, reward)
        rep_g = is_motivating(g, cfg, beta, reward)
        rep_s = is_motivating(sub, None, beta, reward)
        assert rep_g.motivating == rep_s.motivating
        if rep_s.motivating:
            assert ({g.labels[v] for v in rep_g.reachable}
                    == {sub.labels[v] for v in rep_s.reachable})


# -- brute_subgraph_opt -------------------------------------------------------


def test_brute_single_path_keeps_everything_needed():
    g = TaskGraph(3, [(0, 1, 2), (1, 2, 3)], 0, 2)
    result = brute_subgraph_opt(g, F(1, 2))
    assert result.value == min_motivating_reward(g, None, F(1, 2))
    assert result.kept_edges == frozenset({(0, 1), (1, 2)})


def test_brute_alice_m5_value_six():
    result = brute_subgraph_opt(alice(5), F(1, 3))
    assert result.value == 6


def test_brute_budget_guard():
    g = gen_ratio(F(1, 2), F(1, 2)).graph  # 129 edges
    with pytest.raises(BudgetExceededError):
        brute_subgraph_opt(g, F(1, 2))


def test_brute_cuts_early_shortcuts_on_tiny_temptation_graph():
    # a scaled-down ratio graph: free shortcuts into an expensive hub tempt
    # the agent off the chain; pruning the early ones is strictly better
    beta = F(1, 2)
    hub, target = 6, 5
    edges = [(i, i + 1, F(1, 2)) for i in range(5)]
    edges += [(i, hub, 0) for i in range(5)]
    edges += [(hub, target, 2)]
    g = TaskGraph(7, edges, 0, target)
    full_value = min_motivating_reward(g, None, beta)
    assert full_value == 4  # the agent is lured onto the hub right away
    result = brute_subgraph_opt(g, beta)
    assert result.value == 3
    assert result.value < full_value
    assert (0, hub) not in result.kept_edges
    assert (1, hub) not in result.kept_edges


@pytest.mark.parametrize("seed", range(12))
def test_brute_matches_materialized_enumeration(seed):
    beta = [F(1, 3), F(1, 2), F(4, 5)][seed % 3]
    g = gen_random(4 + seed % 3, 0.6, beta, seed=1300 + seed).graph
    if len(g.edges) > 9:
        pytest.skip("oracle too slow for this draw")
    result = brute_subgraph_opt(g, beta)
    pairs = [(e.tail, e.head) for e in g.edges]
    best = None
    for mask in range(1 << len(pairs)):
        kept = [pairs[i] for i in range(len(pairs)) if mask >> i & 1]
        try:
            sub = materialize_subgraph(g, kept)
        except Exception:
            continue
        value = min_motivating_reward(sub, None, beta)
        if best is None or value < best:
            best = value
    assert result.value == best


def test_brute_respects_ratio_bound():
    for seed in range(8):
        beta = [F(1, 3), F(1, 2)][seed % 2]
        g = gen_random(3 + seed % 5, 0.5, beta, seed=1400 + seed).graph
        if len(g.edges) > 12:
            continue
        sub = brute_subgraph_opt(g, beta)
        inf = exact_infimum(g, beta).value
        d0 = cheapest_costs(g)[g.source]
        assert sub.value <= d0 / beta
        assert inf >= d0
        assert sub.value * beta <= inf * 1  # prohibition/penalty ratio <= 1/beta
