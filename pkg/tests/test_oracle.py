import pytest

from bijective.analysis import BudgetExceeded, cost_profile
from bijective.metric import cycle, path
from bijective.oracle import (CHANCE, LEAF, KServerGame, count_algorithms, frontier, kserver_greedy_chooser,
                              kserver_oracle, merge, minimal_profiles, policy_profile, run_oracle)
from bijective.paging import PagingGame, PagingInstance
from bijective.reorder import BufferGame

import oracles


def unpruned_profiles(game, state=None):
    """Every algorithm's profile, without pruning (tiny games only)."""
    state = game.start() if state is None else state
    kind, children = game.node(state)
    if kind == LEAF:
        return [(0,)]
    if kind == CHANCE:
        out = [()]
        for cost, nxt in children:
            sub = [tuple(v + cost for v in p) for p in unpruned_profiles(game, nxt)]
            out = [merge(a, b) for a in out for b in sub]
        return out
    return [tuple(v + cost for v in p) for cost, nxt in children for p in unpruned_profiles(game, nxt)]


def test_merge_and_minimal():
    assert merge((0, 2, 5), (1, 2)) == (0, 1, 2, 2, 5)
    assert minimal_profiles([(1, 3), (2, 2), (1, 2), (0, 4)]) == {(1, 2), (0, 4)}


@pytest.mark.parametrize("M, edges, C0, n", [
    (path(3), oracles.path_edges(3), (0, 2), 2),
    (path(3), oracles.path_edges(3), (0, 1), 2),
    (cycle(4), oracles.cycle_edges(4), (0, 2), 2),
    (path(4), oracles.path_edges(4), (1, 2), 2),
])
def test_kserver_oracle_against_explicit_enumeration(M, edges, C0, n):
    D = oracles.distance_table(M.m, edges)
    explicit = [tuple(int(v / M.unit) for v in p) for p in oracles.all_online_profiles(D, C0, n)]
    game = KServerGame(M, C0, n)
    assert count_algorithms(game) == len(explicit)
    assert frontier(game) == oracles.minimal(explicit)
    greedy = policy_profile(game, kserver_greedy_chooser(M))
    assert greedy in set(explicit)
    assert [v * M.unit for v in greedy] == cost_profile("greedy", M, C0, n).costs


def test_paging_and_buffer_pruning_is_exact():
    for game in (PagingGame(PagingInstance((1, 1, 4), 2), 2), BufferGame(2, 2, 3), BufferGame(2, 3, 3)):
        allp = unpruned_profiles(game)
        assert count_algorithms(game) == len(allp)
        assert frontier(game) == minimal_profiles(allp)


def test_single_server_has_one_algorithm():
    M = cycle(5)
    v = kserver_oracle(M, (0,), 3)
    assert v.tree_count == 1 and v.dominates and v.frontier_size == 1


def test_circle_two_servers_greedy_dominates():
    v = kserver_oracle(cycle(4), (0, 2), 3)
    assert v.dominates
    assert v.tree_count >= 8192 and v.sequences == 64
    assert v.counterexample is None


def test_three_point_path_greedy_ties_or_loses():
    v = kserver_oracle(path(3), (0, 2), 3)
    # on this tiny line greedy still ties with the best algorithms
    assert v.dominates and v.frontier_size == 1


def test_oracle_finds_counterexample_for_a_bad_policy():
    M = cycle(6)
    game = KServerGame(M, (0, 3), 2)

    def farthest(state, children):
        return max(range(len(children)), key=lambda i: children[i][0])

    v = run_oracle(game, farthest)
    assert not v.dominates
    assert v.counterexample is not None
    rank = v.counterexample_rank
    assert v.counterexample[rank] < v.policy_profile[rank]


def test_oracle_budget_refusal():
    with pytest.raises(BudgetExceeded):
        kserver_oracle(cycle(6), (0, 3), 4, budget=100)


def test_tree_count_multiplies_over_histories():
    # path 3 from (0, 2): only request 1 gives a choice, and it can come at either step
    game = KServerGame(path(3), (0, 2), 2)
    n_explicit = len(oracles.all_online_profiles(oracles.distance_table(3, oracles.path_edges(3)), (0, 2), 2))
    assert count_algorithms(game) == n_explicit == 2 * 2 ** 3
