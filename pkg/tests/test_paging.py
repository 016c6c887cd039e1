import itertools
from fractions import Fraction

import pytest

from bijective.analysis import stochastic_dominance
from bijective.kserver import simulate
from bijective.metric import MetricError
from bijective.paging import (PAGING_POLICIES, PagingInstance, PagingPolicy, offline_opt_paging, paging_oracle,
                              paging_profile, paging_run, paging_step, paging_to_star)

import oracles


@pytest.fixture
def pqr():
    return PagingInstance.from_pairs([("p", 2), ("q", 2), ("r", 20)], 2)


def test_reduction_to_star(pqr):
    M, C0 = paging_to_star(pqr)
    assert [M.distance(0, leaf) for leaf in (1, 2, 3)] == [1, 1, 10]
    assert C0 == (1, 2)
    # moving a server from q's leaf to p's leaf costs c_q/2 + c_p/2
    assert M.distance(2, 1) == 2


def test_named_runs(pqr):
    assert paging_run("greedy_min_cost", pqr, ["r", "p"]) == 13
    assert paging_run("max_cost", pqr, ["r", "p"]) == 22
    assert offline_opt_paging(pqr, ["r", "p"]) == 11
    M, C0 = paging_to_star(pqr)
    assert simulate("greedy", M, C0, (3, 1)).total_cost == 13


def test_steps(pqr):
    assert paging_step("greedy_min_cost", pqr, (0, 1), "p") == ((0, 1), 0)
    assert paging_step("greedy_min_cost", pqr, (0, 2), "q") == ((1, 2), 2)
    assert paging_step("max_cost", pqr, (0, 2), "q") == ((0, 1), 11)


def test_fifo_and_lru_orders():
    inst = PagingInstance((1, 1, 1), 2)
    pol = PagingPolicy(inst, "fifo")
    state, _ = pol.advance((0, 1), 0)
    state, cost = pol.advance(state, 2)
    assert state == (1, 2) and cost * pol.M.unit == 1
    lru = PagingPolicy(inst, "lru")
    state, _ = lru.advance((0, 1), 0)
    state, _ = lru.advance(state, 2)
    assert state == (0, 2)


def test_all_hits_cost_nothing(pqr):
    for name in PAGING_POLICIES:
        assert paging_run(name, pqr, ["p", "q", "q", "p"]) == 0
    assert offline_opt_paging(pqr, ["p", "q"]) == 0


def test_optimum_matches_eviction_brute_force():
    costs = (2, 2, 20)
    inst = PagingInstance(costs, 2)
    for n in range(1, 6):
        for seq in itertools.product(range(3), repeat=n):
            opt = offline_opt_paging(inst, seq)
            assert opt == oracles.paging_opt(costs, (0, 1), seq)
            assert opt <= paging_run("greedy_min_cost", inst, seq)
            assert paging_run("greedy_min_cost", inst, seq) == oracles.paging_greedy(costs, (0, 1), seq)


def test_profiles_and_dominance():
    inst = PagingInstance((1, 2, 2, 5), 2)
    g = paging_profile("greedy_min_cost", inst, 4)
    o = paging_profile("offline_opt", inst, 4)
    assert g.size == 4 ** 4
    assert stochastic_dominance(o, g) in ("A_dominates", "equal")
    assert g.total == sum(paging_run("greedy_min_cost", inst, s) for s in itertools.product(range(4), repeat=4))


def test_oracle_small_instance():
    v = paging_oracle(PagingInstance((1, 1, 4), 2), 3)
    assert v.dominates and v.tree_count == 8192


def test_invalid_instances():
    with pytest.raises(MetricError):
        PagingInstance((1, 0, 2), 2)
    with pytest.raises(MetricError):
        PagingInstance((1, 2), 2)
    with pytest.raises(MetricError):
        PagingInstance((1, 2, 3), 2).check_cache((0, 0))
    with pytest.raises(ValueError):
        PagingPolicy(PagingInstance((1, 2, 3), 2), "random")


def test_fractional_costs_stay_exact():
    inst = PagingInstance((Fraction(1, 3), Fraction(1, 2), 1), 2)
    assert paging_run("greedy_min_cost", inst, [2]) == Fraction(1, 6) + Fraction(1, 2)
