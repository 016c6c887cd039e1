"""Exhaustive check of a policy against every lazy deterministic online algorithm.

An online problem is described as a :class:`Game` whose tree alternates
chance nodes (the next request is revealed, every outcome counted once) and
choice nodes (the algorithm picks one of its lazy options). A deterministic
online algorithm is a choice at every choice node of the tree, so its cost
profile is the sorted multiset union of its subtrees' profiles.

The oracle propagates, per game state, the set of profiles reachable by some
algorithm. Sorted multiset union is monotone in the pointwise order, so only
the pointwise-minimal profiles need to be kept; this is enough both for
dominance verdicts and for counting certificates, and keeps the sets small.
The number of algorithms is tracked separately and exactly.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Callable, Hashable, Sequence

from .analysis import BudgetExceeded
from .kserver import greedy_choice, replace
from .metric import MetricSpace

DEFAULT_TREE_BUDGET = 2 * 10 ** 6

LEAF, CHANCE, CHOICE = "leaf", "chance", "choice"


class Game:
    """Tree of an online problem with integer step costs.

    ``node(state)`` returns ``(LEAF, ())``, ``(CHANCE, children)`` or
    ``(CHOICE, children)`` where ``children`` is a list of
    ``(step_cost, next_state)``.
    """

    def start(self) -> Hashable:
        raise NotImplementedError

    def node(self, state):
        raise NotImplementedError


def merge(a: tuple, b: tuple) -> tuple:
    return tuple(heapq.merge(a, b))


def _shift(profile: tuple, cost: int) -> tuple:
    return tuple(v + cost for v in profile) if cost else profile


def _dominated(p: tuple, q: tuple) -> bool:
    """``q`` is pointwise no larger than ``p``."""
    return all(y <= x for x, y in zip(p, q))


def minimal_profiles(profiles) -> set:
    """Pointwise-minimal elements of a set of equal-length sorted profiles."""
    ordered = sorted(set(profiles), key=sum)
    keep = []
    for p in ordered:
        if not any(_dominated(p, q) for q in keep):
            keep.append(p)
    return set(keep)


def count_algorithms(game: Game, start=None) -> int:
    """Number of distinct deterministic online algorithms (decision trees)."""
    memo = {}

    def rec(state):
        if state in memo:
            return memo[state]
        kind, children = game.node(state)
        if kind == LEAF:
            out = 1
        elif kind == CHANCE:
            out = 1
            for _, nxt in children:
                out *= rec(nxt)
        else:
            out = sum(rec(nxt) for _, nxt in children)
        memo[state] = out
        return out

    return rec(game.start() if start is None else start)


def frontier(game: Game, start=None) -> set:
    """Pointwise-minimal profiles over all online algorithms from ``start``."""
    memo = {}

    def rec(state):
        if state in memo:
            return memo[state]
        kind, children = game.node(state)
        if kind == LEAF:
            out = {(0,)}
        elif kind == CHANCE:
            out = {()}
            for cost, nxt in children:
                sub = [_shift(p, cost) for p in rec(nxt)]
                out = minimal_profiles(merge(a, b) for a in out for b in sub)
        else:
            out = minimal_profiles(_shift(p, cost) for cost, nxt in children for p in rec(nxt))
        memo[state] = out
        return out

    return rec(game.start() if start is None else start)


def policy_profile(game: Game, choose: Callable, start=None) -> tuple:
    """Sorted profile of the algorithm picking ``choose(state, children)`` at choice nodes."""
    memo = {}

    def rec(state):
        if state in memo:
            return memo[state]
        kind, children = game.node(state)
        if kind == LEAF:
            out = (0,)
        elif kind == CHANCE:
            out = ()
            for cost, nxt in children:
                out = merge(out, _shift(rec(nxt), cost))
        else:
            cost, nxt = children[choose(state, children)]
            out = _shift(rec(nxt), cost)
        memo[state] = out
        return out

    return rec(game.start() if start is None else start)


@dataclass
class OracleVerdict:
    dominates: bool
    tree_count: int
    sequences: int
    policy_profile: tuple
    frontier_size: int
    counterexample: tuple | None = None
    counterexample_rank: int | None = None
    frontier: set = field(default_factory=set, repr=False)

    def to_dict(self) -> dict:
        return {
            "dominates": self.dominates,
            "tree_count": self.tree_count,
            "sequences": self.sequences,
            "frontier_size": self.frontier_size,
            "policy_profile": list(self.policy_profile),
            "counterexample": None if self.counterexample is None else list(self.counterexample),
            "counterexample_rank": self.counterexample_rank,
        }


def run_oracle(game: Game, choose: Callable, budget: int | None = DEFAULT_TREE_BUDGET,
               tree_count: int | None = None) -> OracleVerdict:
    """Check the ``choose`` policy's profile is pointwise below every algorithm's.

    ``budget`` caps the size of the game tree (number of expanded states),
    which is what the work depends on; the algorithm count is reported but
    may be astronomically larger.
    """
    reachable_states(game, budget)
    trees = count_algorithms(game) if tree_count is None else tree_count
    front = frontier(game)
    mine = policy_profile(game, choose)
    bad = None
    for p in sorted(front):
        if not _dominated(p, mine):
            rank = next(i for i, (x, y) in enumerate(zip(mine, p)) if y < x)
            if bad is None or (rank, p) < (bad[1], bad[0]):
                bad = (p, rank)
    return OracleVerdict(bad is None, trees, len(mine), mine, len(front),
                         None if bad is None else bad[0], None if bad is None else bad[1], front)


def reachable_states(game: Game, budget: int | None) -> int:
    seen = set()
    stack = [game.start()]
    while stack:
        s = stack.pop()
        if s in seen:
            continue
        seen.add(s)
        if budget is not None and len(seen) > budget:
            raise BudgetExceeded(f"game tree has more than {budget} states")
        kind, children = game.node(s)
        stack.extend(nxt for _, nxt in children)
    return len(seen)


# ---------------------------------------------------------------- k-server

class KServerGame(Game):
    """Lazy k-server: a request on a server is free, otherwise one server moves.

    States are ``(C, remaining)`` at chance nodes and ``(C, remaining, r)``
    at choice nodes. Moves leading to the same configuration are one option.
    """

    def __init__(self, M: MetricSpace, C0: Sequence[int], n: int):
        self.M, self.C0, self.n = M, tuple(sorted(C0)), n

    def start(self):
        return (self.C0, self.n)

    def node(self, state):
        M = self.M
        if len(state) == 2:
            C, rem = state
            if rem == 0:
                return LEAF, ()
            out = []
            for r in range(M.m):
                if r in C:
                    out.append((0, (C, rem - 1)))
                else:
                    out.append((0, (C, rem, r)))
            return CHANCE, out
        C, rem, r = state
        options = {}
        for i, s in enumerate(C):
            X = replace(C, i, r)
            options.setdefault(X, M.distance_units(s, r))
        return CHOICE, [(cost, (X, rem - 1)) for X, cost in sorted(options.items())]


def kserver_greedy_chooser(M: MetricSpace, tie: str = "lowest_point"):
    def choose(state, children):
        C, _, r = state
        X = replace(C, greedy_choice(M, C, r, tie), r)
        return [nxt[0] for _, nxt in children].index(X)
    return choose


def kserver_oracle(M: MetricSpace, C0: Sequence[int], n: int, tie: str = "lowest_point",
                   budget: int | None = DEFAULT_TREE_BUDGET) -> OracleVerdict:
    """Greedy against every lazy online k-server algorithm over ``I_n``."""
    return run_oracle(KServerGame(M, C0, n), kserver_greedy_chooser(M, tie), budget)
