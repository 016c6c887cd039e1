"""Weighted paging, run as k-server on a weighted star.

Page ``i`` sits on star leaf ``i + 1`` at distance ``c_i / 2`` from the
centre, so a fault that evicts ``q`` to load ``p`` costs ``c_q/2 + c_p/2``.
Requests name pages by index; the centre is never requested.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from itertools import product
from fractions import Fraction
from typing import Sequence

from .analysis import CostProfile, check_budget, process_histogram
from .kserver import offline_opt
from .metric import MetricError, _as_fraction, weighted_star
from .oracle import CHANCE, CHOICE, LEAF, Game, run_oracle

PAGING_POLICIES = ("greedy_min_cost", "max_cost", "fifo", "lru")
PAGE_TIES = ("lowest_id", "highest_id")


@dataclass(frozen=True)
class PagingInstance:
    """Pages with positive eviction costs and a cache of size ``k``."""

    costs: tuple
    k: int
    names: tuple = ()

    def __post_init__(self):
        costs = tuple(_as_fraction(c) for c in self.costs)
        if any(c <= 0 for c in costs):
            raise MetricError("eviction costs must be positive")
        if not 1 <= self.k < len(costs):
            raise MetricError("need 1 <= k < number of pages")
        names = tuple(self.names) or tuple(str(i) for i in range(len(costs)))
        if len(names) != len(costs) or len(set(names)) != len(names):
            raise MetricError("page names must be unique, one per page")
        object.__setattr__(self, "costs", costs)
        object.__setattr__(self, "names", names)

    @classmethod
    def from_pairs(cls, pages: Sequence[tuple], k: int) -> "PagingInstance":
        """Build from ``(name, cost)`` pairs."""
        return cls(tuple(c for _, c in pages), k, tuple(str(p) for p, _ in pages))

    @property
    def size(self) -> int:
        return len(self.costs)

    def page(self, name) -> int:
        """Page index from a name or index."""
        if isinstance(name, int):
            if not 0 <= name < self.size:
                raise MetricError(f"invalid page {name!r}")
            return name
        try:
            return self.names.index(str(name))
        except ValueError:
            raise MetricError(f"unknown page {name!r}") from None

    def default_cache(self) -> tuple:
        """The ``k`` cheapest pages (ties by lowest index)."""
        order = sorted(range(self.size), key=lambda i: (self.costs[i], i))
        return tuple(sorted(order[:self.k]))

    def check_cache(self, cache) -> tuple:
        cache = tuple(sorted(self.page(p) for p in cache))
        if len(cache) != self.k or len(set(cache)) != self.k:
            raise MetricError(f"initial cache must hold {self.k} distinct pages")
        return cache


def paging_to_star(inst: PagingInstance, cache=None):
    """Weighted star of the instance and the servers' initial configuration."""
    M = weighted_star([c / 2 for c in inst.costs])
    cache = inst.default_cache() if cache is None else inst.check_cache(cache)
    return M, tuple(p + 1 for p in cache)


class PagingPolicy:
    """Eviction policy with hashable state.

    The state is the cache as a tuple: sorted for the cost-based policies,
    in insertion order for ``fifo`` and recency order for ``lru`` (the
    eviction candidate first).
    """

    def __init__(self, inst: PagingInstance, name: str = "greedy_min_cost", tie: str = "lowest_id"):
        if name not in PAGING_POLICIES:
            raise ValueError(f"unknown paging policy {name!r}; expected one of {PAGING_POLICIES}")
        if tie not in PAGE_TIES:
            raise ValueError(f"unknown tie rule {tie!r}")
        self.inst, self.name, self.tie = inst, name, tie
        self.M, _ = paging_to_star(inst)

    def start(self, cache=None) -> tuple:
        return self.inst.default_cache() if cache is None else self.inst.check_cache(cache)

    def fault_cost_units(self, out: int, page: int) -> int:
        return self.M.distance_units(out + 1, page + 1)

    def victim(self, cache: tuple) -> int:
        costs = self.inst.costs
        if self.name in ("fifo", "lru"):
            return cache[0]
        sign = 1 if self.name == "greedy_min_cost" else -1
        idsign = 1 if self.tie == "lowest_id" else -1
        return min(cache, key=lambda p: (sign * costs[p], idsign * p))

    def advance(self, cache: tuple, page: int):
        """``(next_state, cost_units)`` after serving ``page``."""
        if page in cache:
            if self.name == "lru":
                cache = tuple(p for p in cache if p != page) + (page,)
            return cache, 0
        out = self.victim(cache)
        rest = tuple(p for p in cache if p != out)
        nxt = rest + (page,) if self.name in ("fifo", "lru") else tuple(sorted(rest + (page,)))
        return nxt, self.fault_cost_units(out, page)


def paging_step(policy: str, inst: PagingInstance, state, request, tie: str = "lowest_id"):
    """One request; returns ``(state, cost)`` with the cost as a Fraction."""
    pol = PagingPolicy(inst, policy, tie)
    state, units = pol.advance(tuple(state), inst.page(request))
    return state, units * pol.M.unit


def paging_run(policy: str, inst: PagingInstance, requests: Sequence, cache=None,
               tie: str = "lowest_id") -> Fraction:
    """Total cost of ``policy`` on ``requests``."""
    pol = PagingPolicy(inst, policy, tie)
    state, total = pol.start(cache), 0
    for r in requests:
        state, cost = pol.advance(state, inst.page(r))
        total += cost
    return total * pol.M.unit


def offline_opt_paging(inst: PagingInstance, requests: Sequence, cache=None) -> Fraction:
    """Optimal offline cost, by the k-server optimum on the reduced star."""
    M, C0 = paging_to_star(inst, cache)
    return offline_opt(M, C0, [inst.page(r) + 1 for r in requests])[0]


def paging_profile(policy: str, inst: PagingInstance, n: int, cache=None, tie: str = "lowest_id",
                   budget: int | None = 10 ** 7) -> CostProfile:
    """Sorted costs over every length-``n`` page request sequence.

    ``policy="offline_opt"`` gives the optimum's profile.
    """
    check_budget(inst.size, n, budget)
    M, C0 = paging_to_star(inst, cache)
    pages = range(inst.size)
    meta = dict(algorithm=policy, metric=M.label, C0=C0, n=n)
    if policy in ("offline_opt", "opt"):
        hist = Counter(int(offline_opt(M, C0, [p + 1 for p in seq])[0] / M.unit)
                       for seq in product(pages, repeat=n))
        return CostProfile.from_counter(hist, M.unit, **meta)
    pol = PagingPolicy(inst, policy, tie)
    hist = process_histogram(pol.start(cache), pol.advance, pages, n)
    return CostProfile.from_counter(hist, M.unit, **meta)


class PagingGame(Game):
    """Every lazy online paging algorithm: on a fault, any cached page may go."""

    def __init__(self, inst: PagingInstance, n: int, cache=None):
        self.inst, self.n = inst, n
        self.cache = inst.default_cache() if cache is None else inst.check_cache(cache)
        self.M, _ = paging_to_star(inst)

    def start(self):
        return (self.cache, self.n)

    def node(self, state):
        if len(state) == 2:
            cache, rem = state
            if rem == 0:
                return LEAF, ()
            return CHANCE, [(0, (cache, rem - 1) if p in cache else (cache, rem, p))
                            for p in range(self.inst.size)]
        cache, rem, page = state
        return CHOICE, [(self.M.distance_units(out + 1, page + 1),
                         (tuple(sorted(set(cache) - {out} | {page})), rem - 1)) for out in cache]


def paging_oracle(inst: PagingInstance, n: int, cache=None, tie: str = "lowest_id", budget=2 * 10 ** 6):
    """greedy_min_cost against every lazy online paging algorithm."""
    game = PagingGame(inst, n, cache)
    pol = PagingPolicy(inst, "greedy_min_cost", tie)

    def choose(state, children):
        cache, _, page = state
        return list(cache).index(pol.victim(cache))

    return run_oracle(game, choose, budget)
