"""Reordering buffer management: serve coloured items, minimising colour switches.

Items enter a buffer of size ``k`` in input order as soon as a slot is free.
The station serves buffered items of its active colour; when none is left
it must switch, and a policy picks the new colour among the buffered ones.
The initial active colour is none, so the first selection counts as a
switch, and the buffer is drained after the input ends.
"""

from __future__ import annotations

from collections import Counter
from functools import lru_cache
from itertools import product
from typing import Sequence

from .analysis import BudgetExceeded, CostProfile, check_budget
from .oracle import CHANCE, CHOICE, LEAF, Game, run_oracle

RBM_POLICIES = ("greedy_max_block", "min_block", "fifo_colour")


def choose_colour(policy: str, buffer: Sequence[tuple]):
    """New active colour for ``buffer`` (a list of ``(arrival, colour)``)."""
    if policy == "fifo_colour":
        return min(buffer)[1]
    counts = Counter(c for _, c in buffer)
    if policy == "greedy_max_block":
        return min(counts, key=lambda c: (-counts[c], c))
    if policy == "min_block":
        return min(counts, key=lambda c: (counts[c], c))
    raise ValueError(f"unknown buffer policy {policy!r}; expected one of {RBM_POLICIES}")


def rbm_run(policy: str, k: int, seq: Sequence):
    """Simulate the lazy service loop.

    Returns ``(switches, trace)`` where the trace lists ``("switch", colour)``
    and ``("serve", arrival_index, colour)`` events in order.
    """
    if k < 1:
        raise ValueError("buffer size must be at least 1")
    if policy not in RBM_POLICIES:
        raise ValueError(f"unknown buffer policy {policy!r}; expected one of {RBM_POLICIES}")
    buffer, nxt, active, switches, trace = [], 0, None, 0, []
    while True:
        while len(buffer) < k and nxt < len(seq):
            buffer.append((nxt, seq[nxt]))
            nxt += 1
        item = next((it for it in buffer if it[1] == active), None)
        if item is not None:
            buffer.remove(item)
            trace.append(("serve",) + item)
            continue
        if not buffer:
            return switches, trace
        active = choose_colour(policy, buffer)
        switches += 1
        trace.append(("switch", active))


def offline_opt_rbm(k: int, seq: Sequence, budget: int | None = 10 ** 6) -> int:
    """Fewest switches over all lazy schedules that know the whole input."""
    if k < 1:
        raise ValueError("buffer size must be at least 1")
    seq = tuple(seq)
    calls = [0]

    @lru_cache(maxsize=None)
    def best(buffer, active, nxt):
        calls[0] += 1
        if budget is not None and calls[0] > budget:
            raise BudgetExceeded(f"offline buffer search exceeded {budget} states")
        buf = list(buffer)
        while True:
            while len(buf) < k and nxt < len(seq):
                buf.append(seq[nxt])
                nxt += 1
            if active in buf:
                buf.remove(active)
                continue
            break
        if not buf:
            return 0
        key = tuple(sorted(buf))
        return 1 + min(best(key, c, nxt) for c in set(buf))

    return best((), None, 0)


def rbm_profile(policy: str, k: int, colours: int, n: int, budget: int | None = 10 ** 6) -> CostProfile:
    """Sorted switch counts over all ``colours**n`` inputs (colours are ``0..colours-1``)."""
    check_budget(colours, n, budget)
    seqs = product(range(colours), repeat=n)
    if policy in ("offline_opt", "opt"):
        hist = Counter(offline_opt_rbm(k, s) for s in seqs)
    else:
        hist = Counter(rbm_run(policy, k, s)[0] for s in seqs)
    return CostProfile.from_counter(hist, 1, algorithm=policy, metric=f"rbm:{colours}", C0=(k,), n=n)


class BufferGame(Game):
    """Every lazy online buffer algorithm: any buffered colour at a forced switch.

    A state is ``(counts, active, remaining)`` where ``counts[c]`` is the
    number of buffered items of colour ``c``.
    """

    def __init__(self, k: int, colours: int, n: int):
        self.k, self.colours, self.n = k, colours, n

    def start(self):
        return ((0,) * self.colours, None, self.n)

    def node(self, state):
        counts, active, rem = state
        if rem > 0 and sum(counts) < self.k:
            return CHANCE, [(0, (_bump(counts, c, 1), active, rem - 1)) for c in range(self.colours)]
        if active is not None and counts[active]:
            return CHANCE, [(0, (_bump(counts, active, -1), active, rem))]
        if not any(counts):
            return LEAF, ()
        return CHOICE, [(1, (counts, c, rem)) for c in range(self.colours) if counts[c]]


def _bump(counts, c, delta):
    return counts[:c] + (counts[c] + delta,) + counts[c + 1:]


def rbm_oracle(k: int, colours: int, n: int, budget=2 * 10 ** 6):
    """greedy_max_block against every lazy online buffer algorithm."""

    def choose(state, children):
        counts = state[0]
        best = min((c for c in range(len(counts)) if counts[c]), key=lambda c: (-counts[c], c))
        return [nxt[1] for _, nxt in children].index(best)

    return run_oracle(BufferGame(k, colours, n), choose, budget)
