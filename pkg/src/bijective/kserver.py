"""k-server algorithms as pure step functions, plus a simulator.

A configuration is a sorted tuple of point ids (a multiset of server
positions). Online algorithms are :class:`Policy` objects whose state is
hashable and fully determines their future behaviour, which is what lets
:mod:`bijective.analysis` memoise cost profiles over all request sequences.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment

from .metric import MetricError, MetricSpace, dmin_units, dmin_vector

TIE_RULES = ("lowest_point", "highest_point", "clockwise")
ALGORITHMS = ("greedy", "kcenter", "wfa", "gadget", "offline_opt")

Configuration = tuple


def make_config(M: MetricSpace, points: Sequence[int], k: int | None = None) -> Configuration:
    """Validate ``points`` against ``M`` and return the canonical sorted tuple."""
    conf = tuple(sorted(M.check_point(p) for p in points))
    if not conf:
        raise MetricError("empty configuration")
    if k is not None and len(conf) != k:
        raise MetricError(f"configuration has {len(conf)} servers, expected {k}")
    return conf


def replace(C: Configuration, index: int, r: int) -> Configuration:
    """Configuration after server ``index`` of ``C`` moves to ``r``."""
    return tuple(sorted(C[:index] + (r,) + C[index + 1:]))


def move_units(M: MetricSpace, A: Sequence[int], B: Sequence[int]) -> int:
    """Minimum-matching movement cost between two configurations, in units."""
    if len(A) != len(B):
        raise ValueError("configurations differ in size")
    if len(A) <= 5:
        return min(sum(M.distance_units(a, b) for a, b in zip(A, perm))
                   for perm in itertools.permutations(B))
    cost = np.array([[M.distance_units(a, b) for b in B] for a in A])
    rows, cols = linear_sum_assignment(cost)
    return int(cost[rows, cols].sum())


def move_cost(M: MetricSpace, A, B) -> Fraction:
    return move_units(M, A, B) * M.unit


# ---------------------------------------------------------------- greedy

def greedy_choice(M: MetricSpace, C: Configuration, r: int, tie: str = "lowest_point") -> int:
    """Index in ``C`` of the server greedy moves to ``r``."""
    dists = [M.distance_units(s, r) for s in C]
    best = min(dists)
    cands = [i for i, d in enumerate(dists) if d == best]
    if len(cands) == 1:
        return cands[0]
    if tie == "lowest_point":
        return min(cands, key=lambda i: (C[i], i))
    if tie == "highest_point":
        return max(cands, key=lambda i: (C[i], -i))
    if tie == "clockwise":
        # the server that reaches r by travelling in the increasing-id direction
        if M.kind == "cycle":
            step = best // M._step
            cw = [i for i in cands if (r - C[i]) % M.m == step]
        elif M.kind == "path":
            cw = [i for i in cands if C[i] <= r]
        else:
            cw = []
        return min(cw or cands, key=lambda i: (C[i], i))
    raise ValueError(f"unknown tie rule {tie!r}")


def greedy_step(M: MetricSpace, C: Configuration, r: int, tie: str = "lowest_point"):
    """Serve ``r`` with the nearest server. Returns ``(C', cost)``."""
    M.check_point(r)
    if r in C:
        return C, Fraction(0)
    i = greedy_choice(M, C, r, tie)
    return replace(C, i, r), M.distance_units(C[i], r) * M.unit


# ---------------------------------------------------------------- k-center

def kcenter_anchors(M: MetricSpace, k: int, budget: int = 2_000_000) -> Configuration:
    """Anchor positions minimising the covering radius.

    Uniform spacing is returned whenever the discretisation admits it (paths
    with ``2k | m-1`` and cycles with ``k | m``); otherwise all ``C(m, k)``
    placements are searched, preferring smaller total ``dmin`` and then the
    lexicographically smallest placement.
    """
    if not 1 <= k <= M.m:
        raise ValueError(f"cannot place {k} anchors on {M.m} points")
    if k == M.m:
        return tuple(range(M.m))
    if M.kind == "path" and (M.m - 1) % (2 * k) == 0:
        gap = (M.m - 1) // (2 * k)
        return tuple((2 * i + 1) * gap for i in range(k))
    if M.kind == "cycle" and M.m % k == 0:
        spacing = M.m // k
        return tuple(spacing // 2 + i * spacing for i in range(k))
    if math.comb(M.m, k) > budget:
        raise ValueError("k-center search space exceeds budget")
    best = None
    for C in itertools.combinations(range(M.m), k):
        dv = dmin_vector(M, C)
        key = (int(dv.max()), int(dv.sum()), C)
        if best is None or key < best:
            best = key
    return best[2]


def kcenter_step(M: MetricSpace, anchors: Configuration, r: int) -> Fraction:
    """Cost of serving ``r`` and returning to the anchors: ``2 * dmin``."""
    M.check_point(r)
    return 2 * dmin_units(M, anchors, r) * M.unit


# ---------------------------------------------------------------- policies

class Policy:
    """An online algorithm with hashable, Markov state.

    ``advance`` returns ``(state, cost_units, server)`` where ``server`` is the
    index (in the pre-step configuration) of the server that moved, or None
    when nothing moved or several servers moved.
    """

    name = "policy"
    lazy = True

    def start(self, M: MetricSpace, C0: Configuration):
        raise NotImplementedError

    def advance(self, M: MetricSpace, state, r: int):
        raise NotImplementedError

    def config_of(self, state) -> Configuration:
        return state

    def last_costs(self, M: MetricSpace, state):
        """Cost of every possible next request as an int array, or None."""
        return None

    def __repr__(self):
        return f"{type(self).__name__}()"


class Greedy(Policy):
    """Serve each request with the nearest server."""

    name = "greedy"

    def __init__(self, tie: str = "lowest_point"):
        if tie not in TIE_RULES:
            raise ValueError(f"unknown tie rule {tie!r}")
        self.tie = tie

    def __repr__(self):
        return f"Greedy(tie={self.tie!r})"

    def start(self, M, C0):
        return tuple(C0)

    def advance(self, M, C, r):
        if r in C:
            return C, 0, None
        i = greedy_choice(M, C, r, self.tie)
        return replace(C, i, r), M.distance_units(C[i], r), i

    def last_costs(self, M, C):
        return dmin_vector(M, C)


class KCenter(Policy):
    """Serve with the closest anchored server, which then returns home.

    If the run starts away from the anchors, the first request also pays the
    cost of moving onto them.
    """

    name = "kcenter"
    lazy = False

    def __init__(self, anchors: Sequence[int] | None = None):
        self.anchors = None if anchors is None else tuple(sorted(anchors))

    def __repr__(self):
        return f"KCenter(anchors={self.anchors})"

    def resolve(self, M, k):
        return self.anchors if self.anchors is not None else kcenter_anchors(M, k)

    def start(self, M, C0):
        anchors = self.resolve(M, len(C0))
        C0 = tuple(C0)
        return (anchors, move_units(M, C0, anchors) if C0 != anchors else 0)

    def advance(self, M, state, r):
        anchors, pending = state
        dists = [M.distance_units(a, r) for a in anchors]
        best = min(dists)
        server = None if best == 0 else dists.index(best)
        return (anchors, 0), pending + 2 * best, server

    def config_of(self, state):
        return state[0]

    def last_costs(self, M, state):
        anchors, pending = state
        return 2 * dmin_vector(M, anchors) + pending


# ---------------------------------------------------------------- work functions

class WorkFunctionTable:
    """All k-server configurations of a metric with their movement costs.

    Configurations are multisets, indexed in lexicographic order.
    """

    def __init__(self, M: MetricSpace, k: int, limit: int = 5000):
        n_conf = math.comb(M.m + k - 1, k)
        if n_conf > limit:
            raise ValueError(f"{n_conf} configurations exceed the work-function limit {limit}")
        self.M = M
        self.k = k
        self.configs = list(itertools.combinations_with_replacement(range(M.m), k))
        self.index = {C: i for i, C in enumerate(self.configs)}
        D = np.empty((len(self.configs), len(self.configs)), dtype=np.int64)
        for i, A in enumerate(self.configs):
            for j in range(i, len(self.configs)):
                D[i, j] = D[j, i] = move_units(M, A, self.configs[j])
        self.D = D
        self.contains = np.zeros((M.m, len(self.configs)), dtype=bool)
        for i, C in enumerate(self.configs):
            self.contains[list(C), i] = True
        self.holders = [np.flatnonzero(self.contains[r]) for r in range(M.m)]

    def initial(self, C0: Configuration) -> np.ndarray:
        return self.D[self.index[tuple(C0)]].copy()

    def update(self, w: np.ndarray, r: int) -> np.ndarray:
        """``w_i(X) = min over Y containing r of w_{i-1}(Y) + D(Y, X)``."""
        idx = self.holders[r]
        return (w[idx][:, None] + self.D[idx]).min(axis=0)

    def work_function(self, C0: Configuration, requests: Sequence[int]) -> np.ndarray:
        w = self.initial(C0)
        for r in requests:
            w = self.update(w, r)
        return w


@lru_cache(maxsize=32)
def work_function_table(M: MetricSpace, k: int) -> WorkFunctionTable:
    return WorkFunctionTable(M, k)


class OfflineOptimum(Policy):
    """Offline optimum as a cost process over normalised work functions.

    The state after a prefix is ``(k, w - min(w))``; the per-request cost is
    the increase of the work function's minimum, so the costs along a
    sequence sum to OPT. There is no meaningful configuration per step.
    """

    name = "offline_opt"
    lazy = False

    def start(self, M, C0):
        table = work_function_table(M, len(C0))
        return len(C0), tuple(table.initial(tuple(C0)).tolist())

    def advance(self, M, state, r):
        k, w = state
        w = work_function_table(M, k).update(np.asarray(w, dtype=np.int64), r)
        low = int(w.min())
        return (k, tuple((w - low).tolist())), low, None

    def last_costs(self, M, state):
        k, w = state
        table = work_function_table(M, k)
        w = np.asarray(w, dtype=np.int64)
        # min over X of w_new(X) is attained at some X holding r
        return np.where(table.contains, w[None, :], np.iinfo(np.int64).max).min(axis=1)

    def config_of(self, state):
        raise TypeError("the offline optimum has no online configuration")


class WFA(Policy):
    """Work Function Algorithm restricted to lazy moves.

    Moves to the configuration ``X`` containing the request (one server
    replaced) minimising ``w_i(X) + D(C, X)``; ties go to the smallest
    configuration in lexicographic order.
    """

    name = "wfa"

    def start(self, M, C0):
        table = work_function_table(M, len(C0))
        return tuple(C0), tuple(table.initial(tuple(C0)).tolist())

    def advance(self, M, state, r):
        C, w = state
        table = work_function_table(M, len(C))
        w = table.update(np.asarray(w, dtype=np.int64), r)
        ci = table.index[C]
        if r in C:
            X, server = C, None
        else:
            options = []
            for i in range(len(C)):
                X = replace(C, i, r)
                xi = table.index[X]
                options.append((int(w[xi] + table.D[ci, xi]), X, i))
            _, X, server = min(options)
        cost = int(table.D[ci, table.index[X]])
        return (X, tuple((w - w.min()).tolist())), cost, server

    def config_of(self, state):
        return state[0]


def wfa_step(M: MetricSpace, history: Sequence[int], C0: Configuration,
             C: Configuration, r: int):
    """One WFA decision from configuration ``C`` after ``history``.

    Returns ``(C', cost)``.
    """
    table = work_function_table(M, len(C0))
    w = table.work_function(tuple(C0), history)
    state = (tuple(C), tuple((w - w.min()).tolist()))
    (X, _), cost, _ = WFA().advance(M, state, M.check_point(r))
    return X, cost * M.unit


# ---------------------------------------------------------------- gadget

def gadget_points(x1: Fraction, x2: Fraction) -> tuple[Fraction, Fraction]:
    """Thresholds ``(x3, x4)`` of the 3-request gadget."""
    return Fraction(5, 8) * x2 + Fraction(3, 8) * x1, 10 * x2


def is_unfavourable(x1: Fraction, x2: Fraction, t: Fraction) -> bool:
    return x1 <= t / 3 and Fraction(2, 3) * t <= x2 <= t


class Gadget(Policy):
    """Greedy that plays a 3-request gadget from unfavourable configurations.

    Coordinates are normalised to ``[0, 1]`` along the path. Outside a gadget
    the algorithm is greedy. When greedy's configuration ``(x1, x2)`` is
    unfavourable for threshold ``t``, the next three requests are handled as
    follows: the first is served by server 1 when it lands in
    ``[(x1 + x2) / 2, x3]``; after that success, the second is served by
    server 2 when it lands at or beyond ``x4``. Every other request of the
    block, and always the third, moves both servers to where greedy would
    have them.
    """

    name = "gadget"
    lazy = False

    def __init__(self, t=Fraction(1, 10), tie: str = "lowest_point"):
        t = Fraction(t) if not isinstance(t, float) else Fraction(repr(t))
        if not 0 < t < Fraction(23, 80):
            raise ValueError("gadget threshold t must lie in (0, 23/80)")
        self.t = t
        self.tie = tie

    def __repr__(self):
        return f"Gadget(t={self.t}, tie={self.tie!r})"

    def start(self, M, C0):
        if M.kind != "path":
            raise MetricError("the gadget algorithm runs on paths only")
        if len(C0) != 2:
            raise ValueError("the gadget algorithm needs exactly 2 servers")
        # (phase, A's configuration, greedy's configuration, success so far)
        return (0, tuple(C0), tuple(C0), False)

    def _greedy(self, M, C, r):
        if r in C:
            return C
        return replace(C, greedy_choice(M, C, r, self.tie), r)

    def advance(self, M, state, r):
        phase, A, G, success = state
        if phase == 0:
            x1, x2 = M.position(A[0]), M.position(A[1])
            if not is_unfavourable(x1, x2, self.t):
                G2 = self._greedy(M, A, r)
                moved = None if G2 == A else greedy_choice(M, A, r, self.tie)
                return (0, G2, G2, False), move_units(M, A, G2), moved
            phase = 1
        G2 = self._greedy(M, G, r)
        u = M.position(r)
        if phase == 1:
            x1, x2 = M.position(A[0]), M.position(A[1])
            x3, _ = gadget_points(x1, x2)
            if (x1 + x2) / 2 <= u <= x3:
                A2 = (r, A[1]) if r <= A[1] else (A[1], r)
                return (2, A2, G2, True), M.distance_units(A[0], r), 0
            return (2, G2, G2, False), move_units(M, A, G2), None
        if phase == 2 and success:
            # server 2 has not moved since the block started
            x4 = 10 * M.position(A[1])
            if u >= x4:
                A2 = tuple(sorted((A[0], r)))
                return (3, A2, G2, True), M.distance_units(A[1], r), 1
            return (3, G2, G2, False), move_units(M, A, G2), None
        if phase == 2:
            return (3, G2, G2, False), move_units(M, A, G2), None
        # phase 3: always resynchronise, then back to plain greedy
        return (0, G2, G2, False), move_units(M, A, G2), None

    def config_of(self, state):
        return state[1]


def gadget_algorithm(M: MetricSpace, C0: Configuration, requests: Sequence[int], t) -> Fraction:
    """Total cost of the gadget algorithm on ``requests``."""
    return simulate(Gadget(t), M, C0, requests).total_cost


# ---------------------------------------------------------------- offline optimum

def offline_opt(M: MetricSpace, C0: Configuration, requests: Sequence[int]):
    """Optimal offline cost and one optimal lazy schedule.

    Dynamic program whose layer-``i`` states are the configurations holding
    ``requests[i]``. Returns ``(cost, Trace)``.
    """
    C0 = tuple(sorted(C0))
    layer = {C0: (0, None, None)}
    history = []
    for r in requests:
        M.check_point(r)
        nxt = {}
        for C, (cost, _, _) in layer.items():
            if r in C:
                moves = [(C, 0, None)]
            else:
                moves = [(replace(C, i, r), M.distance_units(s, r), i) for i, s in enumerate(C)]
            for X, step, i in moves:
                total = cost + step
                cur = nxt.get(X)
                if cur is None or (total, C) < (cur[0], cur[1]):
                    nxt[X] = (total, C, i)
        history.append(nxt)
        layer = nxt
    if not requests:
        return Fraction(0), Trace([], Fraction(0))
    best = min(layer, key=lambda X: (layer[X][0], X))
    total = layer[best][0]
    steps = []
    X = best
    for i in range(len(requests) - 1, -1, -1):
        cost, prev, server = history[i][X]
        prev_cost = 0 if i == 0 else history[i - 1][prev][0]
        steps.append(Step(requests[i], server, (cost - prev_cost) * M.unit, X))
        X = prev
    steps.reverse()
    return total * M.unit, Trace(steps, total * M.unit)


def offline_opt_matching(M: MetricSpace, C0: Configuration, requests: Sequence[int]) -> Fraction:
    """Offline optimum as a min-cost assignment of each request to a predecessor.

    Every request is matched to a distinct predecessor: an initial server or
    an earlier request. Chains of predecessors are the servers' tours.
    """
    n, k = len(requests), len(C0)
    if n == 0:
        return Fraction(0)
    forbid = float(10 ** 15)
    cost = np.full((n, k + n), forbid)
    for j, r in enumerate(requests):
        for s, p in enumerate(C0):
            cost[j, s] = M.distance_units(p, r)
        for i in range(j):
            cost[j, k + i] = M.distance_units(requests[i], r)
    rows, cols = linear_sum_assignment(cost)
    return int(round(cost[rows, cols].sum())) * M.unit


# ---------------------------------------------------------------- traces

@dataclass(frozen=True)
class Step:
    request: int
    server: int | None
    cost: Fraction
    config: Configuration


@dataclass
class Trace:
    steps: list = field(default_factory=list)
    total_cost: Fraction = Fraction(0)

    @property
    def configs(self) -> list:
        return [s.config for s in self.steps]

    def rows(self, seq_id=0):
        """CSV rows ``(seq_id, step, request, server, cost)``."""
        return [(seq_id, i, s.request, "" if s.server is None else s.server, str(s.cost))
                for i, s in enumerate(self.steps)]


def make_policy(alg, *, tie: str = "lowest_point", t=Fraction(1, 10), anchors=None) -> Policy:
    """Policy object from an algorithm id (``offline_opt`` gives a cost process)."""
    if isinstance(alg, Policy):
        return alg
    if alg == "greedy":
        return Greedy(tie)
    if alg == "kcenter":
        return KCenter(anchors)
    if alg == "wfa":
        return WFA()
    if alg == "gadget":
        return Gadget(t, tie)
    if alg in ("offline_opt", "opt"):
        return OfflineOptimum()
    raise ValueError(f"unknown algorithm {alg!r}; expected one of {ALGORITHMS}")


def simulate(alg, M: MetricSpace, C0: Configuration, requests: Sequence[int], **params) -> Trace:
    """Run ``alg`` (an id or a :class:`Policy`) and record every step."""
    C0 = make_config(M, C0)
    if alg in ("offline_opt", "opt"):
        return offline_opt(M, C0, requests)[1]
    policy = make_policy(alg, **params)
    state = policy.start(M, C0)
    steps = []
    total = 0
    for r in requests:
        state, cost, server = policy.advance(M, state, M.check_point(r))
        total += cost
        steps.append(Step(r, server, cost * M.unit, policy.config_of(state)))
    return Trace(steps, total * M.unit)
