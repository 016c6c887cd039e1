"""Slow, independent reference implementations used to check the library.

Nothing here imports the algorithms under test; distances come from an
explicit edge list and shortest paths, optima from brute force.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path


# ---------------------------------------------------------------- metrics

def path_edges(m, delta=1):
    return [(i, i + 1, Fraction(delta)) for i in range(m - 1)]


def cycle_edges(m, delta=1):
    return path_edges(m, delta) + [(m - 1, 0, Fraction(delta))]


def spider_edges(rays):
    """Rays given as ``(points, edge_length)``; centre 0, ids numbered ray by ray."""
    edges, nxt = [], 1
    for count, length in rays:
        prev = 0
        for _ in range(count):
            edges.append((prev, nxt, Fraction(length)))
            prev, nxt = nxt, nxt + 1
    return edges


def distance_table(m, edges):
    """All-pairs shortest paths as Fractions (edge lengths scaled to integers)."""
    den = 1
    for _, _, w in edges:
        den = np.lcm(den, w.denominator)
    rows = [a for a, b, _ in edges] + [b for a, b, _ in edges]
    cols = [b for a, b, _ in edges] + [a for a, b, _ in edges]
    vals = [int(w * den) for *_, w in edges] * 2
    g = csr_matrix((vals, (rows, cols)), shape=(m, m))
    d = shortest_path(g, directed=False, unweighted=False)
    return [[Fraction(int(round(d[i, j])), int(den)) for j in range(m)] for i in range(m)]


def dmin(D, C, p):
    return min(D[s][p] for s in C)


def ordering(D, C):
    """Points sorted by distance to the nearest server, ties by id."""
    return sorted(range(len(D)), key=lambda p: (dmin(D, C, p), p))


# ---------------------------------------------------------------- k-server

def opt_by_assignment(D, C0, requests):
    """Offline optimum by trying every assignment of requests to servers (k^n)."""
    k = len(C0)
    best = None
    for assign in itertools.product(range(k), repeat=len(requests)):
        pos, cost = list(C0), 0
        for s, r in zip(assign, requests):
            cost += D[pos[s]][r]
            pos[s] = r
        if best is None or cost < best:
            best = cost
    return Fraction(best if best is not None else 0)


def work_function(D, C0, requests, X):
    """Cheapest way to serve ``requests`` from ``C0`` and end in configuration ``X``."""
    k = len(C0)
    best = None
    for assign in itertools.product(range(k), repeat=len(requests)):
        pos, cost = list(C0), 0
        for s, r in zip(assign, requests):
            cost += D[pos[s]][r]
            pos[s] = r
        end = min(sum(D[a][b] for a, b in zip(pos, perm)) for perm in itertools.permutations(X))
        total = cost + end
        if best is None or total < best:
            best = total
    return Fraction(best)


def greedy_run(D, C0, requests):
    """Nearest server, ties to the lowest position."""
    C, total = sorted(C0), 0
    for r in requests:
        i = min(range(len(C)), key=lambda j: (D[C[j]][r], C[j]))
        total += D[C[i]][r]
        C[i] = r
        C.sort()
    return total


def all_online_profiles(D, C0, n):
    """Sorted cost profile of every lazy deterministic online algorithm.

    An algorithm is enumerated as an explicit choice for every request
    history; options reaching the same configuration count once.
    """
    m = len(D)

    def rec(C, depth):
        # list over algorithms of the cost list over continuations
        if depth == n:
            return [[0]]
        per_request = []
        for r in range(m):
            if r in C:
                per_request.append(rec(C, depth + 1))
                continue
            options = {}
            for i, s in enumerate(C):
                X = tuple(sorted(C[:i] + (r,) + C[i + 1:]))
                options.setdefault(X, D[s][r])
            alts = []
            for X, c in sorted(options.items()):
                alts.extend([[c + v for v in sub] for sub in rec(X, depth + 1)])
            per_request.append(alts)
        return [sum(combo, []) for combo in itertools.product(*per_request)]

    return [tuple(sorted(p)) for p in rec(tuple(sorted(C0)), 0)]


def minimal(profiles):
    profiles = set(profiles)
    return {p for p in profiles
            if not any(q != p and all(b <= a for a, b in zip(p, q)) for q in profiles)}


# ---------------------------------------------------------------- profiles

def _ratio(a, b):
    if b == 0:
        return Fraction(1) if a == 0 else float("inf")
    return Fraction(a) / b


def strict_rho_by_permutation(A, B):
    """Least max ratio over every bijection between two cost lists."""
    return min(max(_ratio(a, b) for a, b in zip(A, perm)) for perm in itertools.permutations(B))


def constant_by_permutation(A, B, rho):
    return min(max(a - rho * b for a, b in zip(A, perm)) for perm in itertools.permutations(B))


def dominates_by_permutation(A, B):
    """Some bijection has A(x) <= B(pi(x)) everywhere."""
    return any(all(a <= b for a, b in zip(A, perm)) for perm in itertools.permutations(B))


# ---------------------------------------------------------------- paging

def paging_opt(costs, cache, requests):
    """Offline weighted paging by trying every eviction at every fault."""
    costs = [Fraction(c) for c in costs]

    @lru_cache(maxsize=None)
    def best(cache, i):
        if i == len(requests):
            return Fraction(0)
        p = requests[i]
        if p in cache:
            return best(cache, i + 1)
        return min(costs[out] / 2 + costs[p] / 2 + best(frozenset(cache - {out} | {p}), i + 1)
                   for out in cache)

    return best(frozenset(cache), 0)


def paging_greedy(costs, cache, requests):
    """Evict the cheapest cached page, ties to the lowest id."""
    cache, total = set(cache), Fraction(0)
    for p in requests:
        if p in cache:
            continue
        out = min(cache, key=lambda q: (costs[q], q))
        total += Fraction(costs[out]) / 2 + Fraction(costs[p]) / 2
        cache = cache - {out} | {p}
    return total


# ---------------------------------------------------------------- buffer

def rbm_switches(k, seq, pick):
    """Lazy buffer service where ``pick(buffer_colours, history)`` chooses colours."""
    buf, nxt, active, switches, history = [], 0, None, 0, []
    while True:
        while len(buf) < k and nxt < len(seq):
            buf.append(seq[nxt])
            nxt += 1
        if active in buf:
            buf.remove(active)
            continue
        if not buf:
            return switches
        active = pick(list(buf), tuple(history))
        history.append(active)
        switches += 1


def rbm_opt(k, seq):
    """Fewest switches by trying every colour at every forced switch."""
    best = None
    stack = [[]]
    while stack:
        plan = stack.pop()
        choices = iter(plan)
        forced = []

        def pick(colours, history):
            c = next(choices, None)
            if c is None:
                forced.append(sorted(set(colours)))
                return colours[0]
            return c

        s = rbm_switches(k, seq, pick)
        if not forced:
            best = s if best is None else min(best, s)
            continue
        for c in forced[0]:
            stack.append(plan + [c])
    return best


def rbm_greedy(k, seq):
    """Switch to the colour with most buffered items, ties to the lowest colour."""
    def pick(colours, _):
        return min(set(colours), key=lambda c: (-colours.count(c), c))
    return rbm_switches(k, seq, pick)
