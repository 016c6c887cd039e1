"""Cost profiles over all request sequences and the measures comparing them.

A :class:`CostProfile` is the sorted multiset of an algorithm's total costs
over every sequence of length ``n``, stored run-length encoded so that
profiles over astronomically many sequences stay small. Matching two
profiles rank by rank is the optimal bijection for every measure computed
here (an exchange argument; :mod:`tests` also checks it against brute force
over permutations).
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

from .kserver import (Policy, make_config, make_policy, offline_opt,
                      offline_opt_matching, simulate)
from .metric import MetricSpace, dmin_units
from .ordered import sequence_bijection

DEFAULT_BUDGET = 10 ** 7
INF = math.inf


class BudgetExceeded(RuntimeError):
    """Raised instead of silently falling back to sampling."""


# ---------------------------------------------------------------- sequences

def enumerate_sequences(M_or_m, n: int, budget: int | None = DEFAULT_BUDGET) -> Iterator[tuple]:
    """Yield every length-``n`` sequence over the points, lexicographically."""
    m = M_or_m if isinstance(M_or_m, int) else M_or_m.m
    check_budget(m, n, budget)
    return itertools.product(range(m), repeat=n)


def check_budget(m: int, n: int, budget: int | None):
    if budget is not None and m ** n > budget:
        raise BudgetExceeded(f"{m}^{n} = {m ** n} sequences exceed the budget of {budget}")


# ---------------------------------------------------------------- profiles

@dataclass(frozen=True)
class CostProfile:
    """Sorted total costs of one algorithm over all of ``I_n``.

    ``values`` are the distinct costs in integer units of ``unit``, ascending;
    ``counts[j]`` is how many sequences cost ``values[j]``.
    """

    values: tuple
    counts: tuple
    unit: Fraction = Fraction(1)
    algorithm: str = ""
    metric: str = ""
    C0: tuple = ()
    n: int = 0
    approximate: bool = False

    @classmethod
    def from_counter(cls, hist, unit=Fraction(1), **meta) -> "CostProfile":
        items = sorted((v, c) for v, c in hist.items() if c)
        return cls(tuple(v for v, _ in items), tuple(c for _, c in items), Fraction(unit), **meta)

    @classmethod
    def from_costs(cls, costs, unit=Fraction(1), **meta) -> "CostProfile":
        """Build from raw costs; Fractions are converted to units of ``unit``."""
        unit = Fraction(unit)
        hist = Counter()
        for c in costs:
            q = Fraction(c) / unit
            if q.denominator != 1:
                raise ValueError(f"cost {c} is not a multiple of the unit {unit}")
            hist[q.numerator] += 1
        return cls.from_counter(hist, unit, **meta)

    @property
    def size(self) -> int:
        return sum(self.counts)

    def __len__(self):
        return self.size

    def runs(self) -> Iterator[tuple]:
        for v, c in zip(self.values, self.counts):
            yield v * self.unit, c

    @property
    def costs(self) -> list:
        """Expanded sorted list of costs (refuses beyond 10^7 entries)."""
        if self.size > DEFAULT_BUDGET:
            raise BudgetExceeded("profile too large to expand; iterate runs() instead")
        return [v for v, c in self.runs() for _ in range(c)]

    @property
    def total(self) -> Fraction:
        return sum((v * c for v, c in zip(self.values, self.counts)), 0) * self.unit

    @property
    def mean(self) -> Fraction:
        return self.total / self.size

    @property
    def maximum(self) -> Fraction:
        return self.values[-1] * self.unit

    @property
    def minimum(self) -> Fraction:
        return self.values[0] * self.unit

    def count_below(self, x) -> int:
        """Number of sequences with cost strictly below ``x``."""
        return sum(c for v, c in self.runs() if v < x)

    def count_at_most(self, x) -> int:
        return sum(c for v, c in self.runs() if v <= x)

    def at_rank(self, i: int) -> Fraction:
        """Cost at 0-based rank ``i``."""
        for v, c in self.runs():
            if i < c:
                return v
            i -= c
        raise IndexError("rank out of range")


def _histogram(policy: Policy, M: MetricSpace, C0, n: int):
    memo = {}
    points = range(M.m)

    def hist(state, rem):
        key = (state, rem)
        if key in memo:
            return memo[key]
        if rem == 0:
            out = {0: 1}
        elif rem == 1 and (vec := policy.last_costs(M, state)) is not None:
            vals, cnts = np.unique(np.asarray(vec), return_counts=True)
            out = {int(v): int(c) for v, c in zip(vals, cnts)}
        else:
            branches = Counter()
            for r in points:
                nxt, cost, _ = policy.advance(M, state, r)
                branches[(nxt, cost)] += 1
            out = Counter()
            for (nxt, cost), mult in branches.items():
                for v, c in hist(nxt, rem - 1).items():
                    out[v + cost] += c * mult
        memo[key] = out
        return out

    return hist(policy.start(M, C0), n)


def process_histogram(start, advance, symbols: Sequence, n: int) -> Counter:
    """Histogram of total cost of a Markov cost process over all ``symbols**n`` inputs.

    ``advance(state, x)`` returns ``(next_state, cost)``; states must be hashable.
    """
    memo = {}

    def hist(state, rem):
        key = (state, rem)
        if key in memo:
            return memo[key]
        if rem == 0:
            out = Counter({0: 1})
        else:
            branches = Counter(advance(state, x) for x in symbols)
            out = Counter()
            for (nxt, cost), mult in branches.items():
                for v, c in hist(nxt, rem - 1).items():
                    out[v + cost] += c * mult
        memo[key] = out
        return out

    return hist(start, n)


def cost_profile(alg, M: MetricSpace, C0, n: int, *, budget: int | None = DEFAULT_BUDGET,
                 method: str = "memo", **params) -> CostProfile:
    """Sorted costs of ``alg`` over every length-``n`` request sequence.

    ``method="memo"`` aggregates over the tree of prefixes, merging subtrees
    that reach the same algorithm state; ``method="enumerate"`` simulates
    each sequence separately. Both are exact.
    """
    C0 = make_config(M, C0)
    check_budget(M.m, n, budget)
    policy = make_policy(alg, **params)
    meta = dict(algorithm=policy.name, metric=M.label, C0=C0, n=n)
    if method == "memo":
        return CostProfile.from_counter(_histogram(policy, M, C0, n), M.unit, **meta)
    if method == "enumerate":
        hist = Counter()
        for seq in enumerate_sequences(M, n, budget):
            if policy.name == "offline_opt":
                cost = offline_opt(M, C0, seq)[0]
            else:
                cost = simulate(policy, M, C0, seq).total_cost
            hist[int(cost / M.unit)] += 1
        return CostProfile.from_counter(hist, M.unit, **meta)
    raise ValueError(f"unknown method {method!r}")


def total_cost(alg, M: MetricSpace, C0, n: int, *, budget: int | None = None, **params) -> Fraction:
    """Sum of ``alg``'s cost over all of ``I_n`` (the average-analysis quantity)."""
    C0 = make_config(M, C0)
    check_budget(M.m, n, budget)
    policy = make_policy(alg, **params)
    memo = {}

    def total(state, rem):
        key = (state, rem)
        if key in memo:
            return memo[key]
        if rem == 0:
            out = 0
        elif rem == 1 and (vec := policy.last_costs(M, state)) is not None:
            out = int(np.asarray(vec, dtype=object).sum())
        else:
            out = 0
            for r in range(M.m):
                nxt, cost, _ = policy.advance(M, state, r)
                out += cost * M.m ** (rem - 1) + total(nxt, rem - 1)
        memo[key] = out
        return out

    return total(policy.start(M, C0), n) * M.unit


def sample_profiles(alg, M: MetricSpace, C0, n: int, samples: int, seed: int = 0,
                    sampler: str = "uniform", **params) -> CostProfile:
    """Monte Carlo profile over uniformly drawn sequences.

    The result is flagged ``approximate`` and must not feed certificates.
    ``sampler="exhaustive"`` walks ``I_n`` in order instead (``samples`` must
    equal ``m**n``) and gives back the exact profile.
    """
    C0 = make_config(M, C0)
    if samples < 1:
        raise ValueError("need at least one sample")
    if sampler == "exhaustive":
        if samples != M.m ** n:
            raise ValueError("the exhaustive sampler needs samples == m**n")
        seqs = enumerate_sequences(M, n, budget=None)
    elif sampler == "uniform":
        rng = np.random.default_rng(seed)
        seqs = rng.integers(0, M.m, size=(samples, n)).tolist()
    else:
        raise ValueError(f"unknown sampler {sampler!r}")
    policy = make_policy(alg, **params)
    hist = Counter()
    for seq in seqs:
        if policy.name == "offline_opt":
            cost = offline_opt_matching(M, C0, seq)
        else:
            cost = simulate(policy, M, C0, seq).total_cost
        hist[int(cost / M.unit)] += 1
    return CostProfile.from_counter(hist, M.unit, algorithm=policy.name, metric=M.label, C0=C0,
                                    n=n, approximate=sampler == "uniform")


# ---------------------------------------------------------------- comparisons

def aligned_runs(A: CostProfile, B: CostProfile) -> Iterator[tuple]:
    """Yield ``(a, b, start_rank, length)`` for maximal rank-matched segments."""
    if A.size != B.size:
        raise ValueError(f"profiles differ in length ({A.size} vs {B.size})")
    ia, ib = A.runs(), B.runs()
    (a, ca), (b, cb) = next(ia, (None, 0)), next(ib, (None, 0))
    rank = 0
    while ca and cb:
        step = min(ca, cb)
        yield a, b, rank, step
        rank += step
        ca -= step
        cb -= step
        if not ca:
            a, ca = next(ia, (None, 0))
        if not cb:
            b, cb = next(ib, (None, 0))


def _ratio(a, b):
    if b == 0:
        return Fraction(1) if a == 0 else INF
    return Fraction(a) / b


def asymptotic_constant(A: CostProfile, B: CostProfile, rho) -> Fraction:
    """``c(rho) = max_i (A_i - rho * B_i)`` over rank-matched costs."""
    rho = Fraction(rho)
    return max(a - rho * b for a, b, _, _ in aligned_runs(A, B))


@dataclass
class ComparisonReport:
    strict_rho: object
    witness_index: int
    dominance: str
    maxmax: object
    average: object
    asymptotic_curve: list = field(default_factory=list)
    approximate: bool = False

    def to_dict(self) -> dict:
        def enc(x):
            if x is None:
                return None
            if x == INF:
                return "inf"
            return str(x)
        return {
            "strict_rho": enc(self.strict_rho),
            "witness_index": self.witness_index,
            "dominance": self.dominance,
            "maxmax": enc(self.maxmax),
            "average": enc(self.average),
            "asymptotic_curve": [[str(r), str(c)] for r, c in self.asymptotic_curve],
            "approximate": self.approximate,
        }


def stochastic_dominance(A: CostProfile, B: CostProfile) -> str:
    """``A_dominates`` iff every rank of A costs no more than in B."""
    a_le = b_le = True
    for a, b, _, _ in aligned_runs(A, B):
        a_le &= a <= b
        b_le &= b <= a
    if a_le and b_le:
        return "equal"
    if a_le:
        return "A_dominates"
    if b_le:
        return "B_dominates"
    return "incomparable"


def scalar_ratios(A: CostProfile, B: CostProfile):
    """``(maxmax, average)``; a ratio with a zero denominator is None."""
    if A.size != B.size:
        raise ValueError("profiles differ in length")
    maxmax = A.maximum / B.maximum if B.maximum > 0 else None
    average = A.total / B.total if B.total > 0 else None
    return maxmax, average


def bijective_ratio(A: CostProfile, B: CostProfile, rhos: Sequence = ()) -> ComparisonReport:
    """Strict bijective ratio of A against B, with the full comparison.

    Zero convention: a matched pair ``(0, 0)`` has ratio 1 and ``(a > 0, 0)``
    makes the strict ratio infinite.
    """
    best, witness = None, 0
    for a, b, start, _ in aligned_runs(A, B):
        r = _ratio(a, b)
        if best is None or r > best:
            best, witness = r, start
    maxmax, average = scalar_ratios(A, B)
    curve = [(Fraction(rho), asymptotic_constant(A, B, rho)) for rho in rhos]
    return ComparisonReport(best, witness, stochastic_dominance(A, B), maxmax, average, curve,
                            A.approximate or B.approximate)


def lower_bound_certificate(A: CostProfile, B: CostProfile, c, rho) -> bool:
    """Counting certificate that A's bijective ratio against B is at least rho.

    Holds when fewer sequences cost A less than ``rho * c`` than cost B at
    most ``c``.
    """
    if A.size != B.size:
        raise ValueError("profiles differ in length")
    c, rho = Fraction(c), Fraction(rho)
    return A.count_below(rho * c) < B.count_at_most(c)


def certified_ratio(A: CostProfile, B: CostProfile):
    """Largest rho certified by :func:`lower_bound_certificate` over all ``c > 0``.

    For threshold ``c`` with ``N`` sequences costing B at most ``c``, the
    certificate holds exactly for ``rho * c`` up to A's ``N``-th smallest cost.
    Returns ``(rho, c)`` or ``(None, None)`` if no positive threshold exists.
    """
    best = (None, None)
    seen = 0
    for b, cnt in B.runs():
        seen += cnt
        if b <= 0:
            continue
        rho = A.at_rank(seen - 1) / b
        if best[0] is None or rho > best[0]:
            best = (rho, b)
    return best


def compare(alg_a, alg_b, M: MetricSpace, C0, n: int, rhos: Sequence = (), **params) -> ComparisonReport:
    """Exhaustive comparison of two algorithms started from the same ``C0``."""
    pa = cost_profile(alg_a, M, C0, n, **params)
    pb = cost_profile(alg_b, M, C0, n, **params)
    return bijective_ratio(pa, pb, rhos)


# ---------------------------------------------------------------- decoupling

def conditional_cost_units(alg, M: MetricSpace, C, r: int) -> int:
    """Cost of ``alg`` serving ``r`` from configuration ``C``, in units.

    Greedy pays the distance from the nearest server; k-Center also pays for
    the way back.
    """
    name = alg if isinstance(alg, str) else getattr(alg, "name", "")
    if name == "greedy":
        return dmin_units(M, C, r)
    if name == "kcenter":
        return 2 * dmin_units(M, C, r)
    raise ValueError(f"no conditional cost for algorithm {alg!r}")


def potential_value(M: MetricSpace, C, potential) -> Fraction:
    """Potential of configuration ``C``.

    ``potential`` is ``"none"``, ``"star"`` (sum of server depths) or
    ``("line", c1, c2)``: ``-alpha`` times the span of the servers on a
    path, with ``alpha = (c2 - c1) / (c2 + c1)``.
    """
    if potential in (None, "none"):
        return Fraction(0)
    if potential == "star":
        return sum(M.centre_depth_units(g) for g in C) * M.unit
    kind, c1, c2 = potential
    if kind != "line":
        raise ValueError(f"unknown potential {potential!r}")
    alpha = (Fraction(c2) - Fraction(c1)) / (Fraction(c2) + Fraction(c1))
    return -alpha * M.distance(min(C), max(C))


@dataclass
class DecouplingReport:
    checked: int
    factor: Fraction
    target: Fraction
    violations_i: int = 0
    violations_ii: int = 0
    witnesses: list = field(default_factory=list)

    @property
    def holds(self) -> bool:
        return self.violations_i == 0 and self.violations_ii == 0

    def to_dict(self) -> dict:
        return {"checked": self.checked, "factor": str(self.factor), "target": str(self.target),
                "violations_i": self.violations_i, "violations_ii": self.violations_ii,
                "holds": self.holds,
                "witnesses": [[cond, list(seq), i, str(lhs), str(rhs)]
                              for cond, seq, i, lhs, rhs in self.witnesses]}


def _trace_before(C0, trace):
    return [tuple(C0)] + trace.configs[:-1]


def decoupling_check(alg_a, alg_b, M: MetricSpace, C0, n: int, d, c=None, potential="none", *,
                     conditions=("i", "ii"), reading: str = "symmetric", max_witnesses: int = 20,
                     budget: int | None = 10 ** 5, **params) -> DecouplingReport:
    """Check the per-request conditions of the decoupling lemmas on all of ``I_n``.

    Condition (i): ``A(s[i] | B(s[:i])) <= d * B(s[i])``.

    Condition (ii) depends on ``potential``. Without one it is
    ``A(s[i]) - A(p[i] | B(p[:i])) <= (c - d) * B(p[i])`` with ``p`` the image
    of ``s`` under the ordered bijection. With a potential it is
    ``A(s[i]) + dPhi_i <= c * A(p[i] | B(p[:i]))``, where ``Phi`` is taken
    over A's configurations. For ``("line", c1, c2)`` the factor ``c`` is
    ``2 c1 c2 / (c1 + c2)``. The report's ``target`` is the resulting
    bound on the bijective ratio (``c``, or ``c * d`` with a potential).

    An offline ``alg_b`` is represented by an optimal schedule for the
    whole sequence.
    """
    C0 = make_config(M, C0)
    d = Fraction(d)
    if potential not in (None, "none", "star") and potential[0] == "line":
        c1, c2 = Fraction(potential[1]), Fraction(potential[2])
        c = 2 * c1 * c2 / (c1 + c2)
    if c is None:
        if "ii" in conditions:
            raise ValueError("factor c is required for condition (ii)")
        c = d
    c = Fraction(c)
    amortised = potential not in (None, "none")
    target = c * d if amortised else c
    report = DecouplingReport(0, c, target)

    def witness(cond, seq, i, lhs, rhs):
        if len(report.witnesses) < max_witnesses:
            report.witnesses.append((cond, tuple(seq), i, lhs, rhs))

    u = M.unit
    for seq in enumerate_sequences(M, n, budget):
        tb = simulate(alg_b, M, C0, seq, **params)
        if "i" in conditions:
            for i, (Cb, step) in enumerate(zip(_trace_before(C0, tb), tb.steps)):
                lhs = conditional_cost_units(alg_a, M, Cb, seq[i]) * u
                if lhs > d * step.cost:
                    report.violations_i += 1
                    witness("i", seq, i, lhs, d * step.cost)
        if "ii" in conditions:
            ta = simulate(alg_a, M, C0, seq, **params)
            img = sequence_bijection(alg_a, alg_b, M, C0, seq, reading=reading, **params)
            tpi = simulate(alg_b, M, C0, img, **params)
            before_a = _trace_before(C0, ta)
            for i, (Cb, step_b) in enumerate(zip(_trace_before(C0, tpi), tpi.steps)):
                cond = conditional_cost_units(alg_a, M, Cb, img[i]) * u
                a_cost = ta.steps[i].cost
                if amortised:
                    lhs = a_cost + potential_value(M, ta.steps[i].config, potential) \
                        - potential_value(M, before_a[i], potential)
                    rhs = c * cond
                else:
                    lhs = a_cost - cond
                    rhs = (c - d) * step_b.cost
                if lhs > rhs:
                    report.violations_ii += 1
                    witness("ii", seq, i, lhs, rhs)
        report.checked += 1
    return report
