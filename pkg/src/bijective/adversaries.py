"""Request sequences and instances that force online algorithms to pay."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .kserver import Policy, greedy_choice, make_policy, replace
from .metric import MetricError, MetricSpace, path, spider, unit_path


# ---------------------------------------------------------------- three points

def three_point_metric(d=1) -> MetricSpace:
    """Three equidistant points ``0, 1, 2`` on a line, ``d`` apart."""
    return path(3, d)


def three_point_adversary(alg, n: int, d=1, prefix: Sequence[int] | None = None, **params) -> tuple:
    """Adaptive sequence against ``alg`` with servers starting on both endpoints.

    The first ``n - 2`` requests sit on endpoints (all on ``0`` unless
    ``prefix`` says otherwise), then the middle point is requested, then the
    endpoint the algorithm just left. A lazy algorithm pays at least ``2d``
    while the optimum pays ``d``.
    """
    if n < 2:
        raise ValueError("the construction needs n >= 2")
    M = three_point_metric(d)
    prefix = [0] * (n - 2) if prefix is None else list(prefix)
    if len(prefix) != n - 2 or any(p not in (0, 2) for p in prefix):
        raise ValueError("prefix must hold n - 2 endpoint requests")
    policy = make_policy(alg, **params)
    if not isinstance(policy, Policy) or policy.name == "offline_opt":
        raise ValueError("the adversary needs a deterministic online algorithm")
    state = policy.start(M, (0, 2))
    for r in prefix + [1]:
        state, _, _ = policy.advance(M, state, r)
    conf = policy.config_of(state)
    last = 0 if 0 not in conf else 2
    return tuple(prefix) + (1, last)


# ---------------------------------------------------------------- line clustering

@dataclass(frozen=True)
class ClusteringSequence:
    """Output of :func:`line_clustering_adversary`.

    ``requests[:clustering]`` drag the first ``k - 1`` servers towards 0;
    from ``suffix_start`` on, requests alternate between ``x`` and 1 with
    the last server already sitting at one of them.
    """

    requests: tuple
    clustering: int
    suffix_start: int
    x: int
    delta_prime: Fraction
    metric: MetricSpace
    k: int

    @property
    def prefix_bound(self) -> int:
        """Bound on the clustering length, ``ceil(log2(1/delta')) (k - 2) + 1``."""
        return math.ceil(math.log2(1 / self.delta_prime)) * (self.k - 2) + 1


def line_clustering_adversary(k: int, eps, m: int, n: int, C0: Sequence[int] | None = None,
                              tie: str = "lowest_point") -> ClusteringSequence:
    """Sequence on which greedy keeps paying almost 1/2 per request on ``[0, 1]``.

    With ``delta = eps / k`` and ``delta' = delta / (k - 1)``, the alternation
    point ``x`` is the first grid point at or beyond ``1/2 + (k - 1) delta' / 2``.
    Clustering requests sit at the first grid point between adjacent servers
    ``s_{i-1} < s_i`` that greedy serves with ``s_i``; they halve the gap until
    it drops below ``delta'``. Then ``x`` and 1 alternate.
    """
    if k < 2:
        raise ValueError("the construction needs k >= 2")
    eps = Fraction(eps) if not isinstance(eps, float) else Fraction(repr(eps))
    M = unit_path(m)
    N = m - 1
    dp = eps / k / (k - 1)
    x = math.ceil((Fraction(1, 2) + (k - 1) * dp / 2) * N)
    if x >= N or Fraction(1, N) >= dp:
        raise MetricError(f"a grid of {m} points is too coarse for eps={eps}, k={k}")
    C = tuple(sorted(C0)) if C0 is not None else tuple(round(N * (2 * i + 1) / (2 * k)) for i in range(k))
    if len(C) != k:
        raise ValueError(f"initial configuration must have {k} servers")
    reqs = []

    def serve(r):
        nonlocal C
        reqs.append(r)
        if r not in C:
            C = replace(C, greedy_choice(M, C, r, tie), r)

    if C[0] != 0:
        serve(0)
    for i in range(1, k - 1):
        while Fraction(C[i] - C[i - 1], N) >= dp:
            lo, hi = C[i - 1], C[i]
            p = next(p for p in range(lo + 1, hi) if replace(C, greedy_choice(M, C, p, tie), p) == replace(C, i, p))
            serve(p)
    clustering = len(reqs)
    if len(reqs) < n:
        serve(x)
    suffix_start = len(reqs)
    target = N
    while len(reqs) < n:
        serve(target)
        target = x if target == N else N
    return ClusteringSequence(tuple(reqs[:n]), min(clustering, n), min(suffix_start, n), x, dp, M, k)


# ---------------------------------------------------------------- star lower bound

@dataclass(frozen=True)
class StarInstance:
    metric: MetricSpace
    anchors_a: tuple
    anchors_kc: tuple
    d: Fraction
    rays: int


def star_lowerbound_instance(k: int, d, delta=1) -> StarInstance:
    """Spider on which k-Center's anchoring is badly beaten by a centre-anchored rival.

    There are ``(k d)^3`` rays: one long ray of length ``4kd - d`` (ray 0,
    ids ``1..``) and short rays of length ``d``. k-Center anchors on the long
    ray at distances ``d, 5d, 9d, ...``; the rival keeps one server on the
    centre and the others on the first ``k - 1`` k-Center anchors.
    """
    d, delta = Fraction(d), Fraction(delta)
    if k < 1 or d <= 0 or delta <= 0:
        raise MetricError("need k >= 1 and positive d, delta")
    if (d / delta).denominator != 1:
        raise MetricError("d must be a multiple of delta")
    steps = int(d / delta)
    kd = k * d
    if kd.denominator != 1:
        raise MetricError("k * d must be an integer to count rays")
    rays = int(kd) ** 3
    long_steps = (4 * k - 1) * steps
    M = spider([(long_steps, delta)] + [(steps, delta)] * (rays - 1))
    kc = tuple(steps + 4 * steps * j for j in range(k))
    a = tuple(sorted((0,) + kc[:k - 1]))
    return StarInstance(M, a, kc, d, rays)
