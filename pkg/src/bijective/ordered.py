"""Ordered bijections between server configurations.

Points are ranked by their distance to the nearest server (ties by point
id); the ordered bijection matches equal ranks of two configurations. Lifting
it request-by-request along two algorithms' runs gives a bijection of
request sequences.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .kserver import make_policy, work_function_table
from .metric import MetricSpace, dmin_vector


@dataclass(frozen=True)
class PointOrdering:
    points: tuple
    dval_units: tuple
    unit: Fraction

    @property
    def dvals(self) -> tuple:
        return tuple(v * self.unit for v in self.dval_units)

    def rank_of(self, p: int) -> int:
        return self.points.index(p)


@dataclass(frozen=True)
class PointMap:
    """Rank-preserving point bijection between two orderings."""

    first: PointOrdering
    second: PointOrdering

    @property
    def pairs(self) -> dict:
        return dict(zip(self.first.points, self.second.points))

    def __call__(self, p: int) -> int:
        return self.second.points[self.first.rank_of(p)]

    def rows(self):
        """CSV rows ``(rank, point_C1, dmin_C1, point_C2, dmin_C2)``."""
        a, b = self.first, self.second
        return [(i, a.points[i], str(a.dval_units[i] * a.unit), b.points[i], str(b.dval_units[i] * b.unit))
                for i in range(len(a.points))]


def point_ordering(M: MetricSpace, C: Sequence[int]) -> PointOrdering:
    """All points sorted by ``dmin`` to ``C``, ties by ascending id."""
    dv = dmin_vector(M, C)
    order = np.lexsort((np.arange(M.m), dv))
    return PointOrdering(tuple(int(p) for p in order), tuple(int(v) for v in dv[order]), M.unit)


def ordered_bijection(M: MetricSpace, C1: Sequence[int], C2: Sequence[int]) -> PointMap:
    return PointMap(point_ordering(M, C1), point_ordering(M, C2))


def _prefix_optimal_config(M, C0, prefix):
    table = work_function_table(M, len(C0))
    w = table.work_function(tuple(C0), prefix)
    return table.configs[int(np.argmin(w))]


def sequence_bijection(alg_a, alg_b, M: MetricSpace, C0: Sequence[int], requests: Sequence[int],
                       reading: str = "symmetric", **params) -> tuple:
    """Image of ``requests`` under the request-by-request ordered bijection.

    With the default ``symmetric`` reading, request ``i`` is mapped through
    the ordered bijection of A's configuration after ``requests[:i]`` and B's
    configuration after the first ``i`` images. The ``literal`` reading uses
    A's configuration after ``requests[:i+1]`` instead.

    ``alg_b`` may be ``"offline_opt"``; it has no online configuration, so
    the end configuration of an optimal schedule for the image prefix
    (lexicographically smallest among ties) stands in for it.
    """
    if reading not in ("symmetric", "literal"):
        raise ValueError(f"unknown reading {reading!r}")
    C0 = tuple(sorted(C0))
    pa = make_policy(alg_a, **params)
    state_a = pa.start(M, C0)
    offline_b = alg_b in ("offline_opt", "opt")
    if not offline_b:
        pb = make_policy(alg_b, **params)
        state_b = pb.start(M, C0)
    image = []
    for r in requests:
        next_a, _, _ = pa.advance(M, state_a, r)
        conf_a = pa.config_of(next_a if reading == "literal" else state_a)
        conf_b = _prefix_optimal_config(M, C0, image) if offline_b else pb.config_of(state_b)
        r2 = ordered_bijection(M, conf_a, conf_b)(r)
        image.append(r2)
        state_a = next_a
        if not offline_b:
            state_b, _, _ = pb.advance(M, state_b, r2)
    return tuple(image)


# ---------------------------------------------------------------- lemma checks

def dominated_by_factor(first: PointOrdering, second: PointOrdering, factor, ranks=None) -> bool:
    """``first.dvals[i] <= factor * second.dvals[i]`` at every (selected) rank."""
    ranks = range(len(first.points)) if ranks is None else ranks
    return all(first.dval_units[i] <= factor * second.dval_units[i] for i in ranks)


def between_adjacent_servers(M: MetricSpace, C: Sequence[int], p: int) -> bool:
    """Whether ``p`` lies between two adjacent servers of ``C``.

    Every point of a cycle qualifies; on a path the point must lie within the
    span of the servers.
    """
    if M.kind == "cycle":
        return True
    if M.kind == "path":
        return min(C) <= p <= max(C)
    raise ValueError("adjacency of servers is defined on paths and cycles only")


def uniform_configuration(M: MetricSpace, k: int):
    """Uniformly spaced configuration, or None if the discretisation lacks one."""
    if M.kind == "path" and (M.m - 1) % (2 * k) == 0:
        gap = (M.m - 1) // (2 * k)
        return tuple((2 * i + 1) * gap for i in range(k))
    if M.kind == "cycle" and M.m % k == 0:
        spacing = M.m // k
        return tuple(spacing // 2 + i * spacing for i in range(k))
    return None


def bimatch_holds(M, C1, C2) -> bool:
    """Every rank: ``dmin`` under C1 is at most ``2k`` times that under C2."""
    return dominated_by_factor(point_ordering(M, C1), point_ordering(M, C2), 2 * len(C1))


def btw2servers_holds(M, C1, C2) -> bool:
    """Ranks whose C1-point sits between adjacent C1 servers obey factor ``k``."""
    o1, o2 = point_ordering(M, C1), point_ordering(M, C2)
    ranks = [i for i, p in enumerate(o1.points) if between_adjacent_servers(M, C1, p)]
    return dominated_by_factor(o1, o2, len(C1), ranks)


def spider_centre_holds(M, C, C_other) -> bool:
    """With a server at the centre, C is within ``2k`` of any configuration."""
    if M.centre not in C:
        raise ValueError("configuration has no server at the centre")
    return dominated_by_factor(point_ordering(M, C), point_ordering(M, C_other), 2 * len(C))


def best_conf_holds(M, k, C_other) -> bool:
    """The uniform configuration's ``dmin`` ranks are pointwise no larger."""
    U = uniform_configuration(M, k)
    if U is None:
        raise ValueError(f"{M!r} admits no uniform configuration of {k} servers")
    return dominated_by_factor(point_ordering(M, U), point_ordering(M, C_other), 1)
