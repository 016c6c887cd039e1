"""Discrete metric spaces: paths, cycles, spiders and weighted stars.

Every metric stores its lengths as integer multiples of a common ``unit``
(a :class:`~fractions.Fraction`), so all distance arithmetic stays exact and
cheap. Public accessors return Fractions; the ``*_units`` variants return the
underlying integers for the hot loops in the simulators.
"""

from __future__ import annotations

import json
import math
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

KINDS = ("path", "cycle", "spider", "weighted_star")

# Dense distance matrices are only materialised below this size.
DENSE_LIMIT = 4096


class MetricError(ValueError):
    """Raised for malformed metric descriptions or invalid point ids."""


def _as_fraction(value) -> Fraction:
    if isinstance(value, float):
        # Floats would silently lose exactness; go through their repr instead.
        return Fraction(repr(value))
    return Fraction(value)


def _common_unit(lengths: Iterable[Fraction]) -> Fraction:
    lengths = list(lengths)
    denom = 1
    for x in lengths:
        denom = denom * x.denominator // math.gcd(denom, x.denominator)
    g = 0
    for x in lengths:
        g = math.gcd(g, x.numerator * (denom // x.denominator))
    return Fraction(g, denom)


class MetricSpace:
    """A finite metric with exact rational distances.

    Point ids are dense ``0..m-1``. On paths and cycles they run along the
    metric; on spiders and stars the centre is ``0`` and each ray is numbered
    outward from the centre.

    Instances are immutable after construction and safe to share.
    """

    def __init__(self, kind: str, m: int, unit: Fraction, *, edge_length=None,
                 rays=(), depth=None, ray_of=None):
        self.kind = kind
        self.m = m
        self.unit = unit
        self.edge_length = edge_length
        # tuple of (point ids from centre outward, per-edge length)
        self.rays = tuple(rays)
        self.centre = 0 if kind in ("spider", "weighted_star") else None
        self._depth = depth
        self._ray_of = ray_of
        if kind in ("path", "cycle"):
            self._step = int(edge_length / unit)

    def __repr__(self):
        if self.kind in ("path", "cycle"):
            return f"MetricSpace({self.kind}, m={self.m}, delta={self.edge_length})"
        return f"MetricSpace({self.kind}, m={self.m}, rays={len(self.rays)})"

    @property
    def points(self) -> range:
        return range(self.m)

    @cached_property
    def label(self) -> str:
        if self.kind in ("path", "cycle"):
            return f"{self.kind}:{self.m}:{self.edge_length}"
        if self.kind == "weighted_star":
            return "weighted_star:" + ",".join(str(length) for _, length in self.rays)
        return "spider:" + ",".join(f"{len(ids)}x{length}" for ids, length in self.rays)

    def check_point(self, x: int) -> int:
        if not isinstance(x, (int, np.integer)) or not 0 <= x < self.m:
            raise MetricError(f"invalid point id {x!r} for {self!r}")
        return int(x)

    def distance_units(self, x: int, y: int) -> int:
        """Distance between ``x`` and ``y`` as an integer number of units."""
        if self.kind == "path":
            return abs(x - y) * self._step
        if self.kind == "cycle":
            gap = abs(x - y)
            return min(gap, self.m - gap) * self._step
        if x == y:
            return 0
        dx, dy = self._depth[x], self._depth[y]
        if x and y and self._ray_of[x] == self._ray_of[y]:
            return abs(dx - dy)
        return dx + dy

    def distance(self, x: int, y: int) -> Fraction:
        self.check_point(x)
        self.check_point(y)
        return self.distance_units(x, y) * self.unit

    @cached_property
    def dist_matrix(self) -> np.ndarray:
        """Dense ``m x m`` int64 matrix of distances in units."""
        if self.m > DENSE_LIMIT:
            raise MetricError(f"metric with {self.m} points is too large for a dense matrix")
        ids = np.arange(self.m)
        if self.kind == "path":
            mat = np.abs(ids[:, None] - ids[None, :]) * self._step
        elif self.kind == "cycle":
            gap = np.abs(ids[:, None] - ids[None, :])
            mat = np.minimum(gap, self.m - gap) * self._step
        else:
            depth = np.asarray(self._depth, dtype=np.int64)
            ray = np.asarray(self._ray_of, dtype=np.int64)
            same = (ray[:, None] == ray[None, :]) & (ids[:, None] > 0) & (ids[None, :] > 0)
            mat = np.where(same, np.abs(depth[:, None] - depth[None, :]),
                           depth[:, None] + depth[None, :])
            np.fill_diagonal(mat, 0)
        mat = mat.astype(np.int64)
        mat.setflags(write=False)
        return mat

    def centre_depth_units(self, x: int) -> int:
        """Distance from the centre of a spider/star, in units."""
        if self._depth is None:
            raise MetricError(f"{self.kind} has no centre")
        return self._depth[x]

    def ray_index(self, x: int) -> int:
        """Index of the ray carrying ``x`` (``-1`` for the centre)."""
        if self._ray_of is None:
            raise MetricError(f"{self.kind} has no rays")
        return self._ray_of[x]

    def position(self, x: int) -> Fraction:
        """Coordinate of ``x`` on a path, normalised to the unit interval."""
        if self.kind != "path":
            raise MetricError("positions are defined on paths only")
        return Fraction(self.check_point(x), self.m - 1)

    @cached_property
    def diameter(self) -> Fraction:
        if self.kind == "path":
            return (self.m - 1) * self.edge_length
        if self.kind == "cycle":
            return (self.m // 2) * self.edge_length
        tips = sorted((self._depth[ids[-1]] for ids, _ in self.rays), reverse=True)
        return (tips[0] + (tips[1] if len(tips) > 1 else 0)) * self.unit

    def to_dict(self) -> dict:
        if self.kind in ("path", "cycle"):
            return {"kind": self.kind, "m": self.m, "delta": str(self.edge_length)}
        if self.kind == "weighted_star":
            return {"kind": self.kind, "weights": [str(length) for _, length in self.rays]}
        return {"kind": self.kind, "rays": [[len(ids), str(length)] for ids, length in self.rays]}


def path(m: int, delta=1) -> MetricSpace:
    """Path of ``m`` uniformly spaced points, adjacent ids ``delta`` apart."""
    delta = _as_fraction(delta)
    if m < 2:
        raise MetricError("a path needs at least 2 points")
    if delta <= 0:
        raise MetricError("edge length must be positive")
    return MetricSpace("path", m, delta, edge_length=delta)


def unit_path(m: int) -> MetricSpace:
    """Path discretising the unit interval ``[0, 1]`` with ``m`` points."""
    return path(m, Fraction(1, m - 1))


def cycle(m: int, delta=1) -> MetricSpace:
    """Cycle of ``m`` uniformly spaced points."""
    delta = _as_fraction(delta)
    if m < 2:
        raise MetricError("a cycle needs at least 2 points")
    if delta <= 0:
        raise MetricError("edge length must be positive")
    return MetricSpace("cycle", m, delta, edge_length=delta)


def _radial(kind: str, rays: Sequence[tuple[Sequence[int], Fraction]]) -> MetricSpace:
    if not rays:
        raise MetricError(f"a {kind} needs at least one ray")
    seen = {0}
    for ids, length in rays:
        if not ids:
            raise MetricError("rays must be nonempty")
        if length <= 0:
            raise MetricError("edge lengths must be positive")
        for p in ids:
            if p in seen:
                raise MetricError(f"duplicate ray point {p}")
            seen.add(p)
    m = len(seen)
    if seen != set(range(m)):
        raise MetricError("ray point ids must be dense 1..m-1")
    if m < 2:
        raise MetricError("metric needs at least 2 points")
    unit = _common_unit(length for _, length in rays)
    depth = [0] * m
    ray_of = [-1] * m
    for r, (ids, length) in enumerate(rays):
        step = int(length / unit)
        for j, p in enumerate(ids, start=1):
            depth[p] = j * step
            ray_of[p] = r
    rays = tuple((tuple(ids), length) for ids, length in rays)
    return MetricSpace(kind, m, unit, rays=rays, depth=depth, ray_of=ray_of)


def spider(rays: Sequence[tuple[int, object]]) -> MetricSpace:
    """Spider from ``(point count, edge length)`` pairs, one per ray.

    The centre gets id 0; ray ``r`` takes the next ``count`` ids, nearest
    the centre first.
    """
    explicit = []
    nxt = 1
    for count, length in rays:
        count = int(count)
        if count < 1:
            raise MetricError("rays must be nonempty")
        explicit.append((list(range(nxt, nxt + count)), _as_fraction(length)))
        nxt += count
    return _radial("spider", explicit)


def spider_from_ids(rays: Sequence[tuple[Sequence[int], object]]) -> MetricSpace:
    """Spider from explicit ray point lists (validated for duplicates)."""
    return _radial("spider", [(list(ids), _as_fraction(length)) for ids, length in rays])


def weighted_star(weights: Sequence[object]) -> MetricSpace:
    """Star whose leaf ``i + 1`` hangs at distance ``weights[i]`` from the centre."""
    return _radial("weighted_star",
                   [([i + 1], _as_fraction(w)) for i, w in enumerate(weights)])


def build_metric(desc) -> MetricSpace:
    """Build a metric from a JSON-style description.

    Accepted forms::

        {"kind": "cycle", "m": 6, "delta": "1"}
        {"kind": "spider", "rays": [[3, "1"], [3, "1"]]}
        {"kind": "weighted_star", "weights": ["1", "5"]}

    A JSON string, or a ``kind:m[:delta]`` flag string, is also accepted.
    """
    if isinstance(desc, str):
        desc = desc.strip()
        if desc.startswith("{"):
            desc = json.loads(desc)
        else:
            return parse_metric_flag(desc)
    kind = desc.get("kind")
    if kind not in KINDS:
        raise MetricError(f"unknown metric kind {kind!r}")
    if kind in ("path", "cycle"):
        if "m" not in desc:
            raise MetricError(f"{kind} needs 'm'")
        maker = path if kind == "path" else cycle
        return maker(int(desc["m"]), desc.get("delta", 1))
    if kind == "spider":
        return spider([(count, length) for count, length in desc.get("rays", [])])
    return weighted_star(desc.get("weights", []))


def parse_metric_flag(flag: str) -> MetricSpace:
    """Parse ``kind:m[:delta]`` (paths and cycles only)."""
    parts = flag.split(":")
    if parts[0] not in ("path", "cycle") or len(parts) not in (2, 3):
        raise MetricError(f"cannot parse metric flag {flag!r}; expected path|cycle:m[:delta]")
    maker = path if parts[0] == "path" else cycle
    try:
        m, delta = int(parts[1]), Fraction(parts[2]) if len(parts) == 3 else 1
    except (ValueError, ZeroDivisionError):
        raise MetricError(f"cannot parse metric flag {flag!r}; m must be an integer, delta rational") from None
    return maker(m, delta)


def dmin_units(M: MetricSpace, C: Sequence[int], p: int) -> int:
    if not C:
        raise MetricError("empty configuration")
    return min(M.distance_units(s, p) for s in C)


def dmin(M: MetricSpace, C: Sequence[int], p: int) -> Fraction:
    """Distance from ``p`` to the nearest server of ``C``."""
    M.check_point(p)
    return dmin_units(M, C, p) * M.unit


def dmin_vector(M: MetricSpace, C: Sequence[int]) -> np.ndarray:
    """``dmin`` of every point, in units, as an int64 array."""
    if not C:
        raise MetricError("empty configuration")
    if M.m <= DENSE_LIMIT:
        return M.dist_matrix[list(C)].min(axis=0)
    return np.array([dmin_units(M, C, p) for p in range(M.m)], dtype=np.int64)


def covering_radius_units(M: MetricSpace, C: Sequence[int]) -> int:
    return int(dmin_vector(M, C).max())
