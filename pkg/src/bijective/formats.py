"""CSV and JSON readers and writers.

JSON is written with sorted keys and a trailing newline so reruns with the
same inputs are byte-identical.
"""

from __future__ import annotations

import csv
import io
import json
from math import gcd, lcm
from fractions import Fraction
from pathlib import Path

from .analysis import CostProfile

PROFILE_HEADER = ("rank", "cost_num", "cost_den")
TRACE_HEADER = ("seq_id", "step", "request", "server", "cost")
POINTMAP_HEADER = ("rank", "point_C1", "dmin_C1", "point_C2", "dmin_C2")


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, default=_default) + "\n"


def _default(x):
    if isinstance(x, Fraction):
        return str(x)
    if hasattr(x, "to_dict"):
        return x.to_dict()
    if isinstance(x, (set, frozenset, tuple)):
        return list(x)
    raise TypeError(f"cannot serialise {type(x).__name__}")


def write_json(path, obj):
    Path(path).write_text(dumps(obj))


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def profile_rows(profile: CostProfile):
    rank = 0
    for v, c in profile.runs():
        for _ in range(c):
            yield rank, v.numerator, v.denominator
            rank += 1


def profile_csv(profile: CostProfile) -> str:
    return _csv_text(PROFILE_HEADER, profile_rows(profile))


def write_profile_csv(path, profile: CostProfile):
    Path(path).write_text(profile_csv(profile))


def read_profile_csv(path, **meta) -> CostProfile:
    """Read a profile CSV back (costs must be sorted ascending)."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = tuple(next(reader))
        if header != PROFILE_HEADER:
            raise ValueError(f"unexpected profile header {header}")
        costs = [Fraction(int(num), int(den)) for _, num, den in reader]
    if costs != sorted(costs):
        raise ValueError("profile costs are not sorted")
    unit = _unit_of(costs)
    return CostProfile.from_costs(costs, unit, **meta)


def _unit_of(costs) -> Fraction:
    den = 1
    for c in costs:
        den = lcm(den, c.denominator)
    g = 0
    for c in costs:
        g = gcd(g, c.numerator * (den // c.denominator))
    return Fraction(g or 1, den)


def trace_csv(traces) -> str:
    """CSV of ``(seq_id, trace)`` pairs."""
    return _csv_text(TRACE_HEADER, (row for i, t in traces for row in t.rows(i)))


def pointmap_csv(pm) -> str:
    return _csv_text(POINTMAP_HEADER, pm.rows())


def error_object(kind: str, message: str) -> dict:
    return {"error": kind, "message": message}
