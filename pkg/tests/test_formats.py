import json
from fractions import Fraction

import pytest

from bijective import formats
from bijective.analysis import CostProfile, cost_profile
from bijective.kserver import simulate
from bijective.metric import cycle, unit_path
from bijective.ordered import ordered_bijection


def test_profile_csv_round_trip(tmp_path):
    p = cost_profile("kcenter", unit_path(5), (1, 3), 2)
    path = tmp_path / "p.csv"
    formats.write_profile_csv(path, p)
    text = path.read_text()
    assert text.splitlines()[0] == "rank,cost_num,cost_den"
    assert text.splitlines()[-1] == "24,1,1"
    back = formats.read_profile_csv(path)
    assert back.costs == p.costs


def test_profile_csv_rejects_unsorted_and_bad_header(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("rank,cost_num,cost_den\n0,2,1\n1,1,1\n")
    with pytest.raises(ValueError):
        formats.read_profile_csv(bad)
    bad.write_text("a,b,c\n")
    with pytest.raises(ValueError):
        formats.read_profile_csv(bad)


def test_unit_recovery(tmp_path):
    p = CostProfile.from_costs([Fraction(1, 6), Fraction(1, 4), 1], Fraction(1, 12))
    path = tmp_path / "p.csv"
    formats.write_profile_csv(path, p)
    assert formats.read_profile_csv(path).unit == Fraction(1, 12)


def test_json_is_canonical():
    obj = {"b": Fraction(1, 3), "a": (1, 2)}
    text = formats.dumps(obj)
    assert text == formats.dumps(dict(reversed(list(obj.items()))))
    assert text.endswith("\n")
    assert json.loads(text) == {"a": [1, 2], "b": "1/3"}


def test_trace_and_pointmap_csv():
    t = simulate("greedy", cycle(6), (0, 3), (1, 4))
    lines = formats.trace_csv([(7, t)]).splitlines()
    assert lines[0] == "seq_id,step,request,server,cost"
    assert lines[1:] == ["7,0,1,0,1", "7,1,4,1,1"]
    pm = formats.pointmap_csv(ordered_bijection(cycle(6), (0, 3), (1, 4))).splitlines()
    assert pm[0] == "rank,point_C1,dmin_C1,point_C2,dmin_C2"
    assert pm[1] == "0,0,0,1,0"


def test_error_object():
    assert formats.error_object("budget_exceeded", "x") == {"error": "budget_exceeded", "message": "x"}
