from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bijective.metric import (MetricError, build_metric, covering_radius_units, cycle, dmin, dmin_vector,
                              parse_metric_flag, path, spider, unit_path, weighted_star)

import oracles


def test_path_distances():
    M = path(5)
    assert list(M.points) == [0, 1, 2, 3, 4]
    assert M.distance(0, 4) == 4
    assert M.distance(1, 3) == 2


def test_cycle_wraps():
    assert cycle(4).distance(0, 3) == 1
    assert cycle(6).distance(0, 4) == 2


def test_spider_tips_go_through_centre():
    S = spider([(3, 1), (3, 1)])
    assert S.m == 7
    assert S.distance(3, 6) == 6
    assert S.centre == 0


def test_weighted_star_leaves():
    W = weighted_star([1, 5])
    assert W.distance(1, 2) == 6
    assert W.distance(0, 2) == 5


def test_unit_path_is_exact():
    M = unit_path(5)
    assert M.distance(0, 1) == Fraction(1, 4)
    assert M.diameter == 1
    assert M.position(3) == Fraction(3, 4)


def test_dmin_examples():
    M = path(5)
    assert dmin(M, (0, 4), 2) == 2
    assert dmin(M, (0, 4), 4) == 0
    U = unit_path(5)
    assert max(dmin(U, (1, 3), p) for p in U.points) == Fraction(1, 4)


def test_floats_are_taken_by_repr():
    assert path(3, 0.1).distance(0, 2) == Fraction(1, 5)


@pytest.mark.parametrize("bad", ["blob:3", "path:0", "path:x", "cycle:1", "path:3:1/0", "path:4:-1"])
def test_bad_flags_are_rejected(bad):
    with pytest.raises(MetricError):
        parse_metric_flag(bad)


def test_flag_and_json_agree():
    a = parse_metric_flag("cycle:6:1/2")
    b = build_metric('{"kind": "cycle", "m": 6, "delta": "1/2"}')
    assert a.to_dict() == b.to_dict()
    assert a.distance(0, 3) == Fraction(3, 2)


def test_invalid_point():
    with pytest.raises(MetricError):
        path(3).distance(0, 3)


@pytest.mark.parametrize("M, edges", [
    (path(6, Fraction(1, 3)), oracles.path_edges(6, Fraction(1, 3))),
    (cycle(7), oracles.cycle_edges(7)),
    (spider([(3, 1), (2, 2), (1, Fraction(1, 2))]), oracles.spider_edges([(3, 1), (2, 2), (1, Fraction(1, 2))])),
])
def test_distances_match_shortest_paths(M, edges):
    D = oracles.distance_table(M.m, edges)
    assert all(M.distance(i, j) == D[i][j] for i in M.points for j in M.points)
    assert all(int(M.dist_matrix[i, j]) * M.unit == D[i][j] for i in M.points for j in M.points)


metrics = st.one_of(
    st.builds(path, st.integers(2, 12), st.sampled_from([1, Fraction(1, 2), 3])),
    st.builds(cycle, st.integers(3, 12), st.sampled_from([1, Fraction(2, 3)])),
    st.builds(lambda a, b, c: spider([(a, 1), (b, 2), (c, 1)]),
              st.integers(1, 3), st.integers(1, 3), st.integers(1, 3)),
)


@settings(max_examples=60, deadline=None)
@given(metrics, st.data())
def test_metric_axioms(M, data):
    x, y, z = (data.draw(st.integers(0, M.m - 1)) for _ in range(3))
    assert M.distance(x, x) == 0
    assert M.distance(x, y) == M.distance(y, x)
    assert (M.distance(x, y) > 0) == (x != y)
    assert M.distance(x, z) <= M.distance(x, y) + M.distance(y, z)
    assert M.distance(x, y) <= M.diameter


@settings(max_examples=60, deadline=None)
@given(metrics, st.data())
def test_dmin_is_monotone_under_adding_servers(M, data):
    C = data.draw(st.lists(st.integers(0, M.m - 1), min_size=1, max_size=3))
    extra = data.draw(st.integers(0, M.m - 1))
    before, after = dmin_vector(M, C), dmin_vector(M, C + [extra])
    assert (after <= before).all()
    assert after[extra] == 0
    assert covering_radius_units(M, C + [extra]) <= covering_radius_units(M, C)
