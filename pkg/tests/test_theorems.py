"""Tie-rule robustness: the suites that depend on greedy's tie rule, rerun with other rules."""

import pytest

from bijective.theorems import SUITES, TIE_AWARE, circle_bounds, line_bounds, run_suite, star_bound


@pytest.mark.parametrize("tie", ["highest_point", "clockwise"])
def test_circle_optimality_other_ties(tie):
    rows = run_suite("circle-optimality", tie)
    assert rows and all(r.passed for r in rows)
    assert all(tie in r.instance for r in rows)


@pytest.mark.parametrize("tie", ["highest_point", "clockwise"])
def test_bounds_other_ties(tie):
    rows = circle_bounds(tie, ms=(6,), ks=(2, 3), n_max=4)
    rows += line_bounds(tie, m_max=6, n_max=4)
    rows += star_bound(tie, n_max=3)
    failed = [r.to_dict() for r in rows if not r.passed]
    assert not failed


def test_suite_registry():
    assert TIE_AWARE <= set(SUITES)
    with pytest.raises(KeyError):
        run_suite("no-such-suite")
    # tie is ignored by suites that do not use one
    assert [r.to_dict() for r in run_suite("engine", "highest_point")] == [r.to_dict() for r in run_suite("engine")]
