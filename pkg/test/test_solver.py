from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st
from oracles import brute_force_coloring

from linecolor.model import PointSet, RestrictionArray, select_columns, verify_coloring
from linecolor.solver import (
    BudgetExceededError,
    ConflictGraph,
    Status,
    decide_finite,
    find_unsat_window,
    search,
    staircase_array,
    subarray_unsat,
)

THREE_COLUMN = RestrictionArray.of([[1, 1, 1], [2, 3, 4]])


@st.composite
def instances(draw):
    k = draw(st.integers(1, 2))
    m = draw(st.integers(1, 3))
    rows = draw(
        st.lists(st.lists(st.integers(1, 4), min_size=m, max_size=m), min_size=k, max_size=k)
    )
    points = draw(st.sets(st.integers(0, 8), min_size=1, max_size=7))
    return RestrictionArray.of(rows), PointSet.of(points)


def test_decide_examples():
    assert decide_finite(PointSet.interval(0, 2), RestrictionArray.of([[1], [2]])).status is (
        Status.UNSAT
    )
    D = RestrictionArray.of([[1, 2]])
    assert decide_finite(PointSet.interval(0, 4), D).status is Status.UNSAT
    result = decide_finite(PointSet.interval(0, 3), D)
    assert result.sat
    assert verify_coloring(PointSet.interval(0, 3), result.witness, D) == []


@pytest.mark.parametrize("k", [1, 2, 3, 4, 5])
def test_staircase_is_not_colorable(k):
    D = staircase_array(k)
    assert D.k == D.m == k
    assert decide_finite(PointSet.interval(0, k), D).status is Status.UNSAT
    # one point fewer always works
    assert decide_finite(PointSet.interval(0, k - 1), D).sat


def test_staircase_shape():
    assert staircase_array(1) == RestrictionArray.of([[1]])
    assert staircase_array(2) == RestrictionArray.of([[1, 1], [2, 2]])
    assert staircase_array(4).rows == tuple((i,) * 4 for i in range(1, 5))
    with pytest.raises(ValueError):
        staircase_array(0)


def test_empty_instances():
    D = RestrictionArray.of([[1]])
    assert decide_finite(PointSet(()), D).sat
    assert decide_finite(PointSet.interval(0, 5), RestrictionArray(0, 1, ())).sat


@given(instances())
def test_decide_agrees_with_brute_force(instance):
    D, S = instance
    expected = brute_force_coloring(S, D)
    result = decide_finite(S, D)
    if expected is None:
        assert result.status is Status.UNSAT
    else:
        # both return the lexicographically smallest coloring
        assert result.witness == expected


def test_budget_exceeded():
    with pytest.raises(BudgetExceededError) as info:
        decide_finite(PointSet.interval(0, 12), staircase_array(3), budget=5)
    assert info.value.stats.nodes > 5


def test_residue_graph_bans_multiples_of_period():
    graph = ConflictGraph.for_residues(2, RestrictionArray.of([[2, 1]]))
    assert graph.banned == [0b01, 0b01]
    # residue 0 is forced to color 2, which leaves residue 1 nothing
    colors, _ = search(graph)
    assert colors is None


def test_window_trivial():
    report = find_unsat_window(RestrictionArray.of([[1], [2]]), 3)
    assert report.found
    assert report.size == 2


def _colorable(D, a, b):
    return decide_finite(PointSet.interval(a, b), D).sat


@pytest.mark.parametrize(
    "D", [THREE_COLUMN, RestrictionArray.of([[1, 1, 1], [4, 5, 6]]), RestrictionArray.of([[1, 2]])]
)
def test_window_is_minimal(D):
    report = find_unsat_window(D, 10)
    assert report.found
    a, b = report.window
    assert -report.radius <= a <= b <= report.radius
    assert not _colorable(D, a, b)
    assert _colorable(D, a + 1, b)
    assert _colorable(D, a, b - 1)


def test_no_window_for_colorable_array():
    # the period 2 coloring 1, 2 works on all of Z
    report = find_unsat_window(RestrictionArray.of([[1, 3]]), 6)
    assert not report.found
    assert report.window is None and report.size == 0


def test_window_needs_integers():
    with pytest.raises(ValueError, match="canonicalize"):
        find_unsat_window(RestrictionArray.of([[Fraction(1, 2)]]), 3)


def test_subarray_unsat():
    found = subarray_unsat(THREE_COLUMN, 10)
    assert (1, 2, 3) not in found
    for cols, report in found.items():
        sub = select_columns(THREE_COLUMN, cols)
        a, b = report.window
        assert not _colorable(sub, a, b)
    assert (1,) in found


@given(instances(), st.sets(st.integers(-4, 12), max_size=4))
def test_decide_is_superset_monotone(instance, extra):
    D, S = instance
    bigger = PointSet.of(list(S) + list(extra))
    if not decide_finite(S, D).sat:
        assert not decide_finite(bigger, D).sat
    else:
        result = decide_finite(bigger, D)
        if result.sat:
            assert verify_coloring(S, result.witness.restrict(S), D) == []


@pytest.mark.slow
@pytest.mark.parametrize("n", [1, 2, 3])
def test_family_windows(n):
    D = RestrictionArray.of([[1, 1, 1], [2 * n, 2 * n + 1, 2 * n + 2]])
    report = find_unsat_window(D, 12 * n)
    assert report.found
    a, b = report.window
    assert not _colorable(D, a, b)
