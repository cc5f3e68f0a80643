from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from charkummer.serre import (
    UNDETERMINED,
    SerreError,
    SymDepthQuery,
    grid_consistency,
    kemper_depth,
    sym_depth_report,
)


def report(g, n, p):
    return sym_depth_report(SymDepthQuery(g, n, p))


def test_symmetric_square_of_a_threefold_in_characteristic_two():
    r = report(3, 2, 2)
    assert r.cohen_macaulay is False
    assert r.depth == 5
    assert r.holds(5) is True and r.holds(6) is False


def test_symmetric_square_of_a_surface_is_cohen_macaulay():
    assert report(2, 2, 2).cohen_macaulay is True


def test_tame_range_depth():
    r = report(4, 5, 3)
    assert r.depth == 6 and kemper_depth(4, 5, 3) == 6
    assert any("canonical but not rational" in n for n in r.notes)


@pytest.mark.parametrize("g,n,p", [(5, 3, 0), (5, 3, 5), (1, 7, 2), (6, 1, 2)])
def test_cohen_macaulay_cases(g, n, p):
    r = report(g, n, p)
    assert r.cohen_macaulay is True and r.depth == g * n


def test_undetermined_cases_are_reported_as_such():
    # g >= 3, p = 2, n = 4 lies outside every rule except "not CM"
    r = report(3, 4, 2)
    assert r.cohen_macaulay is False and r.depth is None
    assert r.holds(r.guaranteed_level + 1) == UNDETERMINED


def test_default_grid_is_free_of_contradictions():
    assert grid_consistency() == []


@given(st.integers(1, 8), st.integers(0, 10), st.sampled_from([0, 2, 3, 5, 7, 11]))
def test_serre_levels_are_monotone(g, n, p):
    r = report(g, n, p)
    verdicts = [r.holds(k) for k in range(1, g * n + 3)]
    seen_undetermined = seen_false = False
    for v in verdicts:
        if v is True:
            assert not (seen_undetermined or seen_false)
        elif v == UNDETERMINED:
            assert not seen_false
            seen_undetermined = True
        else:
            seen_false = True
    assert r.holds(min(g + 2, g * n) or 1) is True


@pytest.mark.parametrize("g,n,p", [(0, 2, 2), (2, -1, 2), (2, 2, 4)])
def test_invalid_queries(g, n, p):
    with pytest.raises(SerreError):
        SymDepthQuery(g, n, p)


def test_kemper_range_is_enforced():
    with pytest.raises(SerreError):
        kemper_depth(3, 2, 2)
