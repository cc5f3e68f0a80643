from __future__ import annotations

import pytest
from hypothesis import assume, given, settings, strategies as st

from charkummer.blowup import (
    BlowupError,
    blowup_invariant,
    cartier_multiple_check,
    chart_consistency_check,
    chart_singularities,
    exceptional_fiber_data,
    local_nonsmoothness,
    point_blowup_chart,
    z_chart_exceptional_empty,
)
from charkummer.involution import InvolutionData, InvolutionError
from charkummer.localring import INFINITE, tjurina_number
from charkummer.seriescalc.field import field
from charkummer.seriescalc.grammar import format_series, parse_polynomial
from charkummer.seriescalc.series import TruncatedSeries

F2, F4 = field(2, 1), field(2, 2)
SYSTEMS = [("x", "y"), ("x", "y^2"), ("y", "x^2"), ("x", "y^3"), ("x^2", "y^2")]


@pytest.mark.parametrize("a,b", SYSTEMS)
def test_chart_presentations_are_consistent(a, b):
    d = InvolutionData.parse(a, b, F2)
    assert chart_consistency_check(d, "a").ok
    assert chart_consistency_check(d, "b").ok
    assert z_chart_exceptional_empty(d)


@pytest.mark.parametrize("a,b", SYSTEMS)
def test_exceptional_fiber_is_a_double_line(a, b):
    fib = exceptional_fiber_data(InvolutionData.parse(a, b, F2))
    assert fib.transition_ok and fib.multiplicity == 2


@pytest.mark.parametrize("a,b,mult", [("x", "y", 2), ("x", "y^2", 4), ("x^2", "y^2", 8)])
def test_cartier_multiple_is_twice_the_center_length(a, b, mult):
    assert cartier_multiple_check(InvolutionData.parse(a, b, F2))[0] == mult


@pytest.mark.parametrize("r", [1, 2, 3])
def test_d_family_chart_lengths(r):
    d = InvolutionData.parse("x", "y" if r == 1 else f"y^{r}", F2)
    a, b = chart_singularities(d, "a"), chart_singularities(d, "b")
    assert (a.total_length, b.total_length) == (2 * r, 4 * r)
    assert a.roots_match and b.roots_match


def test_e8_chart_length():
    d = InvolutionData.parse("y", "x^2", F2)
    assert chart_singularities(d, "a").total_length == 12
    assert chart_singularities(d, "b").total_length == 0


def test_nonnormal_blowup_has_no_finite_singular_points():
    with pytest.raises(BlowupError):
        chart_singularities(InvolutionData.parse("x^2", "y^2", F2), "a")


def test_blowup_presentation_shapes():
    res = blowup_invariant(InvolutionData.parse("x", "y", F2))
    assert set(res.charts) == {"a", "b", "z"}
    assert len(res.charts["z"].relations) == 3
    assert res.point_blowup_equivalent


def _a_chart_hypersurface(d: InvolutionData, prec: int) -> TruncatedSeries:
    """For a = x the first a-chart relation solves y = W^2 + xBW + xB^2,
    leaving the single equation b(x, y) - Bx in (x, B, W)."""
    V = ("x", "B", "W")
    x, B, W = (TruncatedSeries.variable(d.field, V, v, prec) for v in V)
    y = W * W + x * B * W + x * B * B
    return (d.b.substitute([x, y]) - B * x).truncate(prec)


@st.composite
def b_series(draw, fld):
    mons = st.tuples(st.integers(0, 3), st.integers(0, 3)).filter(lambda e: 1 <= sum(e) <= 3)
    terms = draw(st.dictionaries(mons, st.integers(1, fld.order - 1), min_size=1, max_size=3))
    return TruncatedSeries(fld, ("x", "y"), terms, 12)


@settings(max_examples=25)
@given(st.data(), st.sampled_from([F2, F4]))
def test_a_chart_length_equals_tjurina_of_the_eliminated_hypersurface(data, fld):
    b = data.draw(b_series(fld))
    try:
        d = InvolutionData(TruncatedSeries.variable(fld, ("x", "y"), "x", 12), b)
    except InvolutionError:
        assume(False)
    length = local_nonsmoothness(d, "a", 0)
    assume(length != INFINITE)
    assert length == tjurina_number(_a_chart_hypersurface(d, 12))


def test_point_blowup_of_an_a1_surface():
    f = parse_polynomial("z^2 + x*y", F2, ("x", "y", "z"))
    pb = point_blowup_chart(f, "x")
    assert pb.multiplicity == 2
    assert format_series(pb.strict_transform) == "y + z^2"
