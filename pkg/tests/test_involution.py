from __future__ import annotations

import pytest
from hypothesis import assume, given, settings, strategies as st

from charkummer.involution import (
    NONNORMAL,
    XY,
    InvolutionData,
    InvolutionError,
    TangentPoint,
    count_singular_chart_points,
    fiber_and_fixed_ideals,
    format_regularity_polynomial,
    gh_tangent_dimension,
    has_embedded_component,
    invariant_equation,
    is_normal,
    rank,
    singular_chart_points,
    table_psi,
    tangent_image,
    verify_invariant_identity,
)
from charkummer.seriescalc.field import field
from charkummer.seriescalc.grammar import format_series
from charkummer.seriescalc.series import TruncatedSeries

F2, F4, F16 = field(2, 1), field(2, 2), field(2, 4)


@st.composite
def parameter_systems(draw, fld=None, prec=8):
    fld = fld or draw(st.sampled_from([F2, F4]))
    mons = st.tuples(st.integers(0, 3), st.integers(0, 3)).filter(lambda e: 1 <= sum(e) <= 3)

    def one():
        terms = draw(st.dictionaries(mons, st.integers(1, fld.order - 1), min_size=1, max_size=3))
        return TruncatedSeries(fld, XY, terms, prec)
    try:
        return InvolutionData(one(), one())
    except InvolutionError:
        assume(False)


def test_equation_of_the_simplest_system():
    d = InvolutionData.parse("x", "y", F2)
    assert format_series(invariant_equation(d)) == "z^2 + x^2*y + x*y^2 + x*y*z"


@settings(max_examples=25)
@given(parameter_systems())
def test_invariant_identity_holds_exactly(d):
    assert verify_invariant_identity(d, 8).ok


@settings(max_examples=25)
@given(parameter_systems())
def test_fiber_ideal_is_the_frobenius_square(d):
    assert fiber_and_fixed_ideals(d, 8).fiber_equals_frobenius_square


@given(parameter_systems())
def test_equation_is_symmetric_under_swapping_the_roles(d):
    f = invariant_equation(d)
    g = invariant_equation(d.swapped())
    swapped = TruncatedSeries(f.field, f.vars, {(e[1], e[0], e[2]): c for e, c in g.items()}, g.prec)
    n = min(f.prec, swapped.prec)
    assert f.truncate(n) == swapped.truncate(n)


@given(parameter_systems(fld=F4))
def test_point_listing_agrees_with_the_census(d):
    if not is_normal(d):
        assert count_singular_chart_points(d) == NONNORMAL
        return
    points, nonrational = singular_chart_points(d)
    assert len(points) + nonrational == count_singular_chart_points(d)
    # counts are stable under extending the field
    assert count_singular_chart_points(d.over(F16)) == count_singular_chart_points(d)


@pytest.mark.parametrize("a,b,count", [
    ("x", "y", 3), ("x", "y^2", 2), ("y", "x^2", 1), ("x^2", "y^2", NONNORMAL),
])
def test_singular_point_counts(a, b, count):
    assert count_singular_chart_points(InvolutionData.parse(a, b, F2)) == count


def test_regularity_polynomials_of_the_ordinary_system():
    d = InvolutionData.parse("x", "y", F2)
    assert format_regularity_polynomial(d, "a") == "lambda + lambda^2"
    assert format_regularity_polynomial(d, "b") == "mu + mu^2"


def test_embedded_component_exactly_when_nonnormal():
    assert not has_embedded_component(InvolutionData.parse("x", "y^2", F2)).embedded
    rep = has_embedded_component(InvolutionData.parse("x^2", "y^2", F2))
    assert rep.embedded and rep.witness_ok


def test_tangent_table_rows():
    d = InvolutionData.parse("x^2", "y^2", F2)
    rows = [tangent_image(d, TangentPoint("a", 0), psi) for psi in table_psi(0, F2)]
    assert [r.format(F2) for r in rows] == ["(0, e)", "(0, e*u)", "(e, 0)"]
    assert rank(F2, [r.vector() for r in rows]) == 3
    rep = gh_tangent_dimension(d, TangentPoint("a", 0))
    assert rep.dimension == 4 and rep.consistent


def test_gh_dimension_is_three_at_a_normal_point():
    d = InvolutionData.parse("x", "y", F2)
    rep = gh_tangent_dimension(d, TangentPoint("a", 0))
    assert rep.dimension == 3 and rep.consistent


@pytest.mark.parametrize("a,b", [("0", "y"), ("x", "x"), ("1 + x", "y")])
def test_invalid_parameter_systems(a, b):
    with pytest.raises(InvolutionError):
        InvolutionData.parse(a, b, F2)
