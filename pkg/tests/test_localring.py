from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from charkummer.localring import (
    INFINITE,
    LocalIdeal,
    LocalRingError,
    Membership,
    artinian_length,
    contains,
    frobenius_power,
    hilbert_samuel_multiplicity,
    ideals_equal,
    length_with_certificate,
    monomials_of_degree,
    power_of_maximal_ideal,
    solve_membership,
    tjurina_number,
)
from charkummer.seriescalc.field import field
from charkummer.seriescalc.grammar import parse_polynomial
from charkummer.seriescalc.series import TruncatedSeries

from conftest import series

F2, F4, F5 = field(2, 1), field(2, 2), field(5, 1)
XY, XYZ = ("x", "y"), ("x", "y", "z")


def poly(text, fld=F2, vars=XY, prec=12):
    return parse_polynomial(text, fld, vars, prec)


def test_monomials_of_degree_counts():
    assert len(monomials_of_degree(2, 5)) == 6
    assert len(monomials_of_degree(3, 4)) == 15


@pytest.mark.parametrize("k", [1, 2, 3, 4, 5])
def test_length_of_maximal_ideal_powers(k):
    I = power_of_maximal_ideal(F2, XY, k)
    res = length_with_certificate(I)
    assert res.length == k * (k + 1) // 2
    assert res.certificate_degree == k


@st.composite
def staircases(draw):
    """A monomial ideal of k[[x,y]] containing x^a and y^b, and its colength."""
    a = draw(st.integers(1, 6))
    b = draw(st.integers(1, 6))
    extra = draw(st.lists(st.tuples(st.integers(0, a - 1), st.integers(0, b - 1)), max_size=3))
    gens = [(a, 0), (0, b)] + extra
    outside = sum(1 for i in range(a) for j in range(b)
                  if not any(i >= gi and j >= gj for gi, gj in gens))
    return gens, outside


@given(staircases(), st.sampled_from([F2, F4, F5]))
def test_length_of_monomial_ideals_matches_staircase_count(stair, fld):
    gens, outside = stair
    I = LocalIdeal([TruncatedSeries.monomial(fld, XY, g, 1, 14) for g in gens])
    assert artinian_length(I) == outside


@given(staircases())
def test_length_is_invariant_under_a_unit_multiple(stair):
    gens, outside = stair
    unit = poly("1 + x + y^2")
    I = LocalIdeal([TruncatedSeries.monomial(F2, XY, g, 1, 14) * unit for g in gens])
    assert artinian_length(I) == outside


@given(st.data())
def test_certificate_is_stable_under_more_precision(data):
    f = data.draw(series(F2, XY, 6, min_order=1))
    g = data.draw(series(F2, XY, 6, min_order=1))
    a = length_with_certificate(LocalIdeal([f.with_precision(9), g.with_precision(9)]))
    if a.certificate_degree is None:
        return
    b = length_with_certificate(LocalIdeal([f.with_precision(12), g.with_precision(12)]))
    assert (a.length, a.certificate_degree) == (b.length, b.certificate_degree)


def test_non_artinian_ideal_reports_infinite():
    assert artinian_length(LocalIdeal([poly("x"), poly("x^2")])) == INFINITE


def test_unit_ideal_has_length_zero():
    assert artinian_length(LocalIdeal([poly("1 + x")])) == 0


def test_membership_exact_and_negative():
    I = LocalIdeal([poly("x^2 + y^3"), poly("x*y")])
    assert contains(I, poly("x^3")) is Membership.EXACT
    assert contains(I, poly("x")) is Membership.NO


def test_solve_membership_returns_valid_cofactors():
    gens = [poly("x^2 + y^3"), poly("x*y")]
    f = poly("x^4 + x^2*y^3 + x*y^2 + y^6")
    cof = solve_membership(LocalIdeal(gens), f, 8)
    assert cof is not None
    assert (sum((c * g for c, g in zip(cof, gens)), poly("0")) - f).truncate(8).is_zero()
    assert solve_membership(LocalIdeal(gens), poly("x"), 8) is None


def test_frobenius_square_equals_explicit_generators():
    I = frobenius_power(F2, XY, 2)
    assert ideals_equal(I, LocalIdeal([poly("x^2"), poly("y^2 + x^2*y")])) is True
    with pytest.raises(LocalRingError):
        frobenius_power(F2, XY, 3)


@pytest.mark.parametrize("text,fld,tau", [
    ("z^2 + x*y", F2, 2),          # A1 in characteristic two
    ("x^2 + y^3 + z^2", F5, 2),    # A2, char 5: equals the Milnor number
    ("x^2 + y^5 + z^2", F5, 5),    # A4 with p | n + 1: tau exceeds mu = 4
])
def test_tjurina_numbers(text, fld, tau):
    assert tjurina_number(poly(text, fld, XYZ, 14)) == tau


def test_tjurina_rejects_units():
    with pytest.raises(LocalRingError):
        tjurina_number(poly("1 + x", F2, XYZ))


@pytest.mark.parametrize("text,e", [("z^2 + x*y", 2), ("z^3 + x^3 + y^3", 3), ("z", 1)])
def test_hilbert_samuel_multiplicity_of_hypersurfaces(text, e):
    I = LocalIdeal([poly(text, F2, XYZ, 10)])
    assert hilbert_samuel_multiplicity(I, 2) == e
