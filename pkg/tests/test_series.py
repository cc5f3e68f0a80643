from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from charkummer.seriescalc.field import field
from charkummer.seriescalc.grammar import ParseError, format_series, parse_polynomial
from charkummer.seriescalc.implicit import solve_implicit_pair
from charkummer.seriescalc.series import SeriesError, TruncatedSeries, jacobian_minors, pack, unpack

from conftest import fields, series

F16 = field(2, 4)


@given(st.data(), fields())
def test_ring_axioms(data, F):
    f, g, h = (data.draw(series(F)) for _ in range(3))
    assert f + g == g + f
    assert f * g == g * f
    assert (f * g) * h == f * (g * h)
    assert f * (g + h) == f * g + f * h
    assert f - f == TruncatedSeries.zero(F, ("x", "y"), 6)


@given(st.data(), fields())
def test_substitution_is_a_ring_map(data, F):
    f, g = data.draw(series(F)), data.draw(series(F))
    imgs = [data.draw(series(F, ("u", "v"), 6, min_order=1)) for _ in range(2)]
    # the result precision may drop below 6 when an image has high order
    lhs = (f * g).substitute(imgs)
    rhs = f.substitute(imgs) * g.substitute(imgs)
    assert lhs == rhs.truncate(lhs.prec)


@given(st.data(), st.sampled_from([field(2, 1), field(2, 2), field(2, 4)]))
def test_substitution_composes(data, F):
    f = data.draw(series(F))
    inner = [data.draw(series(F, ("u", "v"), 6, min_order=1)) for _ in range(2)]
    outer = [data.draw(series(F, ("s", "t"), 6, min_order=1)) for _ in range(2)]
    once = f.substitute([g.substitute(outer) for g in inner])
    twice = f.substitute(inner).substitute(outer)
    n = min(once.prec, twice.prec)
    assert once.truncate(n) == twice.truncate(n)


@given(st.data(), fields())
def test_frobenius_matches_pth_power(data, F):
    f = data.draw(series(F, prec=4))
    assert f.frobenius().truncate(4) == (f ** F.p).truncate(4)


@given(st.lists(st.integers(0, 40), min_size=1, max_size=4))
def test_pack_roundtrip(exps):
    assert unpack(pack(exps), len(exps)) == tuple(exps)


def test_precision_is_relative_and_truncation_drops_high_degree():
    x, y = (TruncatedSeries.variable(F16, ("x", "y"), v, 4) for v in ("x", "y"))
    # x is known mod m^4, so x*y is known mod m^5
    assert (x * y).prec == 5 and (x * y).order() == 2
    assert (x ** 2 * y ** 2).truncate(4).is_zero()
    assert (x + y ** 3 * x).truncate(4) == x


@given(st.data(), st.sampled_from([field(2, 1), field(2, 4), field(3, 2)]))
def test_print_parse_roundtrip(data, F):
    f = data.draw(series(F, prec=8))
    assert parse_polynomial(format_series(f), F, f.vars, 8) == f


def test_grammar_examples():
    f = parse_polynomial("z^2 + x^2*y^2*z + x*y^4 + y*x^4", F16, ("x", "y", "z"))
    assert format_series(f) == "z^2 + x^4*y + x^2*y^2*z + x*y^4"
    g = parse_polynomial("g^3*x + g*y", F16, ("x", "y"))
    assert g.linear_coefficient("x") == F16.pow(F16.gen_value, 3)
    with pytest.raises(ParseError):
        parse_polynomial("x^^2", F16, ("x",))
    with pytest.raises(ParseError):
        parse_polynomial("w", F16, ("x", "y"))


def test_partial_derivatives_in_characteristic_two():
    f = parse_polynomial("x^2*y + x^3", field(2, 1), ("x", "y"))
    assert format_series(f.partial("x")) == "x^2"
    assert format_series(f.partial("y")) == "x^2"


def test_jacobian_minors_of_a_single_relation_are_partials():
    f = parse_polynomial("z^2 + x*y", field(2, 1), ("x", "y", "z"))
    _, gens = jacobian_minors([f])
    assert [format_series(m) for m in gens] == ["y", "x", "0"]


@pytest.mark.parametrize("a,b", [("x", "y"), ("x", "y^2"), ("y", "x^2"), ("x^2", "y^2")])
def test_implicit_pair_solves_its_defining_equations(a, b):
    F = field(2, 1)
    A = parse_polynomial(a, F, ("x", "y"))
    B = parse_polynomial(b, F, ("x", "y"))
    sol = solve_implicit_pair(A, B, 10)
    u, v = (TruncatedSeries.variable(F, ("u", "v"), n, 10) for n in ("u", "v"))
    ax, bx = A.substitute([sol.x, sol.y]), B.substitute([sol.x, sol.y])
    assert (u * u + ax * u - sol.x).truncate(10).is_zero()
    assert (v * v + bx * v - sol.y).truncate(10).is_zero()
    assert (u * bx + v * ax - sol.z).truncate(10).is_zero()


def test_implicit_pair_rejects_non_primary_ideal():
    F = field(2, 1)
    x = TruncatedSeries.variable(F, ("x", "y"), "x", 8)
    with pytest.raises(SeriesError):
        solve_implicit_pair(x, x * x, 8)
