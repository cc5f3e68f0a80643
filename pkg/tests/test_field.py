from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from charkummer.seriescalc.field import CONWAY_2, GF, FieldError, field, is_irreducible, parse_field_spec

from conftest import fields


@given(st.data(), fields())
def test_field_axioms(data, F):
    a, b, c = (data.draw(st.integers(0, F.order - 1)) for _ in range(3))
    assert F.add(a, b) == F.add(b, a)
    assert F.mul(a, b) == F.mul(b, a)
    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
    assert F.add(a, F.neg(a)) == 0
    if a:
        assert F.mul(a, F.inv(a)) == 1


@given(st.data(), fields())
def test_frobenius_is_additive_and_multiplicative(data, F):
    a, b = (data.draw(st.integers(0, F.order - 1)) for _ in range(2))
    assert F.frobenius(F.add(a, b)) == F.add(F.frobenius(a), F.frobenius(b))
    assert F.frobenius(F.mul(a, b)) == F.mul(F.frobenius(a), F.frobenius(b))
    assert F.frobenius(a) == F.pow(a, F.p)


@pytest.mark.parametrize("k", sorted(CONWAY_2))
def test_conway_moduli_are_primitive(k):
    F = field(2, k)
    assert is_irreducible(F.modulus, 2)
    assert len({F.pow(F.gen_value, j) for j in range(F.order - 1)}) == F.order - 1


@pytest.mark.parametrize("k,m", [(1, 4), (2, 4), (2, 6), (3, 6)])
def test_embeddings_are_ring_maps(k, m):
    small, big = field(2, k), field(2, m)
    emb = small.embedding_into(big)
    for a in range(small.order):
        for b in range(small.order):
            assert emb(small.mul(a, b)) == big.mul(emb(a), emb(b))
            assert emb(small.add(a, b)) == big.add(emb(a), emb(b))


def test_elements_print_as_generator_powers():
    F = field(2, 4)
    assert F.format(0) == "0" and F.format(1) == "1"
    for j in range(2, 15):
        assert F.format(F.pow(F.gen_value, j)) == f"g^{j}"
        assert F.parse(f"g^{j}") == F.pow(F.gen_value, j)


def test_gf4_generator_sits_in_gf16_as_fifth_power():
    emb = field(2, 2).embedding_into(field(2, 4))
    g16 = field(2, 4)
    assert emb(field(2, 2).gen_value) == g16.pow(g16.gen_value, 5)


def test_bad_fields_are_rejected():
    with pytest.raises(FieldError):
        GF(4, 1)
    with pytest.raises(FieldError):
        GF(2, 2, (1, 0, 1))  # x^2 + 1 = (x + 1)^2
    with pytest.raises(FieldError):
        field(2, 2).embedding_into(field(2, 3))
    with pytest.raises(ValueError):
        parse_field_spec("6^1")


def test_field_spec_literals():
    assert parse_field_spec("2^4") == field(2, 4)
    assert parse_field_spec("3") == field(3, 1)
