from __future__ import annotations

import pytest

from charkummer.involution import invariant_equation
from charkummer.rdp import (
    Ambiguous,
    RDPError,
    classify_by_tjurina,
    collisions,
    d_family_equation,
    default_database_path,
    involution_quotient_classes,
    load_database,
    parse_database,
    tjurina_of_class,
)
from charkummer.seriescalc.grammar import format_series, parse_polynomial


def artin_tau(family: str, n: int, r: int | None) -> int:
    """Tjurina numbers of characteristic-two rational double points."""
    if family == "A":
        return n + 1 if n % 2 else n
    if family == "D":
        return 2 * n - 2 * r if n % 2 == 0 else 2 * n - 2 - 2 * r
    if family == "E" and n == 8:
        return 16 - 2 * r
    raise ValueError(family)


def test_shipped_database_passes_its_self_checks():
    db = load_database()
    assert db.consistent
    assert {c.name for c in db.checks} >= {"A1", "D4^1", "D8^2", "E8^2"}


@pytest.mark.parametrize("cls", load_database().classes, ids=lambda c: c.name)
def test_stored_tau_matches_the_closed_formula(cls):
    assert cls.tau == artin_tau(cls.family, cls.index, cls.coindex)


def test_no_dynkin_tau_collisions_in_the_database():
    assert collisions(load_database()) == []


@pytest.mark.parametrize("r,name", [(1, "D4^1"), (2, "D8^2"), (3, "D12^3")])
def test_involution_quotients_round_trip(r, name):
    db = load_database()
    cls = db.by_name(name)
    d = cls.involution_data()
    assert invariant_equation(d, 14) == cls.polynomial(14)
    assert cls.equation == d_family_equation(r).replace("x*y^1*", "x*y*")


def test_quotient_class_listing():
    names = [c.name for c in involution_quotient_classes(3)]
    assert names == ["D4^1", "D8^2", "D12^3", "E8^2"]


def test_classification_by_tjurina():
    assert classify_by_tjurina(12, "D7").name == "D7^0"
    assert classify_by_tjurina(6, "A5").name == "A5"
    amb = classify_by_tjurina(99, "D7")
    assert isinstance(amb, Ambiguous) and amb.candidates == []


def test_corrupted_database_names_the_failing_class(tmp_path):
    text = default_database_path().read_text()
    bad = text.replace("name=D8^2 family=D index=8 coindex=2", "name=D8^2 family=D index=8 coindex=2", 1)
    bad = bad.replace('x*y^4 + x^2*y" tau=12', 'x*y^4 + x^2*y" tau=14', 1)
    assert bad != text
    p = tmp_path / "corrupt.txt"
    p.write_text(bad)
    db = load_database(p)
    assert not db.consistent
    failing = [c for c in db.checks if not c.ok]
    assert [(c.name, c.stored, c.computed) for c in failing] == [("D8^2", 14, 12)]


@pytest.mark.parametrize("text", [
    "class name=A1 family=A index=1 tau=2\n",                       # missing header
    "format=charkummer-rdp version=1\nclass name=A1 family=Q index=1\n",
    "format=charkummer-rdp version=1\nclass name=A1 family=A index=x\n",
    "format=charkummer-rdp version=1\nwidget name=A1\n",
])
def test_parser_rejects_malformed_databases(text):
    with pytest.raises(RDPError):
        parse_database(text)


def test_tjurina_of_class_recomputes_from_the_equation():
    cls = load_database().by_name("E8^2")
    assert tjurina_of_class(cls) == 12
    assert format_series(parse_polynomial(cls.equation, cls.polynomial().field, ("x", "y", "z"))) \
        == format_series(cls.polynomial(12))
