from __future__ import annotations

import pytest

from charkummer.kummer import (
    GF16,
    ScenarioCase,
    ScenarioError,
    classify_partial_resolution,
    classify_quotient,
    decide_right_equivalence,
    expected_table,
    format_census,
    is_superspecial_parameter,
    katsura_to_artin_check,
    run_pipeline,
    standard_cases,
    stated_superspecial_lattice_note,
    superspecial_chart_checks,
    supersingular_lattice_walkthrough,
)
from charkummer.involution import InvolutionData
from charkummer.rdp import load_database
from charkummer.seriescalc.field import field

F2 = field(2, 1)
ALL_Q = list(range(GF16.order))
F4_STAR = [q for q in ALL_Q if q and GF16.pow(q, 4) == q]


def test_superspecial_parameters_are_exactly_f4():
    assert sorted(GF16.format(q) for q in ALL_Q if is_superspecial_parameter(q)) == ["0", "1", "g^10", "g^5"]


@pytest.mark.parametrize("case", standard_cases(), ids=lambda c: c.name)
def test_pipeline_reproduces_the_table_column(case):
    rep = run_pipeline(case)
    assert rep.ok, rep.human()


def test_table_has_four_columns():
    cols = expected_table()
    assert [c.case for c in cols] == ["ordinary", "p-rank-1", "supersingular", "superspecial"]
    assert cols[0].below == "4D4^1" and cols[0].above == "12A1"


@pytest.mark.parametrize("q", ALL_Q, ids=GF16.format)
def test_nonnormal_verdict_iff_q_in_f4(q):
    rep = run_pipeline(ScenarioCase(0, None, q))
    assert (rep.above == "nonnormal") == is_superspecial_parameter(q)
    assert rep.ok


def test_pipeline_records_are_deterministic():
    a = [x.record() for c in standard_cases() for x in run_pipeline(c).assertions]
    b = [x.record() for c in standard_cases() for x in run_pipeline(c).assertions]
    assert a == b


@pytest.mark.parametrize("kwargs", [
    dict(p_rank=3), dict(p_rank=0), dict(p_rank=0, a_number=2, q=GF16.gen_value),
    dict(p_rank=0, a_number=1, q=0), dict(p_rank=2, q=1), dict(p_rank=1, a_number=0),
])
def test_invalid_cases(kwargs):
    with pytest.raises(ScenarioError):
        ScenarioCase(**kwargs)


def test_case_names_and_fixed_points():
    assert ScenarioCase(2).fixed_points == 4 and ScenarioCase(2).name == "ordinary"
    assert ScenarioCase(0, None, 0).a_number == 2 and ScenarioCase(0, None, 0).superspecial
    assert ScenarioCase(0, None, GF16.gen_value).name == "supersingular"


def test_census_formatting():
    assert format_census(["A3", "D4^0", "A3", "D4^0"]) == "2A3+2D4^0"
    assert format_census(["E8^2"]) == "E8^2"


@pytest.mark.parametrize("a,b,below,above", [
    ("x", "y", "D4^1", ["A1", "A1", "A1"]),
    ("x", "y^2", "D8^2", ["A3", "D4^0"]),
    ("y", "x^2", "E8^2", ["D7^0"]),
])
def test_partial_resolution_classification(a, b, below, above):
    d = InvolutionData.parse(a, b, F2)
    assert classify_quotient(d, load_database()).name == below
    assert sorted(classify_partial_resolution(d, load_database()).above_names) == above


# -- Katsura's equation -------------------------------------------------------------------

@pytest.mark.parametrize("q", ALL_Q, ids=GF16.format)
def test_katsura_is_isomorphic_to_artin_form_for_every_q(q):
    rep = katsura_to_artin_check(q, 10)
    assert rep.shift_residual_zero
    assert rep.isomorphic


@pytest.mark.parametrize("q", [q for q in ALL_Q if q not in F4_STAR], ids=GF16.format)
def test_right_equivalence_outside_f4_star(q):
    rep = katsura_to_artin_check(q, 10)
    assert rep.ok and rep.right.error_orders == sorted(rep.right.error_orders)


@pytest.mark.parametrize("q", F4_STAR, ids=GF16.format)
def test_no_right_equivalence_for_q_in_f4_star(q):
    rep = katsura_to_artin_check(q, 10)
    assert not rep.ok and rep.right.obstruction_degree == 7
    assert rep.decision is not None and not rep.decision.solvable


def test_exact_decision_control_and_subfields():
    control = decide_right_equivalence(0)
    assert control.solvable and control.additive and control.linear_parts_fix_g
    assert control.linear_parts == 6
    # the obstruction for q = 1 already lives over GF(2) and GF(4)
    assert not decide_right_equivalence(1, field(2, 1)).solvable
    assert not decide_right_equivalence(1, field(2, 2)).solvable


def test_exact_decision_domain():
    with pytest.raises(ScenarioError):
        decide_right_equivalence(GF16.gen_value)       # q outside F_4
    with pytest.raises(ScenarioError):
        decide_right_equivalence(1, N=10)
    with pytest.raises(ScenarioError):
        decide_right_equivalence(GF16.pow(GF16.gen_value, 5), field(2, 1))


# -- lattices and the superspecial charts ------------------------------------------------

def test_supersingular_lattice_walkthrough():
    w = supersingular_lattice_walkthrough()
    assert w.ok, [a.human() for a in w.assertions if not a.passed]
    assert w.contracted.n == 6


def test_superspecial_chart_identities():
    rep = superspecial_chart_checks(12)
    assert rep.ok, [a.human() for a in rep.assertions if not a.passed]
    assert list(rep.point_lengths.values()) == [2, 2, 2, 2]
    assert rep.symmetric_new_points == ["0"]


def test_stated_superspecial_lattice_is_inconsistent():
    note = stated_superspecial_lattice_note()
    assert not note.consistent
    assert note.realizations_ignoring_z2 > 0 and note.z2_of_those == (-4,)
