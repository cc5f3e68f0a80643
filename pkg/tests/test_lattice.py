from __future__ import annotations

import itertools
import random
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import given, strategies as st

from charkummer import lattice
from charkummer.lattice import (
    CurveConfig,
    LatticeError,
    canonical_cycle,
    constraint_search,
    determinant,
    dynkin_graph,
    dynkin_recognize,
    elliptic_multiplicity,
    fundamental_cycle,
    is_minimally_elliptic,
    is_negative_definite,
    numerically_cartier,
    parse_graph,
    point_blowup,
    remove_labels,
    self_intersection,
    solve,
    star_config,
)

GRAPHS = Path(__file__).resolve().parent.parent / "graphs"
ADE = ["A1", "A2", "A5", "D4", "D5", "D8", "E6", "E7", "E8"]


def brute_force_fundamental_cycle(c: CurveConfig, bound: int = 7) -> tuple[int, ...]:
    """Smallest positive cycle with Z.E_i <= 0 for all i, by enumeration."""
    best = None
    for z in itertools.product(range(1, bound), repeat=c.n):
        if all(v <= 0 for v in c.pairing_vector(z)):
            if best is None or all(a <= b for a, b in zip(z, best)):
                best = z
    return best


@pytest.mark.parametrize("name", ["A3", "D4", "D5", "E6"])
def test_laufer_matches_enumeration(name):
    c = dynkin_graph(name)
    assert fundamental_cycle(c) == brute_force_fundamental_cycle(c)


def test_laufer_matches_enumeration_on_the_star():
    c = star_config()
    assert fundamental_cycle(c) == brute_force_fundamental_cycle(c, 4) == (1, 2, 1, 1, 1)


@pytest.mark.parametrize("name,det", [("A1", 2), ("A4", 5), ("D4", 4), ("D7", 4), ("E6", 3), ("E7", 2), ("E8", 1)])
def test_ade_discriminants(name, det):
    assert abs(determinant(dynkin_graph(name).matrix())) == det


@pytest.mark.parametrize("name", ADE)
def test_ade_graphs_are_rational(name):
    c = dynkin_graph(name)
    z = fundamental_cycle(c)
    assert is_negative_definite(c)
    assert self_intersection(c, z) == -2
    assert dynkin_recognize(c) == name


def test_e8_highest_root_in_bourbaki_numbering():
    assert fundamental_cycle(dynkin_graph("E8")) == (2, 3, 4, 6, 5, 4, 3, 2)


@given(st.sampled_from(ADE + ["STAR"]), st.randoms(use_true_random=False))
def test_laufer_is_start_independent(name, rnd):
    c = star_config() if name == "STAR" else dynkin_graph(name)
    order = list(range(c.n))
    rnd.shuffle(order)
    assert fundamental_cycle(c, order) == fundamental_cycle(c)


@given(st.sampled_from(ADE), st.integers(0, 2**32 - 1))
def test_recognition_survives_relabeling(name, seed):
    c = lattice.random_relabeling(dynkin_graph(name), random.Random(seed))
    assert dynkin_recognize(c) == name


@given(st.lists(st.integers(-5, 5), min_size=5, max_size=5))
def test_solve_roundtrip(rhs):
    M = star_config().matrix()
    x = solve(M, rhs)
    assert [sum(Fraction(M[i][j]) * x[j] for j in range(5)) for i in range(5)] == rhs


def test_star_is_minimally_elliptic_of_multiplicity_two():
    c = star_config()
    z = fundamental_cycle(c)
    assert self_intersection(c, z) == -1
    assert canonical_cycle(c) == tuple(Fraction(-v) for v in z)
    assert is_minimally_elliptic(c) and elliptic_multiplicity(c) == 2


def test_cartier_solve_on_the_star():
    c = star_config(leaf_self=(-4, -2, -2, -2))
    sol = numerically_cartier(c, (2, 0, 0, 0, 0))
    assert sol.integral and sol.solution == (-1, -2, -1, -1, -1)
    assert not numerically_cartier(c, (1, 0, 0, 0, 0)).integral


def test_two_fold_blowup_of_the_star():
    c = point_blowup(star_config(), {1: 1}, "C6")
    c = point_blowup(c, {5: 1}, "C7")
    assert c.self_ints == (-3, -3, -2, -2, -2, -2, -1)
    contracted = lattice.subconfig(c, range(6))
    z = fundamental_cycle(contracted)
    assert z == (1, 2, 1, 1, 1, 1)
    assert self_intersection(contracted, z) == -3
    assert is_minimally_elliptic(contracted) and elliptic_multiplicity(contracted) == 3


@pytest.mark.parametrize("name,node,expected", [
    ("E8", 1, ["D7"]), ("D8", 4, ["A3", "D4"]), ("D4", 2, ["A1", "A1", "A1"]),
])
def test_dynkin_surgery(name, node, expected):
    comps = remove_labels(dynkin_graph(name), [str(node)])
    assert sorted(dynkin_recognize(c) for c in comps) == expected


def test_non_ade_graphs_are_not_recognized():
    assert dynkin_recognize(star_config()) is None


def test_graph_file_roundtrip():
    g = parse_graph((GRAPHS / "elliptic_double_point.cfg").read_text())
    assert g.config == star_config()
    assert lattice.cycle_vector(g.config, g.cycles[0]) == [1, 2, 1, 1, 1]
    assert parse_graph(lattice.format_graph(g.config)).config == g.config


def test_shipped_e8_file_is_e8():
    assert dynkin_recognize(parse_graph((GRAPHS / "e8.cfg").read_text()).config) == "E8"


@pytest.mark.parametrize("text", [
    "curve A self=-2\ncurve A self=-2\n",
    "curve A self=-2\ncurve B self=-2\nedge A B\nedge B A\n",
    "curve A self=-2\nedge A C\n",
    "curve A self=x\n",
    "node A\n",
])
def test_graph_parser_rejects_bad_input(text):
    with pytest.raises(LatticeError):
        parse_graph(text)


def test_fundamental_cycle_needs_negative_definite_input():
    with pytest.raises(LatticeError):
        fundamental_cycle(CurveConfig.from_edges((-1, -1), [(0, 1)]))


def test_constraint_search_finds_the_star():
    found = constraint_search(5, (-3, -2, -2, -2, -2), (1,), target_z=(1, 2, 1, 1, 1),
                              target_z2=-1, require_minimally_elliptic=True)
    assert any(f.mult == star_config().mult for f in found)
