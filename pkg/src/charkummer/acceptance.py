"""The acceptance suite: fifteen numbered criteria, each a list of assertion
records.  Used by ``charkummer verify-paper`` and tests/test_acceptance.py."""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

from . import lattice, serre
from .blowup import chart_singularities
from .involution import (
    NONNORMAL,
    XY,
    InvolutionData,
    InvolutionError,
    TangentPoint,
    count_singular_chart_points,
    fiber_and_fixed_ideals,
    gh_tangent_dimension,
    rank,
    table_psi,
    tangent_image,
    verify_invariant_identity,
)
from .kummer import (
    GF16,
    ScenarioCase,
    classify_partial_resolution,
    is_superspecial_parameter,
    katsura_to_artin_check,
    run_pipeline,
    standard_cases,
    superspecial_chart_checks,
    supersingular_lattice_walkthrough,
)
from .localring import LocalIdeal, length_with_certificate, power_of_maximal_ideal
from .rdp import load_database
from .records import Assertion, check
from .seriescalc.field import field as get_field
from .seriescalc.series import TruncatedSeries

SEED = 20240229
PRECISION = 12


@dataclass
class CriterionResult:
    number: int
    title: str
    assertions: list[Assertion]
    seconds: float

    @property
    def passed(self) -> bool:
        return bool(self.assertions) and all(a.passed for a in self.assertions)

    def line(self) -> str:
        n_fail = sum(not a.passed for a in self.assertions)
        status = "PASS" if self.passed else "FAIL"
        extra = f" ({n_fail} of {len(self.assertions)} assertions failed)" if n_fail else ""
        return f"criterion {self.number:2d} {status}: {self.title}{extra} [{self.seconds:.2f}s]"


_DB_PATH: str | Path | None = None


def _db():
    """The database the criteria classify against (set by run_all)."""
    return load_database(_DB_PATH)


def _id(n: int, name: str) -> str:
    return f"c{n:02d}.{name}"


# -- inputs shared by criteria 1 and 2 ------------------------------------------------------

def named_parameter_systems(prec: int = PRECISION) -> list[tuple[str, InvolutionData]]:
    f2 = get_field(2, 1)
    out = [(f"({a},{b})", InvolutionData.parse(a, b, f2, prec))
           for a, b in (("x", "y"), ("x", "y^2"), ("y", "x^2"), ("x^2", "y^2"))]
    x = TruncatedSeries.variable(GF16, XY, "x", prec)
    y = TruncatedSeries.variable(GF16, XY, "y", prec)
    for q in range(GF16.order):
        c = GF16.sub(GF16.pow(q, 4), q)
        out.append((f"q={GF16.format(q)}", InvolutionData(x * x, x.scale(c) + y * y)))
    return out


def random_parameter_systems(count: int = 25, seed: int = SEED, prec: int = PRECISION) -> list[InvolutionData]:
    """Random (a, b) over GF(2) and GF(4): a few monomials of degree 1..3 each,
    rejected unless (a, b) has finite colength."""
    rng = random.Random(seed)
    mons = [(i, d - i) for d in (1, 2, 3) for i in range(d + 1)]
    out = []
    while len(out) < count:
        fld = get_field(2, rng.choice((1, 2)))

        def poly():
            terms = {m: rng.randrange(1, fld.order) for m in rng.sample(mons, rng.randint(1, 3))}
            return TruncatedSeries(fld, XY, terms, prec)
        try:
            out.append(InvolutionData(poly(), poly()))
        except InvolutionError:
            continue
    return out


# -- the criteria ------------------------------------------------------------------------

def criterion_1() -> list[Assertion]:
    out = []
    systems = named_parameter_systems() + [(f"random{i:02d}", d) for i, d in enumerate(random_parameter_systems())]
    for name, d in systems:
        rep = verify_invariant_identity(d, PRECISION)
        out.append(check(_id(1, f"identity.{name}"), True, rep.ok, "PAPER"))
    return out


def criterion_2() -> list[Assertion]:
    out = []
    systems = named_parameter_systems() + [(f"random{i:02d}", d) for i, d in enumerate(random_parameter_systems())]
    for name, d in systems:
        rep = fiber_and_fixed_ideals(d, PRECISION)
        out.append(check(_id(2, f"fiber.{name}"), True, rep.fiber_equals_frobenius_square, "PAPER"))
    return out


def criterion_3() -> list[Assertion]:
    d = InvolutionData.parse("y", "x^2", get_field(2, 1), PRECISION)
    a = chart_singularities(d, "a")
    cls = classify_partial_resolution(d, _db())
    return [
        check(_id(3, "e8.a_chart_length"), 12, a.total_length, "PAPER"),
        check(_id(3, "e8.below"), "E8^2", cls.below.name if cls.below else None, "PAPER"),
        check(_id(3, "e8.above"), ["D7^0"], cls.above_names, "PAPER"),
    ]


def criterion_4() -> list[Assertion]:
    out = []
    f2 = get_field(2, 1)
    for r in (1, 2, 3):
        d = InvolutionData.parse("x", "y" if r == 1 else f"y^{r}", f2, PRECISION)
        a = chart_singularities(d, "a")
        b = chart_singularities(d, "b")
        out.append(check(_id(4, f"r{r}.a_chart_length"), 2 * r, a.total_length, "PAPER"))
        out.append(check(_id(4, f"r{r}.b_chart_length"), 4 * r, b.total_length, "PAPER"))
        cls = classify_partial_resolution(d, _db())
        a_names = [p.rdp for p in cls.points if p.chart == "a"]
        b_names = sorted(p.rdp for p in cls.points if p.chart == "b")
        out.append(check(_id(4, f"r{r}.a_class"), [f"A{2 * r - 1}"], a_names, "PAPER"))
        expected_b = ["A1", "A1"] if r == 1 else [f"D{2 * r}^0"]
        out.append(check(_id(4, f"r{r}.b_class"), expected_b, b_names, "PAPER"))
    return out


def criterion_5() -> list[Assertion]:
    def types(kind, n, node):
        g = lattice.dynkin_graph(kind, n)
        return sorted(lattice.dynkin_recognize(c) for c in lattice.remove_labels(g, [str(node)]))
    return [
        check(_id(5, "e8_minus_1"), ["D7"], types("E", 8, 1), "PAPER"),
        check(_id(5, "d8_minus_4"), ["A3", "D4"], types("D", 8, 4), "PAPER"),
        check(_id(5, "d4_minus_2"), ["A1", "A1", "A1"], types("D", 4, 2), "PAPER"),
    ]


def _walkthrough(prefixes: tuple[str, ...], n: int) -> list[Assertion]:
    w = supersingular_lattice_walkthrough()
    return [Assertion(_id(n, a.id.removeprefix("lattice.")), a.passed, a.expected, a.got, a.provenance)
            for a in w.assertions if a.id.startswith(prefixes)]


def criterion_6() -> list[Assertion]:
    return _walkthrough(("lattice.star.",), 6)


def criterion_7() -> list[Assertion]:
    return _walkthrough(("lattice.cartier.",), 7)


def criterion_8() -> list[Assertion]:
    return _walkthrough(("lattice.blowup.",), 8)


def criterion_9() -> list[Assertion]:
    f2 = get_field(2, 1)
    out = [
        check(_id(9, "sigma2"), 3, count_singular_chart_points(InvolutionData.parse("x", "y", f2)), "PAPER"),
        check(_id(9, "sigma1"), 2, count_singular_chart_points(InvolutionData.parse("x", "y^2", f2)), "PAPER"),
    ]
    for name, d in named_parameter_systems()[4:]:
        q = GF16.parse(name.removeprefix("q="))
        expected = NONNORMAL if is_superspecial_parameter(q) else 1
        out.append(check(_id(9, f"sigma0.{name}"), expected, count_singular_chart_points(d), "PAPER"))
    return out


def criterion_10() -> list[Assertion]:
    out = []
    for case in standard_cases():
        rep = run_pipeline(case, _db())
        out.extend(Assertion(_id(10, a.id), a.passed, a.expected, a.got, a.provenance) for a in rep.assertions)
    # the nonnormal verdict appears exactly for q in F_4
    for q in range(GF16.order):
        rep = run_pipeline(ScenarioCase(0, None, q), _db())
        nonnormal = rep.above == "nonnormal"
        out.append(check(_id(10, f"nonnormal_iff_superspecial.q={GF16.format(q)}"),
                         is_superspecial_parameter(q), nonnormal, "PAPER"))
    return out


def katsura_parameters() -> list[tuple[str, int]]:
    f4 = get_field(2, 2)
    g4 = f4.embedding_into(GF16)(f4.gen_value)
    return [("0", 0), ("1", 1), ("gen_gf4", g4), ("gen_gf16", GF16.gen_value)]


def criterion_11() -> list[Assertion]:
    out = []
    for name, q in katsura_parameters():
        rep = katsura_to_artin_check(q, 10)
        if rep.ok:
            got, detail = "residual=0", ""
        elif rep.decision is not None and not rep.decision.solvable:
            got = f"no_automorphism_mod_m^{rep.decision.precision}"
            detail = f"{rep.right.message}; {rep.decision.summary()}"
        else:
            got = f"elimination_stopped_in_degree_{rep.right.obstruction_degree}"
            detail = rep.right.message
        if not rep.ok and rep.isomorphic:
            detail += "; with multiplication by units the residual is zero (isomorphic rings)"
        out.append(Assertion(_id(11, f"right_equivalence.q={name}"), rep.ok, "residual=0", got, "PAPER", detail))
    return out


def criterion_12() -> list[Assertion]:
    rep = superspecial_chart_checks(PRECISION)
    return [Assertion(_id(12, a.id.removeprefix("superspecial.")), a.passed, a.expected, a.got, a.provenance)
            for a in rep.assertions]


def criterion_13() -> list[Assertion]:
    fld = get_field(2, 1)
    d = InvolutionData.parse("x^2", "y^2", fld, PRECISION)
    pt = TangentPoint("a", 0)
    rows = [tangent_image(d, pt, psi) for psi in table_psi(0, fld)]
    got = [r.format(fld) for r in rows]
    rep = gh_tangent_dimension(d, pt)
    return [
        check(_id(13, "rows"), ["(0, e)", "(0, e*u)", "(e, 0)"], got, "PAPER"),
        check(_id(13, "rows_independent"), 3, rank(fld, [r.vector() for r in rows]), "PAPER"),
        check(_id(13, "gh_tangent_dimension"), 4, rep.dimension, "PAPER"),
        check(_id(13, "gh_cross_checks"), True, rep.consistent, "DERIVED"),
    ]


def criterion_14() -> list[Assertion]:
    r = serre.sym_depth_report(serre.SymDepthQuery(3, 2, 2))
    r2 = serre.sym_depth_report(serre.SymDepthQuery(2, 2, 2))
    r3 = serre.sym_depth_report(serre.SymDepthQuery(4, 5, 3))
    issues = serre.grid_consistency(range(1, 7), range(0, 9), (0, 2, 3, 5, 7))
    return [
        check(_id(14, "g3n2p2.depth"), 5, r.depth, "PAPER"),
        check(_id(14, "g3n2p2.S5"), True, r.holds(5), "PAPER"),
        check(_id(14, "g3n2p2.S6"), False, r.holds(6), "PAPER"),
        check(_id(14, "g2n2p2.cohen_macaulay"), True, r2.cohen_macaulay, "PAPER"),
        check(_id(14, "g4n5p3.depth"), 6, r3.depth, "PAPER"),
        check(_id(14, "grid_contradictions"), 0, len(issues), "DERIVED"),
    ]


def criterion_15() -> list[Assertion]:
    out = []
    rng = random.Random(SEED)
    # Laufer's algorithm does not depend on the order in which curves are added
    configs = {
        "star": lattice.star_config(),
        "blown_up_star": supersingular_lattice_walkthrough().contracted,
        "E8": lattice.dynkin_graph("E8"),
        "D7": lattice.dynkin_graph("D7"),
    }
    for name, c in configs.items():
        base = lattice.fundamental_cycle(c)
        same = True
        for _ in range(100):
            order = list(range(c.n))
            rng.shuffle(order)
            same = same and lattice.fundamental_cycle(c, order) == base
        out.append(check(_id(15, f"laufer_order.{name}"), True, same, "DERIVED"))
    # length of k[[x,y]]/(x,y)^k
    f2 = get_field(2, 1)
    for k in range(1, 6):
        I = power_of_maximal_ideal(f2, XY, k, PRECISION)
        out.append(check(_id(15, f"length_m^{k}"), k * (k + 1) // 2, length_with_certificate(I).length, "DERIVED"))
    # Dynkin recognition survives relabelling
    for kind in ("A5", "D4", "D7", "E6", "E7", "E8"):
        g = lattice.dynkin_graph(kind)
        ok = all(lattice.dynkin_recognize(lattice.random_relabeling(g, rng)) == kind for _ in range(20))
        out.append(check(_id(15, f"dynkin_relabel.{kind}"), True, ok, "DERIVED"))
    # the Nakayama certificate is stable when the precision grows by 3
    x, y = (TruncatedSeries.variable(f2, XY, v, 20) for v in XY)
    ideals = {
        "x2_y3": [x * x, y ** 3],
        "xy_x3+y3": [x * y, x ** 3 + y ** 3],
        "x2+y3_y4": [x * x + y ** 3, y ** 4],
    }
    for name, gens in ideals.items():
        a = length_with_certificate(LocalIdeal([g.with_precision(10) for g in gens]))
        b = length_with_certificate(LocalIdeal([g.with_precision(13) for g in gens]))
        out.append(check(_id(15, f"nakayama_stable.{name}"), (a.length, a.certificate_degree),
                         (b.length, b.certificate_degree), "DERIVED"))
    return out


CRITERIA: list[tuple[int, str, Callable[[], list[Assertion]]]] = [
    (1, "invariant equation identity", criterion_1),
    (2, "fiber ideal equals the Frobenius square", criterion_2),
    (3, "E8^2 chart length and D7^0 classification", criterion_3),
    (4, "D_4r^r chart lengths and classifications", criterion_4),
    (5, "Dynkin surgery", criterion_5),
    (6, "star lattice fundamental cycle", criterion_6),
    (7, "5x5 numerically Cartier solve", criterion_7),
    (8, "two-fold blow-up of the star lattice", criterion_8),
    (9, "singular point census", criterion_9),
    (10, "Kummer table reproduction", criterion_10),
    (11, "Katsura normal form (right equivalence)", criterion_11),
    (12, "superspecial normalization charts", criterion_12),
    (13, "tangent table and G-Hilbert tangent dimension", criterion_13),
    (14, "Serre condition grid", criterion_14),
    (15, "property suites", criterion_15),
]


def database_checks(db_path: str | Path | None = None) -> list[Assertion]:
    db = load_database(db_path)
    return [Assertion(f"c00.rdp_self_check.{c.name}", c.ok, c.stored, c.computed, "DERIVED", c.message)
            for c in db.checks]


def run_criterion(n: int) -> CriterionResult:
    for num, title, fn in CRITERIA:
        if num == n:
            t = time.perf_counter()
            res = fn()
            return CriterionResult(num, title, res, time.perf_counter() - t)
    raise KeyError(f"no criterion {n}")


def run_all(db_path: str | Path | None = None, only: list[int] | None = None) -> tuple[list[CriterionResult], list[Assertion]]:
    global _DB_PATH
    previous, _DB_PATH = _DB_PATH, db_path
    try:
        t = time.perf_counter()
        db = database_checks(db_path)
        results = [CriterionResult(0, "RDP database self-checks", db, time.perf_counter() - t)]
        results += [run_criterion(n) for n, _, _ in CRITERIA if only is None or n in only]
    finally:
        _DB_PATH = previous
    return results, sorted((a for r in results for a in r.assertions), key=lambda a: a.id)
