"""Generalized Kummer surfaces in characteristic 2: the sign involution on an
abelian surface A, fixed point by fixed point.

The local model at a fixed point is a wild involution with parameter pair
(a, b); the quotient A/{+-1} has an isolated singularity there and the
blow-up of (a, b, z) is the crepant partial resolution.  The four cases are
indexed by the 2-rank sigma (and, when sigma = 0, by the Oort parameter q):

    sigma = 2   (x, y)                     at each of 4 fixed points
    sigma = 1   (x, y^2)                   at each of 2 fixed points
    sigma = 0   (x^2, (q^4 - q) x + y^2)   at the single fixed point

The first two are the normal forms of D_4^1 and D_8^2 quotients; the third
comes from putting Katsura's quartic into Artin's form (checked by
:func:`katsura_to_artin_check`).
"""

from __future__ import annotations

import itertools
import random
from collections import Counter
from dataclasses import dataclass, field as dc_field

from . import lattice
from .blowup import chart_singularities, local_chart_relations
from .involution import (
    NONNORMAL,
    XYZ,
    InvolutionData,
    count_singular_chart_points,
    has_embedded_component,
    invariant_equation,
    is_normal,
)
from .localring import (
    INFINITE,
    LocalIdeal,
    monomials_of_degree,
    hilbert_samuel_multiplicity,
    nonsmoothness_length,
    solve_membership,
    tjurina_number,
)
from .rdp import Ambiguous, RDPClass, RDPDatabase, classify_by_tjurina, load_database
from .records import Assertion, check
from .seriescalc.field import GF, field as get_field
from .seriescalc.series import TruncatedSeries

GF16 = get_field(2, 4)
SEED_DECISION = 20240229
FIXED_POINTS = {2: 4, 1: 2, 0: 1}


class ScenarioError(ValueError):
    pass


def is_superspecial_parameter(q: int, fld: GF = GF16) -> bool:
    return fld.pow(q, 4) == q


@dataclass(frozen=True)
class ScenarioCase:
    """p_rank sigma; a_number (sigma = 0 only); q a raw element of GF(16)."""

    p_rank: int
    a_number: int | None = None
    q: int | None = None

    def __post_init__(self):
        if self.p_rank not in FIXED_POINTS:
            raise ScenarioError(f"p-rank must be 0, 1 or 2, got {self.p_rank}")
        if self.p_rank == 0:
            if self.q is None:
                raise ScenarioError("the supersingular case needs the parameter q")
            if not 0 <= self.q < GF16.order:
                raise ScenarioError(f"q must be an element of GF(16), got {self.q}")
            expected_a = 2 if is_superspecial_parameter(self.q) else 1
            if self.a_number is None:
                object.__setattr__(self, "a_number", expected_a)
            elif self.a_number not in (1, 2):
                raise ScenarioError("a-number must be 1 or 2")
            elif self.a_number != expected_a:
                raise ScenarioError(
                    f"a-number {self.a_number} is inconsistent with q = {GF16.format(self.q)} "
                    f"(superspecial exactly when q^4 = q)")
        else:
            if self.a_number not in (None, 2 - self.p_rank):
                raise ScenarioError(f"p-rank {self.p_rank} forces a-number {2 - self.p_rank}")
            if self.q is not None:
                raise ScenarioError("q is only meaningful for p-rank 0")

    @property
    def fixed_points(self) -> int:
        return FIXED_POINTS[self.p_rank]

    @property
    def superspecial(self) -> bool:
        return self.p_rank == 0 and is_superspecial_parameter(self.q)

    @property
    def name(self) -> str:
        if self.p_rank == 2:
            return "ordinary"
        if self.p_rank == 1:
            return "p-rank-1"
        return "superspecial" if self.superspecial else "supersingular"

    def __str__(self) -> str:
        s = f"p-rank {self.p_rank}"
        if self.p_rank == 0:
            s += f", a-number {self.a_number}, q = {GF16.format(self.q)}"
        return s


def artin_data_for(case: ScenarioCase, prec: int = 12) -> list[InvolutionData]:
    if case.p_rank == 2:
        d = InvolutionData.parse("x", "y", get_field(2, 1), prec)
    elif case.p_rank == 1:
        d = InvolutionData.parse("x", "y^2", get_field(2, 1), prec)
    else:
        fld = GF16
        c = fld.sub(fld.pow(case.q, 4), case.q)
        x = TruncatedSeries.variable(fld, ("x", "y"), "x", prec)
        y = TruncatedSeries.variable(fld, ("x", "y"), "y", prec)
        d = InvolutionData(x * x, x.scale(c) + y * y)
    return [d] * case.fixed_points


# -- the table from the introduction ------------------------------------------------

@dataclass(frozen=True)
class TableColumn:
    case: str
    below: str   # singularities of A/{+-1}
    above: str   # singularities of the crepant partial resolution


EXPECTED_TABLE = (
    TableColumn("ordinary", "4D4^1", "12A1"),
    TableColumn("p-rank-1", "2D8^2", "2A3+2D4^0"),
    TableColumn("supersingular", "elliptic double point", "elliptic triple point"),
    TableColumn("superspecial", "elliptic double point", "nonnormal"),
)


def expected_table() -> tuple[TableColumn, ...]:
    return EXPECTED_TABLE


def expected_column(case: ScenarioCase) -> TableColumn:
    return next(c for c in EXPECTED_TABLE if c.case == case.name)


def format_census(names) -> str:
    counts = Counter(names)
    return "+".join(f"{n if n > 1 else ''}{name}" for name, n in sorted(counts.items()))


# -- classification of the partial resolution ------------------------------------------

@dataclass
class PointClass:
    chart: str
    slope: str
    length: object
    rdp: str | None


@dataclass
class PartialResolutionClass:
    below: RDPClass | None
    points: list[PointClass]
    removed_nodes: list[int]
    ambiguous: bool = False

    @property
    def above_names(self) -> list[str]:
        return [p.rdp or "?" for p in self.points]


def classify_quotient(d: InvolutionData, db: RDPDatabase | None = None, prec: int = 24) -> RDPClass | None:
    """The database class whose stored equation is the invariant equation of d
    (and whose Tjurina number matches)."""
    db = db or load_database()
    f = invariant_equation(d, prec)
    for c in db.classes:
        if c.equation is None:
            continue
        if c.polynomial(prec) == f and tjurina_number(f) == c.tau:
            return c
    return None


def chart_points(d: InvolutionData, prec: int | None = None) -> list[PointClass]:
    out = []
    for chart in ("a", "b"):
        cs = chart_singularities(d, chart, prec)
        for p in cs.points:
            out.append(PointClass(chart, p.field.format(p.slope) if p.slope >= 0 else "?", p.length, None))
    return out


def classify_partial_resolution(d: InvolutionData, db: RDPDatabase | None = None,
                                prec: int | None = None) -> PartialResolutionClass:
    """Classify the singular points above a rational double point.

    The resolution graph of the quotient is its Dynkin diagram; the partial
    resolution contracts all but one curve.  We try every curve: the
    remaining components must match the chart points one-to-one, with each
    (Dynkin type, local length) pair naming a unique database class.
    """
    db = db or load_database()
    below = classify_quotient(d, db)
    points = chart_points(d, prec)
    if below is None:
        return PartialResolutionClass(None, points, [], True)
    graph = lattice.dynkin_graph(below.family, below.index)
    solutions: dict[tuple[str, ...], list[int]] = {}
    for node in range(graph.n):
        types = [lattice.dynkin_recognize(c) for c in lattice.remove_curves(graph, {node})]
        if len(types) != len(points) or any(t is None for t in types):
            continue
        for perm in set(itertools.permutations(types)):
            names = []
            for p, t in zip(points, perm):
                if not isinstance(p.length, int):
                    break
                r = classify_by_tjurina(p.length, t, db)
                if isinstance(r, Ambiguous):
                    break
                names.append(r.name)
            else:
                solutions.setdefault(tuple(names), []).append(node)
    if len(solutions) != 1:
        return PartialResolutionClass(below, points, sorted({n for v in solutions.values() for n in v}), True)
    (names, nodes), = solutions.items()
    for p, n in zip(points, names):
        p.rdp = n
    return PartialResolutionClass(below, points, sorted(set(nodes)))


# -- the pipeline --------------------------------------------------------------

@dataclass
class FixedPointReport:
    index: int
    data: str
    equation: str
    tau: object
    normal: bool
    singular_points: object
    embedded_component: bool
    below: str
    above: list[str]
    details: dict = dc_field(default_factory=dict)


@dataclass
class ScenarioReport:
    case: ScenarioCase
    fixed_points: list[FixedPointReport]
    expected: TableColumn
    below: str
    above: str
    assertions: list[Assertion]

    @property
    def ok(self) -> bool:
        return all(a.passed for a in self.assertions)

    def human(self) -> str:
        lines = [f"case: {self.case} ({self.case.fixed_points} fixed point(s))"]
        for fp in self.fixed_points:
            lines.append(f"  fixed point {fp.index}: {fp.data}")
            lines.append(f"    quotient equation: {fp.equation} = 0, tau = {fp.tau}")
            lines.append(f"    below: {fp.below}; normal blow-up: {fp.normal}; "
                         f"singular points on the exceptional line: {fp.singular_points}")
            if fp.above:
                lines.append(f"    above: {' + '.join(fp.above)}")
            if fp.embedded_component:
                lines.append("    exceptional fiber has an embedded component")
        lines.append(f"  A/{{+-1}}:            {self.below}   (expected {self.expected.below})")
        lines.append(f"  partial resolution: {self.above}   (expected {self.expected.above})")
        lines.extend("  " + a.human() for a in self.assertions)
        return "\n".join(lines)


def elliptic_double_point_check(d: InvolutionData) -> dict:
    """Multiplicity and Tjurina number of the quotient; for the non-superspecial
    parameter also the minimal-ellipticity of its resolution graph."""
    f = invariant_equation(d, 16)
    return {"multiplicity": f.order(), "tau": tjurina_number(f)}


def elliptic_triple_point_check(d: InvolutionData, prec: int = 12) -> dict:
    """The single singular point (mu = 0 on the b-chart) of a sigma = 0 blow-up:
    surface multiplicity and nonsmoothness length."""
    rels = local_chart_relations(d, "b", 0, prec)
    mult = hilbert_samuel_multiplicity(LocalIdeal(rels), 2)
    return {"multiplicity": mult, "length": nonsmoothness_length(rels)}


def _analyse(d: InvolutionData, case: ScenarioCase, db: RDPDatabase) -> tuple[FixedPointReport, dict]:
    eq = invariant_equation(d)
    tau = tjurina_number(invariant_equation(d, 16))
    normal = is_normal(d)
    count = count_singular_chart_points(d)
    emb = has_embedded_component(d)
    extra: dict = {}
    if case.p_rank > 0:
        cls = classify_partial_resolution(d, db)
        below = cls.below.name if cls.below else "?"
        above = cls.above_names
        extra["removed_nodes"] = cls.removed_nodes
        extra["points"] = [(p.chart, p.slope, p.length, p.rdp) for p in cls.points]
    else:
        dp = elliptic_double_point_check(d)
        extra.update({f"quotient_{k}": v for k, v in dp.items()})
        is_double = dp["multiplicity"] == 2 and dp["tau"] != INFINITE
        if not case.superspecial:
            star = lattice.star_config()
            extra["graph_minimally_elliptic"] = lattice.is_minimally_elliptic(star)
            extra["graph_multiplicity"] = lattice.elliptic_multiplicity(star)
            is_double = is_double and extra["graph_minimally_elliptic"] and extra["graph_multiplicity"] == 2
        below = "elliptic double point" if is_double else "?"
        if normal:
            tp = elliptic_triple_point_check(d)
            extra.update({f"point_{k}": v for k, v in tp.items()})
            above = ["elliptic triple point"] if count == 1 and tp["multiplicity"] == 3 else ["?"]
        else:
            above = ["nonnormal"]
    fp = FixedPointReport(0, str(d), str(eq), tau, normal, count, emb.embedded, below, above, extra)
    if emb.embedded:
        extra["embedded_witness"] = emb.witness_ok
    return fp, extra


_ANALYSIS_CACHE: dict[tuple, tuple[FixedPointReport, dict]] = {}


def run_pipeline(case: ScenarioCase, db: RDPDatabase | None = None, prec: int = 12) -> ScenarioReport:
    """Compute every fixed point of the case and compare with the table.

    All fixed points of a case carry the same local data, so the local
    analysis is computed once per distinct parameter pair (and database)
    and reused, also across calls.
    """
    db = db or load_database()
    fps = []
    for i, d in enumerate(artin_data_for(case, prec), 1):
        key = (str(d.a), str(d.b), d.field.k, case.p_rank, case.superspecial, db.source, prec)
        if key not in _ANALYSIS_CACHE:
            _ANALYSIS_CACHE[key] = _analyse(d, case, db)
        fp, _ = _ANALYSIS_CACHE[key]
        fps.append(FixedPointReport(i, fp.data, fp.equation, fp.tau, fp.normal, fp.singular_points,
                                    fp.embedded_component, fp.below, list(fp.above), dict(fp.details)))
    exp = expected_column(case)
    below = format_census(fp.below for fp in fps) if case.p_rank > 0 else fps[0].below
    if case.p_rank > 0:
        above = format_census(n for fp in fps for n in fp.above)
    else:
        above = fps[0].above[0]
    tag = case.name
    asserts = []
    if not case.superspecial:
        asserts.append(check(f"scenario.{tag}.below", exp.below, below, "PAPER"))
    asserts.append(check(f"scenario.{tag}.above", exp.above, above, "PAPER"))
    expected_count = {2: 3, 1: 2, 0: 1}[case.p_rank] if not case.superspecial else NONNORMAL
    asserts.append(check(f"scenario.{tag}.singular_points", expected_count, fps[0].singular_points, "PAPER"))
    asserts.append(check(f"scenario.{tag}.embedded_component", case.superspecial, fps[0].embedded_component, "PAPER"))
    if case.superspecial:
        asserts.append(check(f"scenario.{tag}.embedded_witness", True, fps[0].details.get("embedded_witness"), "DERIVED"))
    return ScenarioReport(case, fps, exp, below, above, asserts)


def standard_cases(q_general: int | None = None) -> list[ScenarioCase]:
    """One case per column of the table; the supersingular column uses the
    generator of GF(16), the superspecial one q = 0."""
    q = GF16.gen_value if q_general is None else q_general
    return [ScenarioCase(2), ScenarioCase(1), ScenarioCase(0, 1, q), ScenarioCase(0, 2, 0)]


# -- Katsura's equation -------------------------------------------------------------

def katsura_polynomial(q: int, fld: GF = GF16, prec: int = 12) -> TruncatedSeries:
    x, y, z = (TruncatedSeries.variable(fld, XYZ, v, prec) for v in XYZ)
    c = fld.sub(fld.pow(q, 4), q)
    q2, q4 = fld.pow(q, 2), fld.pow(q, 4)
    one = TruncatedSeries.one(fld, XYZ, prec)
    x2, x3, x4 = x * x, x * x * x, x ** 4
    f = (z ** 4).scale(q4)
    f = f + (one + x3.scale(fld.mul(c, q2)) + (x2 * y * y).scale(q2)) * z * z
    f = f + (x3.scale(c) + (x4 * y).scale(q2) + x2 * y * y) * z
    f = f + x3.scale(fld.mul(c, c)) + (x ** 5 * y * y).scale(q4) + x4 * y + x * y ** 4
    return f.truncate(prec)


def artin_polynomial(q: int, fld: GF = GF16, prec: int = 12) -> TruncatedSeries:
    """g = z^2 + x^2 b z + x^4 y + x b^2 with b = (q^4 - q) x + y^2."""
    x, y, z = (TruncatedSeries.variable(fld, XYZ, v, prec) for v in XYZ)
    c = fld.sub(fld.pow(q, 4), q)
    b = x.scale(c) + y * y
    return (z * z + x * x * b * z + x ** 4 * y + x * b * b).truncate(prec)


def inverse_of_quadratic_shift(q: int, fld: GF, prec: int) -> TruncatedSeries:
    """s(z) with s + q^2 s^2 = z, i.e. the inverse of z -> z + q^2 z^2."""
    z = TruncatedSeries.variable(fld, XYZ, "z", prec)
    q2 = fld.pow(q, 2)
    s = z
    for _ in range(prec):
        nxt = (z - (s * s).scale(q2)).truncate(prec)
        if nxt == s:
            break
        s = nxt
    return s


@dataclass
class EquivalenceRun:
    """One order-by-order elimination of f o sigma^{-1} - g."""

    allow_units: bool
    error_orders: list[int]      # order of the error before each step
    residual_zero: bool
    obstruction_degree: int | None
    message: str = ""


@dataclass
class KatsuraReport:
    q: int
    precision: int
    shift_residual_zero: bool    # f o sigma^{-1} - g lies in x^4 y m
    right: EquivalenceRun        # substitutions only
    contact: EquivalenceRun      # substitutions and multiplication by units
    decision: "RightEquivalenceDecision | None" = None   # exact mod m^8, when the elimination stops

    @property
    def ok(self) -> bool:
        return self.shift_residual_zero and self.right.residual_zero

    @property
    def isomorphic(self) -> bool:
        return self.shift_residual_zero and self.contact.residual_zero


def _in_x4y_m(h: TruncatedSeries) -> bool:
    return all(e[0] >= 4 and e[1] >= 1 and sum(e) >= 6 for e, _ in h.items())


def _homogeneous_step(err: TruncatedSeries, g: TruncatedSeries, dg: list[TruncatedSeries], o: int,
                      fld: GF, work: int, allow_units: bool):
    """Corrections whose first-order effect is the degree-o part of err.

    Every correction is homogeneous of the degree that puts its effect in
    degree o exactly, so no lower-degree cancellations are possible.  In
    characteristic 2 the expansion of (z + h_z)^2 contains h_z^2, so a z
    correction is only allowed when 2 deg h_z > o.  Returns (h, u) with the
    substitution v -> v - h and the unit 1 + u, or None.
    """
    n = len(XYZ)
    cols = []   # (target, multiplier monomial): target 0..2 = h_j, 3 = u
    gens = []
    for j, d in enumerate(dg):
        if d.is_zero():
            continue
        deg = o - d.order()
        if deg < 1 or (j == 2 and 2 * deg <= o):
            continue
        for e in monomials_of_degree(n, deg):
            mon = TruncatedSeries.monomial(fld, XYZ, e, 1, work)
            cols.append((j, mon))
            gens.append((mon * d).truncate(work))
    if allow_units and o - g.order() >= 1:
        for e in monomials_of_degree(n, o - g.order()):
            mon = TruncatedSeries.monomial(fld, XYZ, e, 1, work)
            cols.append((3, mon))
            gens.append((mon * g).truncate(work))
    if not gens:
        return None
    cof = solve_membership(LocalIdeal(gens, work), err, o + 1)
    if cof is None:
        return None
    h = [TruncatedSeries.zero(fld, XYZ, work) for _ in range(4)]
    for (j, mon), c in zip(cols, cof):
        h[j] = h[j] + (c.with_precision(work) * mon).truncate(work)
    return h[:3], h[3]


def _eliminate(F: TruncatedSeries, g: TruncatedSeries, N: int, work: int, allow_units: bool) -> EquivalenceRun:
    fld = g.field
    xyz = [TruncatedSeries.variable(fld, XYZ, v, work) for v in XYZ]
    dg = [g.partial(w).with_precision(work) for w in XYZ]
    err = (F - g).truncate(N)
    orders: list[int] = []
    for _ in range(N + 1):
        if err.is_zero():
            return EquivalenceRun(allow_units, orders, True, None)
        o = err.order()
        orders.append(o)
        step = _homogeneous_step(err, g, dg, o, fld, work, allow_units)
        if step is None:
            return EquivalenceRun(allow_units, orders, False, o,
                                  f"degree-{o} error {err.homogeneous_part(o)} is not in the tangent space")
        h, u = step
        F = F.substitute([(v - hj).truncate(work) for v, hj in zip(xyz, h)]).truncate(work)
        F = (F + u * F).truncate(work)
        new = (F - g).truncate(N)
        if not new.is_zero() and new.order() <= o:
            return EquivalenceRun(allow_units, orders, False, o,
                                  f"step at degree {o} did not raise the error order (got {new.order()})")
        err = new
    return EquivalenceRun(allow_units, orders, err.is_zero(), None if err.is_zero() else err.order(),
                          "" if err.is_zero() else "step limit reached")


def katsura_to_artin_check(q: int, N: int = 10, fld: GF = GF16) -> KatsuraReport:
    """Compare Katsura's quartic f with Artin's g modulo m^N.

    Step 1 applies the inverse of z -> z + q^2 z^2; the error is then of the
    form x^4 y eps.  Step 2 removes the error degree by degree with
    homogeneous substitutions v -> v - h (the y -> y + y eps corrections are
    the leading case), certifying that each step raises the error order.
    The same elimination is also run allowing multiplication by units
    1 + u, which decides isomorphism of the quotient rings.  When the
    substitutions stop, an exact decision modulo m^8 is attached.
    """
    if N > 12:
        raise ScenarioError("precision is limited to N <= 12")
    if not 0 <= q < fld.order:
        raise ScenarioError(f"q must lie in {fld}")
    work = N + 2
    f = katsura_polynomial(q, fld, work)
    g = artin_polynomial(q, fld, work)
    x, y, z = (TruncatedSeries.variable(fld, XYZ, v, work) for v in XYZ)
    s = inverse_of_quadratic_shift(q, fld, work)
    F = f.substitute([x, y, s]).truncate(work)
    shift_ok = _in_x4y_m((F - g).truncate(N))
    right = _eliminate(F, g, N, work, False)
    decision = None
    if not right.residual_zero and fld == GF16 and fld.pow(q, 4) == q and N >= 7:
        decision = decide_right_equivalence(q, fld, min(N, 8))
    return KatsuraReport(q, N, shift_ok, right, _eliminate(F, g, N, work, True), decision)


@dataclass
class RightEquivalenceDecision:
    """Exact decision of f o phi = g mod m^N (N <= 8) for q in F_4, over ``field``."""

    q: int
    precision: int
    field: GF
    linear_parts: int          # linear maps preserving the degree-5 form
    linear_parts_fix_g: bool   # each is an automorphism of g, so phi may be assumed tangent to id
    unknowns: int              # GF(2)-dimension of the degree-2 and degree-3 corrections
    rank: int
    additive: bool             # sampled check that the correction map is additive mod m^N
    solvable: bool

    def summary(self) -> str:
        verdict = "exists" if self.solvable else "does not exist"
        return (f"an automorphism with f o phi = g mod m^{self.precision} over {self.field} {verdict} "
                f"({self.linear_parts} admissible linear parts, all fixing g; GF(2)-system of rank "
                f"{self.rank} in {self.unknowns} unknowns)")


def _preserves_binary_quintic(fld: GF, a1: int, a2: int, b1: int, b2: int) -> bool:
    """(a1 x + a2 y)^4 (b1 x + b2 y) + (a1 x + a2 y)(b1 x + b2 y)^4 == x^4 y + x y^4."""
    p4 = lambda v: fld.pow(v, 4)
    return (fld.add(fld.mul(p4(a1), b1), fld.mul(a1, p4(b1))) == 0
            and fld.add(fld.mul(p4(a2), b2), fld.mul(a2, p4(b2))) == 0
            and fld.add(fld.mul(p4(a1), b2), fld.mul(a2, p4(b1))) == 1
            and fld.add(fld.mul(p4(a2), b1), fld.mul(a1, p4(b2))) == 1)


def decide_right_equivalence(q: int, fld: GF = GF16, N: int = 8, samples: int = 64) -> RightEquivalenceDecision:
    """Decide whether some automorphism phi of k[[x,y,z]] has F o phi = g mod m^N,
    where F is Katsura's f after the z-shift and k = ``fld``.

    For q in F_4 the partials of g all have order 4 and F - g has order 6, so:
    the linear part of phi_z is z (only z^2 lives in degree 2); the linear
    part L of (phi_x, phi_y) must preserve the degree-5 form (finite search);
    parts of degree >= 4 only act in degree >= 8; and in characteristic 2 no
    product of two corrections lands below degree 8, so mod m^8 the effect of
    the degree-2 and degree-3 parts is additive, i.e. GF(2)-linear.  Every
    admissible L fixes g, so composing with L^-1 reduces to L = id and the
    question becomes one linear system over GF(2).
    """
    if not 6 < N <= 8:
        raise ScenarioError("the exact decision is implemented for 6 < N <= 8")
    if fld.p != 2 or GF16.k % fld.k:
        raise ScenarioError("the exact decision runs over a subfield of GF(16)")
    if GF16.pow(q, 4) != q:
        raise ScenarioError("the exact decision assumes q in F_4 (then q^4 - q = 0)")
    work = 12
    x, y, z = (TruncatedSeries.variable(GF16, XYZ, v, work) for v in XYZ)
    F = katsura_polynomial(q, GF16, work).substitute([x, y, inverse_of_quadratic_shift(q, GF16, work)])
    F, g = F.truncate(N), artin_polynomial(q, GF16, work).truncate(N)
    if fld != GF16:
        emb = fld.embedding_into(GF16)
        back = {emb(a): a for a in range(fld.order)}
        if any(c not in back for h in (F, g) for _, c in h.items()):
            raise ScenarioError(f"the equations for q = {GF16.format(q)} are not defined over {fld}")
        F, g = (TruncatedSeries(fld, XYZ, {e: back[c] for e, c in h.items()}, h.prec) for h in (F, g))
    if not (F - g).truncate(6).is_zero():
        raise ScenarioError("F and g differ below degree 6")
    X = [TruncatedSeries.variable(fld, XYZ, v, N) for v in XYZ]
    els = range(fld.order)
    g6 = g.truncate(6)
    linear = []
    mul, add, p2, p4 = fld.mul, fld.add, (lambda v: fld.pow(v, 2)), (lambda v: fld.pow(v, 4))
    for a1, a2, b1, b2 in itertools.product(els, repeat=4):
        # the x^2 y^2 z term forces det = 1
        if add(mul(a1, b2), mul(a2, b1)) != 1 or not _preserves_binary_quintic(fld, a1, a2, b1, b2):
            continue
        for a3, b3 in itertools.product(els, repeat=2):
            # x^4 z and y^4 z coefficients of the degree-5 part
            if (add(add(p2(mul(a1, b1)), mul(b3, p4(a1))), mul(a3, p4(b1)))
                    or add(add(p2(mul(a2, b2)), mul(b3, p4(a2))), mul(a3, p4(b2)))):
                continue
            L = [X[0].scale(a1) + X[1].scale(a2) + X[2].scale(a3),
                 X[0].scale(b1) + X[1].scale(b2) + X[2].scale(b3), X[2]]
            if (g6.substitute(L).truncate(6) - g6).is_zero():
                linear.append(L)
    fixes_g = all((g.substitute(L).truncate(N) - g).is_zero() for L in linear)
    slots = [(j, e, 1 << b) for j in range(3) for d in (2, 3)
             for e in monomials_of_degree(3, d) for b in range(fld.k)]

    def effect(chosen) -> TruncatedSeries:
        imgs = list(X)
        for j, e, c in chosen:
            imgs[j] = imgs[j] + TruncatedSeries.monomial(fld, XYZ, e, c, N)
        return (F.substitute(imgs).truncate(N) - F)

    effects = [effect([sl]) for sl in slots]
    rng = random.Random(SEED_DECISION)
    additive = all(effect([slots[i], slots[j]]) == effects[i] + effects[j]
                   for i, j in (rng.sample(range(len(slots)), 2) for _ in range(samples)))
    cols = {e: i for i, e in enumerate(e for d in range(N) for e in monomials_of_degree(3, d))}

    def bits(h: TruncatedSeries) -> int:
        v = 0
        for e, c in h.items():
            for b in range(fld.k):
                if (c >> b) & 1:
                    v |= 1 << (cols[e] * fld.k + b)
        return v

    pivots: dict[int, int] = {}
    for r in map(bits, effects):
        while r:
            top = r.bit_length() - 1
            if top not in pivots:
                pivots[top] = r
                break
            r ^= pivots[top]
    t = bits(g - F)
    while t and (t.bit_length() - 1) in pivots:
        t ^= pivots[t.bit_length() - 1]
    return RightEquivalenceDecision(q, N, fld, len(linear), fixes_g, len(slots), len(pivots), additive, t == 0)


# -- the lattice computation for the supersingular, non-superspecial case -----------------

@dataclass
class LatticeWalkthrough:
    assertions: list[Assertion]
    blown_up: lattice.CurveConfig
    contracted: lattice.CurveConfig

    @property
    def ok(self) -> bool:
        return all(a.passed for a in self.assertions)


def supersingular_lattice_walkthrough() -> LatticeWalkthrough:
    out = []
    star = lattice.star_config()
    z = lattice.fundamental_cycle(star)
    out.append(check("lattice.star.fundamental_cycle", (1, 2, 1, 1, 1), z, "PAPER"))
    out.append(check("lattice.star.self_intersection", -1, lattice.self_intersection(star, z), "PAPER"))
    out.append(check("lattice.star.minimally_elliptic", True, lattice.is_minimally_elliptic(star), "PAPER"))
    out.append(check("lattice.star.multiplicity", 2, lattice.elliptic_multiplicity(star), "PAPER"))
    # blow up a point on C2, then a point on the new curve
    t1 = lattice.point_blowup(star, {star.index("C2"): 1}, "C6")
    t2 = lattice.point_blowup(t1, {t1.index("C6"): 1}, "C7")
    out.append(check("lattice.blowup.self_intersections", (-3, -3, -2, -2, -2, -2, -1), t2.self_ints, "PAPER"))
    hat = lattice.subconfig(t2, range(6))
    out.append(check("lattice.blowup.negative_definite", True, lattice.is_negative_definite(hat), "PAPER"))
    out.append(check("lattice.blowup.minimally_elliptic", True, lattice.is_minimally_elliptic(hat), "PAPER"))
    zh = lattice.fundamental_cycle(hat)
    out.append(check("lattice.blowup.self_intersection", -3, lattice.self_intersection(hat, zh), "PAPER"))
    out.append(check("lattice.blowup.multiplicity", 3, lattice.elliptic_multiplicity(hat), "PAPER"))
    out.append(check("lattice.blowup.fundamental_cycle", (1, 2, 1, 1, 1, 1), zh, "DERIVED"))
    m5 = lattice.star_config(leaf_self=(-4, -2, -2, -2))
    res = lattice.numerically_cartier(m5, (2, 0, 0, 0, 0))
    out.append(check("lattice.cartier.solution", (-1, -2, -1, -1, -1), tuple(int(v) if v.denominator == 1 else v for v in res.solution), "PAPER"))
    comp = lattice.numerically_cartier(m5, (1, 0, 0, 0, 0))
    out.append(check("lattice.cartier.companion_integral", False, comp.integral, "DERIVED"))
    return LatticeWalkthrough(out, t2, hat)


# -- the superspecial normalization charts -----------------------------------------------

NORMALIZATION_VARS = ("x", "t", "w")


def normalization_relation(fld: GF, prec: int = 12, vars=NORMALIZATION_VARS) -> TruncatedSeries:
    """w^2 + x^2 t^2 w + x t^4 + x t."""
    x, t, w = (TruncatedSeries.variable(fld, vars, v, prec) for v in vars)
    return (w * w + x * x * t * t * w + x * t ** 4 + x * t).truncate(prec)


@dataclass
class SuperspecialReport:
    assertions: list[Assertion]
    point_lengths: dict[str, object]
    symmetric_new_points: list[str]

    @property
    def ok(self) -> bool:
        return all(a.passed for a in self.assertions)


@dataclass
class StatedLatticeNote:
    """Informational only: the stated superspecial resolution lattice
    (self-intersections, fundamental cycle, Z^2) against a search for an
    adjacency realizing it.  Not an acceptance check."""

    self_ints: tuple[int, ...]
    stated_z: tuple[int, ...]
    stated_z2: int
    realizations: int
    realizations_ignoring_z2: int
    z2_of_those: tuple[int, ...]

    @property
    def consistent(self) -> bool:
        return self.realizations > 0

    def human(self) -> str:
        verdict = "consistent" if self.consistent else "INCONSISTENT"
        return (f"stated lattice self={self.self_ints} Z={self.stated_z} Z^2={self.stated_z2}: {verdict} "
                f"({self.realizations} adjacencies with chi in {{0,1}}, mult <= 2; dropping the Z^2 "
                f"constraint: {self.realizations_ignoring_z2}, all with Z^2 in {self.z2_of_those})")


def stated_superspecial_lattice_note() -> StatedLatticeNote:
    self_ints, z, z2 = (-3, -2, -2, -2, -2), (2, 1, 1, 1, 1), -2
    exact = lattice.constraint_search(5, self_ints, (0, 1), target_z=z, target_z2=z2)
    loose = lattice.constraint_search(5, self_ints, (0, 1), target_z=z)
    z2s = tuple(sorted({lattice.self_intersection(c, z) for c in loose}))
    return StatedLatticeNote(self_ints, z, z2, len(exact), len(loose), z2s)


def superspecial_chart_checks(N: int = 12) -> SuperspecialReport:
    """Both blow-up charts of the superspecial quotient normalize to the same
    surface w^2 + x^2 t^2 w + x t^4 + x t = 0 (t = y/x, w = z/x^2), whose
    singular points are five A_1 points."""
    fld = get_field(2, 2)
    out = []
    nv = NORMALIZATION_VARS
    x, t, w = (TruncatedSeries.variable(fld, nv, v, N) for v in nv)
    Nrel = normalization_relation(fld, N)
    # the x^2-chart of the blow-up of (x^2, y^2, z): generators x, y, Y = y^2/x^2, W = z/x^2
    cv = ("x", "y", "Y", "W")
    X, Y0, YY, W = (TruncatedSeries.variable(fld, cv, v, N) for v in cv)
    r1 = (W * W + X * X * YY * W + X * YY * YY + Y0).truncate(N)
    r2 = (YY * X * X - Y0 * Y0).truncate(N)
    img = [x, (x * t).truncate(N), (t * t).truncate(N), w]
    s1 = r1.substitute(img).truncate(N)
    s2 = r2.substitute(img).truncate(N)
    out.append(check("superspecial.primary_chart.relation", True, (s1 - Nrel).truncate(N).is_zero(), "PAPER"))
    out.append(check("superspecial.primary_chart.second_relation", True, s2.is_zero(), "PAPER"))
    # the x-chart of the blow-up of (x, y, z): generators x, s = y/x, r = z/x
    mv = ("x", "s", "r")
    X2, S, R = (TruncatedSeries.variable(fld, mv, v, N) for v in mv)
    rel = (R * R + X2 ** 3 * S * S * R + X2 ** 3 * S ** 4 + X2 ** 3 * S).truncate(N)
    s3 = rel.substitute([x, t, (x * w).truncate(N)]).truncate(N)
    out.append(check("superspecial.maximal_chart.relation", True, (s3 - (x * x * Nrel)).truncate(N).is_zero(), "PAPER"))
    # singular points of the normalization lie on x = w = 0, t^4 = t
    lengths = _point_lengths(Nrel, "t", fld)
    sing = {k: v for k, v in lengths.items() if v != 0}
    out.append(check("superspecial.main_chart.points", 4, len(sing), "DERIVED"))
    out.append(check("superspecial.main_chart.local_tau", [2, 2, 2, 2], sorted(sing.values()), "DERIVED"))
    out.append(check("superspecial.main_chart.total_length", 8, sum(sing.values()), "DERIVED"))
    # the y^2-chart: generators x, y, X = x^2/y^2, W = z/y^2, normalized by s = x/y
    sv = ("y", "s", "w")
    y1, s1v, w1 = (TruncatedSeries.variable(fld, sv, v, N) for v in sv)
    cy = ("x", "y", "X", "W")
    Xc, Yc, XX, WW = (TruncatedSeries.variable(fld, cy, v, N) for v in cy)
    q1 = (WW * WW + Yc * Yc * XX * WW + Yc * XX * XX + Xc).truncate(N)
    q2 = (XX * Yc * Yc - Xc * Xc).truncate(N)
    simg = [(y1 * s1v).truncate(N), y1, (s1v * s1v).truncate(N), w1]
    Nsym = normalization_relation(fld, N, sv)
    out.append(check("superspecial.symmetric_chart.relation", True,
                     (q1.substitute(simg) - Nsym).truncate(N).is_zero() and q2.substitute(simg).truncate(N).is_zero(),
                     "DERIVED"))
    sym = {k: v for k, v in _point_lengths(Nsym, "s", fld).items() if v != 0}
    # s != 0 is the point t = 1/s of the main chart; only s = 0 is new
    new_points = [k for k in sym if k == "0"]
    all_a1 = all(v == 2 for v in sing.values()) and all(sym[k] == 2 for k in new_points)
    out.append(check("superspecial.normalization.a1_points", 5,
                     len(sing) + len(new_points) if all_a1 else -1, "PAPER"))
    return SuperspecialReport(out, lengths, new_points)


def _point_lengths(rel: TruncatedSeries, var: str, fld: GF) -> dict[str, object]:
    """Tjurina number of rel at (0, c, 0) for every c in fld (0 = smooth)."""
    return {fld.format(c): tjurina_number(rel.translate(var, c)) for c in range(fld.order)}
