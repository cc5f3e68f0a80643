"""Blow-up of the ideal (a, b, z) in the invariant ring, chart by chart.

With B = b/a and W = z/a the a-chart is cut out of k[[x,y]][B, W] by

    W^2 + a B W + x B^2 + y = 0,    B a - b = 0,

the b-chart is the mirror image (A = a/b, W = z/b), and the z-chart
(A = a/z, B = b/z) has the relation 1 + A B z + x B^2 + y A^2, which has no
points over z = 0.  The presentations are checked rather than derived:
:func:`chart_consistency_check` confirms that substituting z = a W into the
invariant equation gives a^2 times the chart relation modulo B a - b.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .involution import (
    InvolutionData,
    chart_regularity_polynomial,
    invariant_equation,
    is_normal,
)
from .localring import (
    INFINITE,
    LocalIdeal,
    artinian_length,
    contains,
    nonsmoothness_ideal,
)
from .seriescalc.field import GF, field as get_field
from .seriescalc.series import TruncatedSeries
from .seriescalc import upoly

A_CHART = ("x", "y", "b_a", "z_a")
B_CHART = ("x", "y", "a_b", "z_b")
Z_CHART = ("x", "y", "z", "a_z", "b_z")


class BlowupError(ValueError):
    pass


@dataclass
class ChartPresentation:
    chart: str
    vars: tuple[str, ...]
    relations: list[TruncatedSeries]
    note: str = ""

    def __str__(self) -> str:
        rels = ", ".join(str(r) for r in self.relations)
        return f"{self.chart}-chart in ({', '.join(self.vars)}): {rels}"


@dataclass
class BlowupResult:
    data: InvolutionData
    charts: dict[str, ChartPresentation]
    center_length: int

    @property
    def point_blowup_equivalent(self) -> bool:
        return self.center_length == 1


def _in(f: TruncatedSeries, vars: Sequence[str], prec: int) -> TruncatedSeries:
    return f.with_vars(vars).with_precision(prec)


def _chart_relations(d: InvolutionData, chart: str, prec: int) -> list[TruncatedSeries]:
    fld = d.field
    if chart == "a":
        x, y, B, W = (TruncatedSeries.variable(fld, A_CHART, v, prec) for v in A_CHART)
        a, b = _in(d.a, A_CHART, prec), _in(d.b, A_CHART, prec)
        return [(W * W + a * B * W + x * B * B + y).truncate(prec), (B * a - b).truncate(prec)]
    if chart == "b":
        x, y, A, W = (TruncatedSeries.variable(fld, B_CHART, v, prec) for v in B_CHART)
        a, b = _in(d.a, B_CHART, prec), _in(d.b, B_CHART, prec)
        return [(W * W + b * A * W + x + y * A * A).truncate(prec), (A * b - a).truncate(prec)]
    if chart == "z":
        x, y, z, A, B = (TruncatedSeries.variable(fld, Z_CHART, v, prec) for v in Z_CHART)
        a, b = _in(d.a, Z_CHART, prec), _in(d.b, Z_CHART, prec)
        one = TruncatedSeries.one(fld, Z_CHART, prec)
        return [(one + A * B * z + x * B * B + y * A * A).truncate(prec),
                (A * z - a).truncate(prec), (B * z - b).truncate(prec)]
    raise BlowupError(f"unknown chart {chart!r}")


def blowup_invariant(d: InvolutionData, prec: int | None = None) -> BlowupResult:
    prec = prec or d.prec
    charts = {
        "a": ChartPresentation("a", A_CHART, _chart_relations(d, "a", prec), "B = b/a, W = z/a"),
        "b": ChartPresentation("b", B_CHART, _chart_relations(d, "b", prec), "A = a/b, W = z/b"),
        "z": ChartPresentation("z", Z_CHART, _chart_relations(d, "z", prec), "A = a/z, B = b/z"),
    }
    length = d.center_length()
    if length == INFINITE:
        raise BlowupError("center is not of finite length")
    return BlowupResult(d, charts, int(length))


# -- consistency of the presentations ---------------------------------------------

@dataclass
class ConsistencyReport:
    chart: str
    residual: TruncatedSeries
    precision: int

    @property
    def ok(self) -> bool:
        return self.residual.is_zero()


def chart_consistency_check(d: InvolutionData, chart: str, prec: int | None = None) -> ConsistencyReport:
    """Check f(x, y, p W) = p^2 * rel modulo (ratio * p - q), p = a or b.

    D = f(x, y, pW) - p^2 rel is a polynomial in the ratio variable R with
    coefficients in k[[x, y, W]]; modulo R p = q it vanishes iff
    sum_j c_j p^(m-j) q^j = 0, as p is a nonzerodivisor on the chart.
    """
    if chart not in ("a", "b"):
        raise BlowupError("consistency is checked on the a- and b-charts")
    prec = prec or d.prec
    vars = A_CHART if chart == "a" else B_CHART
    rel = _chart_relations(d, chart, prec)[0]
    fld = d.field
    x, y, R, W = (TruncatedSeries.variable(fld, vars, v, prec) for v in vars)
    a, b = _in(d.a, vars, prec), _in(d.b, vars, prec)
    p, q = (a, b) if chart == "a" else (b, a)
    f = invariant_equation(d, prec)
    fz = _subst_z(f, vars, p * W, prec)
    D = (fz - p * p * rel).truncate(prec)
    # split D by powers of the ratio variable
    ri = vars.index(vars[2])
    by_power: dict[int, dict[tuple, int]] = {}
    for e, c in D.items():
        j = e[ri]
        rest = tuple(0 if i == ri else v for i, v in enumerate(e))
        by_power.setdefault(j, {})[rest] = c
    m = max(by_power, default=0)
    total = TruncatedSeries.zero(fld, vars, prec)
    for j, terms in by_power.items():
        cj = TruncatedSeries(fld, vars, terms, prec)
        total = total + cj * (p ** (m - j)) * (q ** j)
    return ConsistencyReport(chart, total.truncate(prec), prec)


def _subst_z(f: TruncatedSeries, vars, zimage: TruncatedSeries, prec: int) -> TruncatedSeries:
    """f(x, y, zimage) for f in k[[x, y, z]], result in ``vars``."""
    fld = f.field
    x = TruncatedSeries.variable(fld, vars, "x", prec)
    y = TruncatedSeries.variable(fld, vars, "y", prec)
    return f.substitute([x, y, zimage.truncate(prec)])


def z_chart_exceptional_empty(d: InvolutionData, prec: int | None = None) -> bool:
    """Adding z = 0 to the z-chart ideal gives the unit ideal."""
    prec = prec or d.prec
    rels = _chart_relations(d, "z", prec)
    z = TruncatedSeries.variable(d.field, Z_CHART, "z", prec)
    I = LocalIdeal(rels + [z])
    one = TruncatedSeries.one(d.field, Z_CHART, prec)
    return bool(contains(I, one))


# -- singular points on the charts ---------------------------------------------------

@dataclass
class ChartPointSingularity:
    chart: str
    slope: int
    field: GF
    length: object  # int, INFINITE, or None when the point is out of reach


@dataclass
class ChartSingularities:
    chart: str
    total_length: object
    points: list[ChartPointSingularity]
    roots_match: bool


def local_chart_relations(d: InvolutionData, chart: str, slope: int, prec: int | None = None) -> list[TruncatedSeries]:
    """The two chart relations with the point of slope ``slope`` moved to
    the origin (B -> B + slope on the a-chart, A -> A + slope on the b-chart)."""
    prec = prec or d.prec
    rels = _chart_relations(d, chart, prec)[:2]
    ratio = A_CHART[2] if chart == "a" else B_CHART[2]
    return [r.translate(ratio, slope) for r in rels]


def local_nonsmoothness(d: InvolutionData, chart: str, slope: int, prec: int | None = None):
    return artinian_length(nonsmoothness_ideal(local_chart_relations(d, chart, slope, prec)))


def _extension_roots(d: InvolutionData, poly) -> tuple[GF | None, list[int]]:
    """Roots of ``poly`` in the smallest extension splitting it, if that
    extension is in the modulus table; ``(None, [])`` otherwise."""
    fld = d.field
    c = upoly.strip(poly)
    while len(c) > 1:
        rs = upoly.roots_in(fld, c)
        if not rs:
            break
        c = upoly.divide_linear(fld, c, rs[0])
    r = len(c) - 1
    if r <= 0:
        return fld, upoly.roots_in(fld, poly)
    if fld.p != 2 or fld.k * r > 8:
        return None, []
    big = get_field(2, fld.k * r)
    emb = fld.embedding_into(big)
    return big, upoly.roots_in(big, tuple(emb(x) for x in poly))


def chart_singularities(d: InvolutionData, chart: str, prec: int | None = None) -> ChartSingularities:
    """Local nonsmoothness lengths at the singular points of one chart.

    The a-chart reports only the point lambda = 0; every other point of the
    exceptional line is reported on the b-chart (all roots mu of its
    regularity polynomial).  Rational slopes that are not roots are checked
    to be smooth.
    """
    if chart not in ("a", "b"):
        raise BlowupError("singularities are computed on the a- and b-charts")
    if not is_normal(d):
        raise BlowupError("the blow-up is not normal; singular locus is the whole exceptional line")
    fld = d.field
    poly = chart_regularity_polynomial(d, chart)
    points = []
    if chart == "a":
        ln = local_nonsmoothness(d, "a", 0, prec)
        if ln != 0:
            points.append(ChartPointSingularity("a", 0, fld, ln))
        roots_match = (ln != 0) == (poly[0] == 0)
    else:
        base_roots = set(upoly.roots_in(fld, poly))
        roots_match = True
        for s in range(fld.order):
            ln = local_nonsmoothness(d, "b", s, prec)
            if (ln != 0) != (s in base_roots):
                roots_match = False
            if ln != 0:
                points.append(ChartPointSingularity("b", s, fld, ln))
        big, ext_roots = _extension_roots(d, poly)
        if big is None:
            missing = upoly.distinct_roots_in_closure(fld, poly) - len(base_roots)
            points.extend(ChartPointSingularity("b", -1, fld, None) for _ in range(missing))
        elif big != fld:
            dbig = d.over(big)
            sub = {fld.embedding_into(big)(s) for s in range(fld.order)}
            for s in ext_roots:
                if s not in sub:
                    ln = local_nonsmoothness(dbig, "b", s, prec)
                    roots_match = roots_match and ln != 0
                    points.append(ChartPointSingularity("b", s, big, ln))
    lengths = [p.length for p in points]
    if any(ln is None for ln in lengths):
        total = None
    elif any(ln == INFINITE for ln in lengths):
        total = INFINITE
    else:
        total = sum(lengths)
    return ChartSingularities(chart, total, points, roots_match)


# -- the exceptional fiber ---------------------------------------------------------------

@dataclass
class FiberData:
    fiber_relations: dict[str, list[str]]
    transition_ok: bool
    transition_degree: int
    multiplicity: int


def exceptional_fiber_data(d: InvolutionData, prec: int | None = None) -> FiberData:
    prec = prec or d.prec
    fld = d.field
    out = {}
    for chart, vars in (("a", A_CHART), ("b", B_CHART)):
        rels = _chart_relations(d, chart, prec)[:2]
        out[chart] = [str(_kill_xy(r, vars, prec)) for r in rels]
    # overlap: W_a = B W_b turns the a-relation into B^2 (W^2 + a W + x) + y,
    # which is B^2 times the b-relation with A = 1/B and b A = a
    x, y, B, W = (TruncatedSeries.variable(fld, A_CHART, v, prec) for v in A_CHART)
    a = _in(d.a, A_CHART, prec)
    rel_a = _chart_relations(d, "a", prec)[0]
    moved = rel_a.substitute([x, y, B, (B * W).truncate(prec)])
    expected = (B * B * (W * W + a * W + x) + y).truncate(prec)
    ok = (moved - expected).truncate(min(moved.prec, expected.prec)).is_zero()
    fiber_is_double = all(rs == ["z_a^2", "0"] or rs == ["z_b^2", "0"] for rs in out.values())
    return FiberData(out, ok, 1, 2 if fiber_is_double else 0)


def _kill_xy(r: TruncatedSeries, vars, prec: int) -> TruncatedSeries:
    """r with x = y = 0, as a series in the two chart coordinates."""
    keep = {}
    for e, c in r.items():
        if e[0] == 0 and e[1] == 0:
            keep[e[2:]] = c
    return TruncatedSeries(r.field, vars[2:], keep, prec)


# -- blow-ups of the origin -----------------------------------------------------------------

@dataclass
class PointBlowup:
    strict_transform: TruncatedSeries
    multiplicity: int
    chart_variable: str


def point_blowup_chart(f: TruncatedSeries, var: str) -> PointBlowup:
    """Chart of the blow-up of the origin where ``var`` generates the
    exceptional divisor: w -> var * w for every other variable w.

    The chart coordinates keep their names (so ``y`` now stands for y/var).
    The result is known to degree < prec - m.
    """
    if f.is_zero():
        raise BlowupError("cannot blow up the zero series")
    if f.constant_term():
        raise BlowupError("the series does not pass through the origin")
    i = f.vars.index(var) if var in f.vars else None
    if i is None:
        raise BlowupError(f"unknown variable {var!r}")
    m = f.order()
    terms = {}
    for e, c in f.items():
        deg = sum(e)
        ne = list(e)
        ne[i] = deg - m
        terms[tuple(ne)] = c
    return PointBlowup(TruncatedSeries(f.field, f.vars, terms, max(f.prec - m, 0)), m, var)


def cartier_multiple_check(d: InvolutionData) -> tuple[int, str]:
    l = int(d.center_length())
    return 2 * l, f"center length l = {l}; Cartier divisors on the exceptional fiber are multiples of 2l = {2 * l}"
