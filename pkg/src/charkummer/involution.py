"""Wild involutions of k[[u,v]] given by a parameter pair (a, b).

The involution is u -> u + a, v -> v + b with a, b in k[[x,y]] and
x = u(u+a), y = v(v+b).  Its invariant ring is
k[[x,y,z]] / (z^2 + abz + xb^2 + ya^2) with z = ub + va.

This module builds that equation, checks it against the implicit
coordinates, and answers the questions about the blow-up of (a, b, z)
that only depend on linear parts: where the exceptional line carries
singular points, normality, embedded components, and the first-order
comparison with the Hilbert scheme of two points.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import cached_property
from typing import Sequence

from .localring import (
    INFINITE,
    LocalIdeal,
    Membership,
    artinian_length,
    contains,
    frobenius_power,
    ideals_equal,
)
from .seriescalc.field import GF
from .seriescalc.grammar import parse_polynomial
from .seriescalc.implicit import UV, ImplicitSolution, solve_implicit_pair
from .seriescalc.series import TruncatedSeries
from .seriescalc import upoly

XY = ("x", "y")
XYZ = ("x", "y", "z")
NONNORMAL = "NONNORMAL"


class InvolutionError(ValueError):
    pass


@dataclass(frozen=True)
class InvolutionData:
    """A parameter system (a, b) in k[[x, y]]."""

    a: TruncatedSeries
    b: TruncatedSeries

    def __post_init__(self):
        a, b = self.a, self.b
        if a.vars != XY or b.vars != XY:
            raise InvolutionError("a and b must be series in (x, y)")
        if a.field != b.field:
            raise InvolutionError("a and b must share the coefficient field")
        if a.constant_term() or b.constant_term():
            raise InvolutionError("a and b must vanish at the origin")
        if artinian_length(LocalIdeal([a, b])) == INFINITE:
            raise InvolutionError("(a, b) is not a parameter system")

    @classmethod
    def parse(cls, a: str, b: str, fld: GF, prec: int = 12) -> "InvolutionData":
        return cls(parse_polynomial(a, fld, XY, prec), parse_polynomial(b, fld, XY, prec))

    @property
    def field(self) -> GF:
        return self.a.field

    @property
    def prec(self) -> int:
        return min(self.a.prec, self.b.prec)

    @cached_property
    def linear_parts(self) -> tuple[int, int, int, int]:
        """(a_x, a_y, b_x, b_y)."""
        return (self.a.linear_coefficient("x"), self.a.linear_coefficient("y"),
                self.b.linear_coefficient("x"), self.b.linear_coefficient("y"))

    def center_length(self):
        return artinian_length(LocalIdeal([self.a, self.b]))

    def swapped(self) -> "InvolutionData":
        """The same involution with the roles of (u, x, a) and (v, y, b) exchanged."""
        return InvolutionData(_swap_xy(self.b), _swap_xy(self.a))

    def over(self, big: GF) -> "InvolutionData":
        return InvolutionData(self.a.over(big), self.b.over(big))

    def __str__(self) -> str:
        return f"(a, b) = ({self.a}, {self.b}) over {self.field}"


def _swap_xy(f: TruncatedSeries) -> TruncatedSeries:
    return TruncatedSeries(f.field, XY, {(e[1], e[0]): c for e, c in f.items()}, f.prec)


def _xyz(f: TruncatedSeries, prec: int) -> TruncatedSeries:
    return f.with_vars(XYZ).with_precision(prec)


def invariant_equation(d: InvolutionData, prec: int | None = None) -> TruncatedSeries:
    """z^2 + a b z + x b^2 + y a^2 in k[[x, y, z]]."""
    prec = prec or d.prec
    fld = d.field
    x, y, z = (TruncatedSeries.variable(fld, XYZ, v, prec) for v in XYZ)
    a, b = _xyz(d.a, prec), _xyz(d.b, prec)
    return (z * z + a * b * z + x * b * b + y * a * a).truncate(prec)


# -- checks against the implicit coordinates ---------------------------------

@dataclass
class IdentityReport:
    data: InvolutionData
    precision: int
    equation_residual: TruncatedSeries
    invariance_residuals: tuple[TruncatedSeries, TruncatedSeries, TruncatedSeries]
    invariance_precision: int

    @property
    def ok(self) -> bool:
        return self.equation_residual.is_zero() and all(r.is_zero() for r in self.invariance_residuals)


def _implicit(d: InvolutionData, N: int) -> ImplicitSolution:
    a, b = d.a, d.b
    if a.prec * 2 < N:
        a, b = a.with_precision(N), b.with_precision(N)
    return solve_implicit_pair(a, b, N, check=False)


def verify_invariant_identity(d: InvolutionData, N: int = 12) -> IdentityReport:
    sol = _implicit(d, N)
    f = invariant_equation(d, max(N, d.prec))
    res = f.substitute([sol.x, sol.y, sol.z]).truncate(N)
    # the involution on k[[u,v]], with a, b pulled back along the implicit map
    A = d.a.substitute([sol.x, sol.y])
    B = d.b.substitute([sol.x, sol.y])
    u = TruncatedSeries.variable(d.field, UV, "u", N)
    v = TruncatedSeries.variable(d.field, UV, "v", N)
    sigma = [u + A, v + B]
    inv = []
    for g in (sol.x, sol.y, sol.z):
        moved = g.substitute(sigma)
        inv.append((moved - g).truncate(moved.prec))
    inv_prec = min(r.prec for r in inv)
    return IdentityReport(d, N, res, tuple(inv), inv_prec)


@dataclass
class FiberReport:
    fiber_equals_frobenius_square: bool
    fixed_ideal: LocalIdeal
    fixed_length: object


def fiber_and_fixed_ideals(d: InvolutionData, N: int = 12) -> FiberReport:
    sol = _implicit(d, N)
    pulled = LocalIdeal([sol.x, sol.y, sol.z])
    square = frobenius_power(d.field, UV, 2, N)
    same = ideals_equal(pulled, square)
    z = TruncatedSeries.variable(d.field, XYZ, "z", d.prec)
    fixed = LocalIdeal([_xyz(d.a, d.prec), _xyz(d.b, d.prec), z])
    return FiberReport(same, fixed, artinian_length(fixed))


# -- regularity polynomials ----------------------------------------------------

def chart_regularity_polynomial(d: InvolutionData, chart: str) -> tuple[int, int, int, int]:
    """Coefficients (low to high) of the cubic whose roots are the points of
    the exceptional line with embedding dimension three."""
    ax, ay, bx, by = d.linear_parts
    if chart == "a":
        return (bx, ax, by, ay)
    if chart == "b":
        return (ay, by, ax, bx)
    raise InvolutionError(f"unknown chart {chart!r}")


def format_regularity_polynomial(d: InvolutionData, chart: str) -> str:
    return upoly.format_upoly(d.field, chart_regularity_polynomial(d, chart), "lambda" if chart == "a" else "mu")


@dataclass(frozen=True)
class ChartPoint:
    """A point of the exceptional line: slope ``value`` on chart ``chart``.

    ``value`` is a raw element of ``field`` (the base field, or an extension
    when the point is not rational).
    """

    chart: str
    value: int
    field: GF


def is_normal(d: InvolutionData) -> bool:
    return any(d.linear_parts)


def singular_chart_points(d: InvolutionData) -> tuple[list[ChartPoint], int]:
    """Rational singular points and the number of non-rational ones.

    Points with slope lambda != 0 lie on both charts (mu = 1/lambda); they
    are listed once, on the b-chart.  The a-chart keeps only lambda = 0.
    """
    if not is_normal(d):
        raise InvolutionError("the blow-up is not normal along the whole exceptional line")
    fld = d.field
    pa = chart_regularity_polynomial(d, "a")
    pb = chart_regularity_polynomial(d, "b")
    points = []
    if pa[0] == 0:
        points.append(ChartPoint("a", 0, fld))
    for mu in upoly.roots_in(fld, pb):
        points.append(ChartPoint("b", mu, fld))
    total = upoly.distinct_roots_in_closure(fld, pa) + (1 if pa[3] == 0 else 0)
    return points, total - len(points)


def count_singular_chart_points(d: InvolutionData, degree_bound: int = 6):
    """Number of points of the exceptional line where the blow-up is
    singular, or NONNORMAL when every linear coefficient of a, b vanishes."""
    if not is_normal(d):
        return NONNORMAL
    fld = d.field
    pa = chart_regularity_polynomial(d, "a")
    # distinct roots of the a-chart cubic, plus the point at infinity when
    # the cubic drops degree (mu = 0 on the b-chart)
    return upoly.distinct_roots_in_closure(fld, pa) + (1 if pa[3] == 0 else 0)


# -- embedded components ------------------------------------------------------

@dataclass
class EmbeddedReport:
    embedded: bool
    chain: dict[str, bool] = dc_field(default_factory=dict)

    @property
    def witness_ok(self) -> bool:
        return all(self.chain.values())


def has_embedded_component(d: InvolutionData, N: int = 10) -> EmbeddedReport:
    if is_normal(d):
        return EmbeddedReport(False)
    fld = d.field
    sol = _implicit(d, N)
    u = TruncatedSeries.variable(fld, UV, "u", N)
    v = TruncatedSeries.variable(fld, UV, "v", N)
    frob = frobenius_power(fld, UV, 2, N)
    m2 = LocalIdeal([u * u, u * v, v * v])
    I = LocalIdeal([u * u, v])
    I2 = LocalIdeal([u ** 4, u * u * v, v * v])
    A = d.a.substitute([sol.x, sol.y])
    B = d.b.substitute([sol.x, sol.y])
    chain = {
        "(x,y) in (u^2,v^2)": all(contains(frob, g) is Membership.EXACT for g in (sol.x, sol.y)),
        "(u^2,v^2) in (u,v)^2": all(contains(m2, g) is Membership.EXACT for g in frob.generators),
        "(u,v)^2 in I": all(contains(I, g) is Membership.EXACT for g in m2.generators),
        "(a,b) in I^2": all(contains(I2, g) is Membership.EXACT for g in (A, B)),
    }
    return EmbeddedReport(True, chain)


# -- first-order comparison with Hilb^2 ----------------------------------------
#
# At the a-chart point with slope lambda the fiber of the blow-up is the
# length-two ideal I = (u^2, lambda*u + v).  A tangent vector psi of the chart
# (values on x, y, B = b/a, W = z/a) deforms the generators
#     x(u,v) - psi_x e,  y(u,v) - psi_y e,
#     lambda*u + v + e(psi_B u - psi_W),   lambda*A - B + e psi_B A
# (A, B the pullbacks of a, b).  We read off phi in Hom(I/I^2, O/I) in the
# coordinates u, w = lambda*u + v where O/I^2 has basis 1, u, u^2, u^3, w, uw.

_QB = {(0, 0): 0, (1, 0): 1, (2, 0): 2, (3, 0): 3, (0, 1): 4, (1, 1): 5}


@dataclass(frozen=True)
class TangentPoint:
    chart: str
    slope: int  # raw element of the data's field

    def ideal(self, fld: GF, N: int = 8) -> LocalIdeal:
        u = TruncatedSeries.variable(fld, UV, "u", N)
        v = TruncatedSeries.variable(fld, UV, "v", N)
        if self.chart == "a":
            return LocalIdeal([u * u, u.scale(self.slope) + v])
        return LocalIdeal([v * v, v.scale(self.slope) + u])


def _mod_I2(g: TruncatedSeries, lam: int, fld: GF) -> list[int]:
    """Coordinates of g(u, v) in O/I^2 after v -> w - lambda*u."""
    uw = ("u", "w")
    u = TruncatedSeries.variable(fld, uw, "u", g.prec)
    w = TruncatedSeries.variable(fld, uw, "w", g.prec)
    h = g.substitute([u, w - u.scale(lam)])
    out = [0] * 6
    for e, c in h.items():
        if e in _QB:
            out[_QB[e]] = fld.add(out[_QB[e]], c)
    return out


def _pulled_back(d: InvolutionData, N: int):
    sol = _implicit(d, N)
    return sol, d.a.substitute([sol.x, sol.y]), d.b.substitute([sol.x, sol.y])


def cotangent_violation(d: InvolutionData, lam: int, psi: Sequence[int]) -> list[str]:
    fld = d.field
    ax, ay, bx, by = d.linear_parts
    px, py, pB, pW = psi
    errs = []
    # linearisation of W^2 + aBW + xB^2 + y at (0, 0, lambda, 0)
    if fld.add(fld.mul(fld.mul(lam, lam), px), py):
        errs.append("lambda^2 psi_x + psi_y != 0")
    # linearisation of B a - b
    lin = fld.add(fld.mul(fld.sub(fld.mul(lam, ax), bx), px), fld.mul(fld.sub(fld.mul(lam, ay), by), py))
    if lin:
        errs.append("linear part of lambda*a - b does not vanish on psi")
    return errs


def _solve(fld: GF, rows: list[list[int]], rhs: list[int], nvars: int):
    """Unique solution of a linear system over fld, or raise."""
    m = [r[:] + [b] for r, b in zip(rows, rhs)]
    piv_cols = []
    r = 0
    for c in range(nvars):
        p = next((i for i in range(r, len(m)) if m[i][c]), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = fld.inv(m[r][c])
        m[r] = [fld.mul(inv, x) for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [fld.sub(x, fld.mul(f, y)) for x, y in zip(m[i], m[r])]
        piv_cols.append(c)
        r += 1
    if any(row[-1] for row in m[r:]):
        raise InvolutionError("inconsistent deformation: psi is not a tangent vector")
    if len(piv_cols) < nvars:
        raise InvolutionError("deformation does not determine phi uniquely")
    sol = [0] * nvars
    for i, c in enumerate(piv_cols):
        sol[c] = m[i][-1]
    return sol


def rank(fld: GF, rows: list[list[int]]) -> int:
    m = [r[:] for r in rows]
    rk = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        p = next((i for i in range(rk, len(m)) if m[i][c]), None)
        if p is None:
            continue
        m[rk], m[p] = m[p], m[rk]
        inv = fld.inv(m[rk][c])
        m[rk] = [fld.mul(inv, x) for x in m[rk]]
        for i in range(len(m)):
            if i != rk and m[i][c]:
                f = m[i][c]
                m[i] = [fld.sub(x, fld.mul(f, y)) for x, y in zip(m[i], m[rk])]
        rk += 1
    return rk


@dataclass(frozen=True)
class TangentImage:
    """phi(f1), phi(f2) in O/I = span(1, u); each a pair (c0, c1) of
    coefficients of e*1 and e*u."""

    phi1: tuple[int, int]
    phi2: tuple[int, int]

    def vector(self) -> list[int]:
        return [*self.phi1, *self.phi2]

    def format(self, fld: GF) -> str:
        def one(c):
            c0, c1 = c
            if not c0 and not c1:
                return "0"
            parts = []
            if c0:
                parts.append("e" if c0 == 1 else f"{fld.format(c0)}*e")
            if c1:
                parts.append("e*u" if c1 == 1 else f"{fld.format(c1)}*e*u")
            return " + ".join(parts)
        return f"({one(self.phi1)}, {one(self.phi2)})"


def tangent_image(d: InvolutionData, pt: TangentPoint, psi: Sequence[int], N: int = 8) -> TangentImage:
    if pt.chart == "b":
        return tangent_image(d.swapped(), TangentPoint("a", pt.slope), psi, N)
    fld = d.field
    lam = pt.slope
    errs = cotangent_violation(d, lam, psi)
    if errs:
        raise InvolutionError("; ".join(errs))
    px, py, pB, pW = psi
    sol, A, B = _pulled_back(d, N)
    u = TruncatedSeries.variable(fld, UV, "u", N)
    v = TruncatedSeries.variable(fld, UV, "v", N)
    # (epsilon-free part, epsilon part) of the four generators
    gens = [
        (sol.x, TruncatedSeries.constant(fld, UV, fld.neg(px), N)),
        (sol.y, TruncatedSeries.constant(fld, UV, fld.neg(py), N)),
        (u.scale(lam) + v, u.scale(pB) - TruncatedSeries.constant(fld, UV, pW, N)),
        (A.scale(lam) - B, A.scale(pB)),
    ]
    rows, rhs = [], []
    for h, g in gens:
        hc = _mod_I2(h, lam, fld)
        if hc[0] or hc[1]:
            raise InvolutionError("generator does not lie in I")
        c1 = (hc[2], hc[3])   # coefficient of u^2: c1[0] + c1[1] u
        c2 = (hc[4], hc[5])   # coefficient of w
        gc = _mod_I2(g, lam, fld)
        g0, g1 = gc[0], gc[1]
        # c1*phi1 + c2*phi2 = g in k[u]/u^2, unknowns (p0, p1, r0, r1)
        rows.append([c1[0], 0, c2[0], 0])
        rhs.append(g0)
        rows.append([c1[1], c1[0], c2[1], c2[0]])
        rhs.append(g1)
    p0, p1, r0, r1 = _solve(fld, rows, rhs, 4)
    return TangentImage((p0, p1), (r0, r1))


TABLE_PSI = {
    "W": (0, 0, 0, 1),
    "B": (0, 0, 1, 0),
}


def table_psi(lam: int, fld: GF) -> list[tuple[int, int, int, int]]:
    """The three cotangent test vectors (0,0,0,1), (0,0,1,0), (1,lambda^2,0,0)."""
    return [(0, 0, 0, 1), (0, 0, 1, 0), (1, fld.mul(lam, lam), 0, 0)]


def chart_tangent_space(d: InvolutionData, lam: int) -> list[tuple[int, int, int, int]]:
    """Basis of the Zariski tangent space of the a-chart at slope lambda."""
    fld = d.field
    basis = [(0, 0, 0, 1), (0, 0, 1, 0)]
    P = upoly.evaluate(fld, chart_regularity_polynomial(d, "a"), lam)
    if P == 0:
        basis.append((1, fld.mul(lam, lam), 0, 0))
    return basis


def hom_dimension_with_conditions(d: InvolutionData, pt: TangentPoint, N: int = 8) -> int:
    """dim of {phi in Hom(I/I^2, O/I) : phi kills (a, b)O}.

    A, B and their multiples by u, v give linear conditions on phi; when
    (a, b) lies in I^2 the conditions are empty and the dimension is 4.
    """
    if pt.chart == "b":
        return hom_dimension_with_conditions(d.swapped(), TangentPoint("a", pt.slope), N)
    fld = d.field
    lam = pt.slope
    _, A, B = _pulled_back(d, N)
    u = TruncatedSeries.variable(fld, UV, "u", N)
    v = TruncatedSeries.variable(fld, UV, "v", N)
    conds = []
    for h in (A, B, A * u, B * u, A * v, B * v):
        hc = _mod_I2(h, lam, fld)
        c1, c2 = (hc[2], hc[3]), (hc[4], hc[5])
        conds.append([c1[0], 0, c2[0], 0])
        conds.append([c1[1], c1[0], c2[1], c2[0]])
    return 4 - rank(fld, conds)


@dataclass
class TangentDimensionReport:
    dimension: int
    chart_tangent_dim: int
    image_rank: int
    hom_dimension: int

    @property
    def consistent(self) -> bool:
        injective = self.image_rank == self.chart_tangent_dim
        if self.dimension == 4:
            return injective and self.hom_dimension == 4
        return injective


def gh_tangent_dimension(d: InvolutionData, pt: TangentPoint, N: int = 8) -> TangentDimensionReport:
    """Embedding dimension of the G-Hilbert scheme at the point: 3, or 4
    when the blow-up has an embedded component."""
    dd, p = (d.swapped(), TangentPoint("a", pt.slope)) if pt.chart == "b" else (d, pt)
    basis = chart_tangent_space(dd, p.slope)
    images = [tangent_image(dd, p, psi, N).vector() for psi in basis]
    dim = 3 + (1 if has_embedded_component(d).embedded else 0)
    return TangentDimensionReport(dim, len(basis), rank(d.field, images), hom_dimension_with_conditions(dd, p, N))
