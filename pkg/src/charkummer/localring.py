"""Ideals of truncated local rings k[[v1..vn]] / m^N.

Everything here is linear algebra in the finite-dimensional space of
polynomials of degree < d.  An ideal I is replaced by the span of all
products g*m (g a generator, m a monomial) cut off at degree d; Gaussian
elimination then gives a basis of k[[v]] / (I + m^d).

Columns are monomials ordered by degree, and inside one degree by
decreasing exponent vector in the ambient variable order; a row's pivot is
its smallest column.  The standard monomials are the non-pivot columns.

If no standard monomial has degree e-1 (e <= d) then m^(e-1) lies in
I + m^e, so by Nakayama m^(e-1) lies in I and the count of standard
monomials of degree < e-1 is the length of k[[v]]/I.  This is the
certificate used by :func:`artinian_length`.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from typing import Sequence

from .seriescalc.field import GF
from .seriescalc.series import TruncatedSeries, jacobian_minors, pack

INFINITE = math.inf


class LocalRingError(ValueError):
    pass


class Membership(enum.Enum):
    EXACT = "yes"
    MOD_PRECISION = "yes-mod-precision"
    NO = "no"

    def __bool__(self) -> bool:
        return self is not Membership.NO


# -- monomial bookkeeping ----------------------------------------------------

@lru_cache(maxsize=None)
def monomials_of_degree(n: int, deg: int) -> tuple[tuple[int, ...], ...]:
    """Exponent vectors of total degree ``deg``, lexicographically decreasing."""
    if n == 0:
        return ((),) if deg == 0 else ()
    out = []
    for first in range(deg, -1, -1):
        for rest in monomials_of_degree(n - 1, deg - first):
            out.append((first,) + rest)
    return tuple(out)


@lru_cache(maxsize=None)
def column_order(n: int, d: int) -> tuple[tuple[tuple[int, ...], ...], dict[int, int], tuple[int, ...]]:
    """Monomials of degree < d in column order, packed-key -> column, and
    the first column index of each degree (plus a sentinel)."""
    mons = []
    starts = []
    for deg in range(d):
        starts.append(len(mons))
        mons.extend(monomials_of_degree(n, deg))
    starts.append(len(mons))
    index = {pack(m): i for i, m in enumerate(mons)}
    return tuple(mons), index, tuple(starts)


# -- row arithmetic ----------------------------------------------------------
#
# Two backends.  In characteristic 2 a row over GF(2^k) is stored as k
# bit-planes (plane j has bit c set when bit j of the coefficient in column c
# is set), which turns row operations into a handful of big-int XORs.  Odd
# characteristic uses plain dicts.

class _Char2Rows:
    def __init__(self, fld: GF):
        self.f = fld
        self.k = fld.k
        # mul_bits[c][i] = set of j with bit i of c*alpha^j set
        self._scale_cache: dict[int, list[list[int]]] = {}

    def from_items(self, items) -> list[int]:
        planes = [0] * self.k
        for col, c in items:
            j = 0
            while c:
                if c & 1:
                    planes[j] ^= 1 << col
                c >>= 1
                j += 1
        return planes

    @staticmethod
    def support(row) -> int:
        s = 0
        for p in row:
            s |= p
        return s

    def coef(self, row, col: int) -> int:
        c = 0
        for j, p in enumerate(row):
            if (p >> col) & 1:
                c |= 1 << j
        return c

    def _scale_matrix(self, c: int):
        m = self._scale_cache.get(c)
        if m is None:
            imgs = [self.f.mul(c, 1 << j) for j in range(self.k)]
            m = [[j for j in range(self.k) if (imgs[j] >> i) & 1] for i in range(self.k)]
            self._scale_cache[c] = m
        return m

    def scale(self, row, c: int):
        if c == 1:
            return row
        out = []
        for sources in self._scale_matrix(c):
            acc = 0
            for j in sources:
                acc ^= row[j]
            out.append(acc)
        return out

    def axpy(self, row, c: int, prow):
        """row - c * prow."""
        if self.k == 1:
            return [row[0] ^ prow[0]]
        sp = self.scale(prow, c)
        return [a ^ b for a, b in zip(row, sp)]

    def items(self, row):
        s = self.support(row)
        while s:
            low = s & -s
            col = low.bit_length() - 1
            yield col, self.coef(row, col)
            s ^= low


class _DictRows:
    def __init__(self, fld: GF):
        self.f = fld

    def from_items(self, items) -> dict:
        out: dict[int, int] = {}
        for col, c in items:
            v = self.f.add(out.get(col, 0), c)
            if v:
                out[col] = v
            else:
                out.pop(col, None)
        return out

    @staticmethod
    def support(row) -> int:
        s = 0
        for col in row:
            s |= 1 << col
        return s

    @staticmethod
    def coef(row, col: int) -> int:
        return row.get(col, 0)

    def scale(self, row, c: int):
        if c == 1:
            return row
        return {k: self.f.mul(c, v) for k, v in row.items()}

    def axpy(self, row, c: int, prow):
        out = dict(row)
        for k, v in prow.items():
            w = self.f.sub(out.get(k, 0), self.f.mul(c, v))
            if w:
                out[k] = w
            else:
                out.pop(k, None)
        return out

    @staticmethod
    def items(row):
        return sorted(row.items())


def _backend(fld: GF):
    return _Char2Rows(fld) if fld.p == 2 else _DictRows(fld)


class Echelon:
    """Incremental row echelon form keyed by lowest main column.

    Columns >= ``ncols`` are bookkeeping columns (used to record which
    generator products a row came from) and never become pivots.
    """

    def __init__(self, fld: GF, ncols: int):
        self.field = fld
        self.ncols = ncols
        self.main_mask = (1 << ncols) - 1
        self.rows = _backend(fld)
        self.pivots: dict[int, object] = {}
        self.pivot_mask = 0

    def lead(self, row) -> int:
        s = self.rows.support(row) & self.main_mask
        if not s:
            return -1
        return (s & -s).bit_length() - 1

    def reduce_leading(self, row):
        """Eliminate pivot columns from the bottom until the lowest main
        column is a non-pivot (or the main part vanishes)."""
        R = self.rows
        while True:
            c = self.lead(row)
            if c < 0 or c not in self.pivots:
                return row
            row = R.axpy(row, R.coef(row, c), self.pivots[c])

    def reduce_full(self, row):
        """Eliminate every pivot column from ``row``."""
        R = self.rows
        floor = 0
        while True:
            s = R.support(row) & self.pivot_mask & ~((1 << floor) - 1)
            if not s:
                return row
            c = (s & -s).bit_length() - 1
            row = R.axpy(row, R.coef(row, c), self.pivots[c])
            floor = c + 1

    def insert(self, row) -> bool:
        row = self.reduce_leading(row)
        c = self.lead(row)
        if c < 0:
            return False
        inv = self.field.inv(self.rows.coef(row, c))
        self.pivots[c] = self.rows.scale(row, inv)
        self.pivot_mask |= 1 << c
        return True

    def back_substitute(self) -> None:
        for c in sorted(self.pivots, reverse=True):
            row = self.pivots[c]
            rest = self.rows.support(row) & self.pivot_mask & ~((1 << (c + 1)) - 1)
            if rest:
                # eliminate larger pivots (already fully reduced)
                R = self.rows
                while rest:
                    cc = (rest & -rest).bit_length() - 1
                    row = R.axpy(row, R.coef(row, cc), self.pivots[cc])
                    rest = R.support(row) & self.pivot_mask & ~((1 << (cc + 1)) - 1)
                self.pivots[c] = row


# -- ideals --------------------------------------------------------------------

class LocalIdeal:
    """Finitely generated ideal of k[[vars]], known modulo m^prec."""

    def __init__(self, generators: Sequence[TruncatedSeries], prec: int | None = None,
                 vars: Sequence[str] | None = None, fld: GF | None = None):
        gens = [g for g in generators]
        if not gens and (vars is None or fld is None):
            raise LocalRingError("an ideal without generators needs vars and field")
        self.vars = tuple(vars) if vars is not None else gens[0].vars
        self.field = fld if fld is not None else gens[0].field
        for g in gens:
            if g.vars != self.vars or g.field != self.field:
                raise LocalRingError("generators must share ambient variables and field")
        self.generators = tuple(g for g in gens if not g.is_zero())
        self._zero_gens = len(gens) - len(self.generators)
        p = min((g.prec for g in gens), default=prec or 12)
        self.prec = min(p, prec) if prec is not None else p
        self.is_unit = any(g.constant_term() for g in self.generators)
        self._length_cache = None

    def __repr__(self) -> str:
        return f"LocalIdeal(({', '.join(str(g) for g in self.generators)}), prec={self.prec})"

    def with_precision(self, prec: int) -> "LocalIdeal":
        return LocalIdeal([g.with_precision(prec) for g in self.generators], prec, self.vars, self.field)

    def plus(self, *more: TruncatedSeries) -> "LocalIdeal":
        return LocalIdeal(list(self.generators) + list(more), None, self.vars, self.field)

    def length(self):
        return artinian_length(self)


@dataclass
class QuotientBasis:
    """Basis of k[[vars]] / (I + m^d) by standard monomials."""

    vars: tuple[str, ...]
    field: GF
    d: int
    standard: list[tuple[int, ...]]
    _echelon: Echelon = dc_field(repr=False)
    _reduced: bool = dc_field(default=False, repr=False)

    def __len__(self) -> int:
        return len(self.standard)

    def standard_of_degree(self, deg: int) -> list[tuple[int, ...]]:
        return [m for m in self.standard if sum(m) == deg]

    def _row(self, f: TruncatedSeries):
        mons, index, _ = column_order(len(self.vars), self.d)
        items = [(index[k], c) for k, c in f.packed_items() if k % 255 < self.d]
        return self._echelon.rows.from_items(items)

    def normal_form(self, f: TruncatedSeries) -> TruncatedSeries:
        """Representative of f mod I + m^d in the span of standard monomials."""
        if not self._reduced:
            self._echelon.back_substitute()
            self._reduced = True
        row = self._echelon.reduce_full(self._row(f))
        mons, _, _ = column_order(len(self.vars), self.d)
        terms = {mons[c]: v for c, v in self._echelon.rows.items(row)}
        return TruncatedSeries(self.field, self.vars, terms, self.d)

    def reduces_to_zero(self, f: TruncatedSeries) -> bool:
        row = self._echelon.reduce_leading(self._row(f))
        return self._echelon.lead(row) < 0

    @property
    def reduction(self) -> dict[tuple[int, ...], TruncatedSeries]:
        """Normal form of every non-standard monomial of degree < d."""
        mons, _, _ = column_order(len(self.vars), self.d)
        std = set(self.standard)
        out = {}
        for m in mons:
            if m not in std:
                out[m] = self.normal_form(TruncatedSeries.monomial(self.field, self.vars, m, 1, self.d))
        return out


def _generator_rows(I: LocalIdeal, d: int, ech: Echelon, track: bool = False):
    """Rows g*m for all generators and monomials m with deg(g*m) < d.

    With ``track`` each row also carries a unit bookkeeping column, and the
    list of (generator index, multiplier exponents) is returned alongside.
    """
    n = len(I.vars)
    mons, index, starts = column_order(n, d)
    tags = []
    rows = []
    for gi, g in enumerate(I.generators):
        gt = [(k, c) for k, c in g.packed_items() if k % 255 < d]
        if not gt:
            continue
        o = min(k % 255 for k, _ in gt)
        for m in mons[: starts[d - o]]:
            mk = pack(m)
            md = sum(m)
            items = [(index[k + mk], c) for k, c in gt if k % 255 + md < d]
            if track:
                items.append((ech.ncols + len(tags), 1))
                tags.append((gi, m))
            rows.append(ech.rows.from_items(items))
    return rows, tags


def _echelon_for(I: LocalIdeal, d: int, track: bool = False):
    n = len(I.vars)
    mons, _, _ = column_order(n, d)
    ech = Echelon(I.field, len(mons))
    rows, tags = _generator_rows(I, d, ech, track)
    rows.sort(key=ech.lead)
    for r in rows:
        ech.insert(r)
    return ech, tags


def quotient_basis(I: LocalIdeal, d: int) -> QuotientBasis:
    if d > I.prec:
        raise LocalRingError(f"degree bound {d} exceeds ideal precision {I.prec}")
    if d < 0:
        raise LocalRingError("negative degree bound")
    ech, _ = _echelon_for(I, d)
    mons, _, _ = column_order(len(I.vars), d)
    standard = [m for i, m in enumerate(mons) if i not in ech.pivots]
    return QuotientBasis(I.vars, I.field, d, standard, ech)


@dataclass(frozen=True)
class LengthResult:
    length: float | int
    certificate_degree: int | None  # m^e lies in I, or None
    precision: int


def length_with_certificate(I: LocalIdeal, start: int = 1) -> LengthResult:
    """Artinian length together with the Nakayama exponent e (m^e in I)."""
    if I._length_cache is not None:
        return I._length_cache
    if I.is_unit:
        res = LengthResult(0, 0, I.prec)
        I._length_cache = res
        return res
    res = LengthResult(INFINITE, None, I.prec)
    for d in range(max(start, 1), I.prec + 1):
        qb = quotient_basis(I, d)
        per_degree = [0] * d
        for m in qb.standard:
            per_degree[sum(m)] += 1
        if 0 in per_degree:
            e = per_degree.index(0)
            res = LengthResult(sum(per_degree[:e]), e, I.prec)
            break
    I._length_cache = res
    return res


def artinian_length(I: LocalIdeal):
    """Length of k[[vars]]/I, or INFINITE when no certificate below the precision."""
    return length_with_certificate(I).length


def contains(I: LocalIdeal, f: TruncatedSeries) -> Membership:
    if f.vars != I.vars:
        raise LocalRingError(f"ambient mismatch {f.vars} vs {I.vars}")
    if I.is_unit:
        return Membership.EXACT
    cert = length_with_certificate(I)
    e = cert.certificate_degree
    if e is not None and f.prec >= e:
        # m^e lies in I, so I + m^e = I and the test is exact
        return Membership.EXACT if quotient_basis(I, e).reduces_to_zero(f) else Membership.NO
    qb = quotient_basis(I, min(I.prec, f.prec))
    return Membership.MOD_PRECISION if qb.reduces_to_zero(f) else Membership.NO


def ideals_equal(I: LocalIdeal, J: LocalIdeal) -> bool:
    return all(contains(J, g) for g in I.generators) and all(contains(I, g) for g in J.generators)


def solve_membership(I: LocalIdeal, f: TruncatedSeries, d: int | None = None):
    """Cofactors c_i with f = sum c_i g_i mod m^d, or None.

    Used for Newton-type lifting; the cofactors are polynomials of degree
    < d.
    """
    d = min(d or I.prec, I.prec, f.prec)
    ech, tags = _echelon_for(I, d, track=True)
    mons, index, _ = column_order(len(I.vars), d)
    row = ech.rows.from_items([(index[k], c) for k, c in f.packed_items() if k % 255 < d])
    row = ech.reduce_leading(row)
    if ech.lead(row) >= 0:
        return None
    # row = f - sum (tag coefficients) * rows  => f = sum tagcoef * g*m (char-free: negate)
    cof = [dict() for _ in I.generators]
    fld = I.field
    for col, c in ech.rows.items(row):
        if col < ech.ncols:
            continue
        gi, m = tags[col - ech.ncols]
        coef = fld.neg(c)
        cof[gi][m] = fld.add(cof[gi].get(m, 0), coef)
    return [TruncatedSeries(fld, I.vars, c, d) for c in cof]


def frobenius_power(fld: GF, vars: Sequence[str], e: int, prec: int = 12) -> LocalIdeal:
    q = 1
    while q < e:
        q *= fld.p
    if q != e or e < 1:
        raise LocalRingError(f"{e} is not a power of the characteristic {fld.p}")
    vars = tuple(vars)
    gens = [TruncatedSeries.monomial(fld, vars, [e if j == i else 0 for j in range(len(vars))], 1, prec)
            for i in range(len(vars))]
    return LocalIdeal(gens, prec)


def power_of_maximal_ideal(fld: GF, vars: Sequence[str], k: int, prec: int = 12) -> LocalIdeal:
    vars = tuple(vars)
    gens = [TruncatedSeries.monomial(fld, vars, m, 1, prec) for m in monomials_of_degree(len(vars), k)]
    return LocalIdeal(gens, prec)


def tjurina_ideal(f: TruncatedSeries) -> LocalIdeal:
    return LocalIdeal([f] + [f.partial(v) for v in f.vars])


def tjurina_number(f: TruncatedSeries):
    if f.constant_term():
        raise LocalRingError("the Tjurina number needs a series through the origin")
    return artinian_length(tjurina_ideal(f))


def nonsmoothness_ideal(relations: Sequence[TruncatedSeries]) -> LocalIdeal:
    if len(relations) != 2:
        raise LocalRingError("expected exactly two relations")
    _, minors = jacobian_minors(relations)
    return LocalIdeal(list(relations) + minors)


def nonsmoothness_length(relations: Sequence[TruncatedSeries]):
    return artinian_length(nonsmoothness_ideal(relations))


def hilbert_samuel_multiplicity(I: LocalIdeal, dim: int = 2, max_n: int | None = None) -> int | None:
    """Multiplicity of the (dim)-dimensional local ring k[[v]]/I.

    Uses the lengths l(n) of k[[v]]/(I + m^n); for n large these are a
    polynomial of degree dim with leading coefficient e/dim!, so the
    dim-th finite difference stabilises at e.  Returns None if the
    difference has not stabilised within the precision.
    """
    max_n = min(max_n or I.prec, I.prec)
    lengths = [len(quotient_basis(I, n)) for n in range(max_n + 1)]
    diffs = lengths
    for _ in range(dim):
        diffs = [b - a for a, b in zip(diffs, diffs[1:])]
    if len(diffs) >= 3 and diffs[-1] == diffs[-2] == diffs[-3]:
        return diffs[-1]
    return None
