"""Truncated multivariate power series over GF(p^k).

A series is a finite map from exponent vectors to nonzero field elements
together with a precision N: everything of total degree >= N is unknown.
Internally exponent vectors are packed into one int, eight bits per
variable, so that multiplying monomials is integer addition.  Because every
stored degree is below N <= MAX_PRECISION < 255, the total degree of a packed
key is ``key % 255`` (256 = 1 mod 255).
"""

from __future__ import annotations

import math
from typing import Iterable, Mapping, Sequence

from .field import GF, field as _field

MAX_PRECISION = 250
_BITS = 8
_MASK = (1 << _BITS) - 1


class SeriesError(ValueError):
    pass


def pack(exps: Sequence[int]) -> int:
    key = 0
    for i, e in enumerate(exps):
        if e < 0 or e > _MASK:
            raise SeriesError(f"exponent {e} out of range")
        key |= e << (_BITS * i)
    return key


def unpack(key: int, nvars: int) -> tuple[int, ...]:
    return tuple((key >> (_BITS * i)) & _MASK for i in range(nvars))


def key_degree(key: int) -> int:
    return key % 255


class TruncatedSeries:
    """Immutable element of GF(q)[[vars]] / m^prec.

    ``terms`` maps exponent tuples to field elements (raw ints); zero
    coefficients and terms of degree >= prec are dropped on construction.
    """

    __slots__ = ("field", "vars", "prec", "_t", "_hash")

    def __init__(self, fld: GF, vars: Sequence[str], terms: Mapping[tuple, int] | None = None, prec: int = 12):
        vars = tuple(vars)
        if len(set(vars)) != len(vars):
            raise SeriesError(f"repeated variable in {vars}")
        packed = {}
        for exps, c in (terms or {}).items():
            if len(exps) != len(vars):
                raise SeriesError(f"exponent {exps} does not match variables {vars}")
            packed[pack(exps)] = c
        self._init(fld, vars, packed, prec)

    def _init(self, fld, vars, packed, prec):
        if not 0 <= prec <= MAX_PRECISION:
            raise SeriesError(f"precision {prec} outside 0..{MAX_PRECISION}")
        self.field = fld
        self.vars = vars
        self.prec = prec
        self._t = {k: c for k, c in packed.items() if c and k % 255 < prec}
        self._hash = None

    @classmethod
    def _make(cls, fld, vars, packed, prec) -> "TruncatedSeries":
        obj = cls.__new__(cls)
        obj._init(fld, vars, packed, prec)
        return obj

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, fld: GF, vars: Sequence[str], prec: int = 12) -> "TruncatedSeries":
        return cls._make(fld, tuple(vars), {}, prec)

    @classmethod
    def constant(cls, fld: GF, vars: Sequence[str], c: int, prec: int = 12) -> "TruncatedSeries":
        return cls._make(fld, tuple(vars), {0: c}, prec)

    @classmethod
    def one(cls, fld: GF, vars: Sequence[str], prec: int = 12) -> "TruncatedSeries":
        return cls.constant(fld, vars, 1, prec)

    @classmethod
    def variable(cls, fld: GF, vars: Sequence[str], name: str, prec: int = 12) -> "TruncatedSeries":
        vars = tuple(vars)
        if name not in vars:
            raise SeriesError(f"unknown variable {name!r}")
        return cls._make(fld, vars, {1 << (_BITS * vars.index(name)): 1}, prec)

    @classmethod
    def monomial(cls, fld: GF, vars: Sequence[str], exps: Sequence[int], c: int = 1, prec: int = 12):
        return cls._make(fld, tuple(vars), {pack(exps): c}, prec)

    # -- inspection ---------------------------------------------------------

    def items(self) -> Iterable[tuple[tuple[int, ...], int]]:
        n = len(self.vars)
        for k, c in self._t.items():
            yield unpack(k, n), c

    def packed_items(self):
        return self._t.items()

    def coefficient(self, exps: Sequence[int]) -> int:
        return self._t.get(pack(exps), 0)

    def constant_term(self) -> int:
        return self._t.get(0, 0)

    def linear_coefficient(self, var: str) -> int:
        return self._t.get(1 << (_BITS * self._index(var)), 0)

    def is_zero(self) -> bool:
        return not self._t

    def __bool__(self) -> bool:
        return bool(self._t)

    def __len__(self) -> int:
        return len(self._t)

    def order(self) -> int:
        """Lowest degree present; the precision for the zero series."""
        if not self._t:
            return self.prec
        return min(k % 255 for k in self._t)

    def degree(self) -> int:
        """Highest degree present (-1 for zero)."""
        if not self._t:
            return -1
        return max(k % 255 for k in self._t)

    def homogeneous_part(self, d: int) -> "TruncatedSeries":
        return self._make(self.field, self.vars, {k: c for k, c in self._t.items() if k % 255 == d}, self.prec)

    def _index(self, var: str) -> int:
        try:
            return self.vars.index(var)
        except ValueError:
            raise SeriesError(f"unknown variable {var!r} (have {self.vars})") from None

    # -- comparison ---------------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = self._lift_scalar(other)
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        if self.vars != other.vars or self.field != other.field:
            return False
        n = min(self.prec, other.prec)
        return self.truncate(n)._t == other.truncate(n)._t

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.vars, self.prec, frozenset(self._t.items())))
        return self._hash

    def agreement_order(self, other: "TruncatedSeries") -> int:
        """Order of ``self - other`` (how far the two agree)."""
        return (self - other).order()

    # -- arithmetic ---------------------------------------------------------

    def _check(self, other: "TruncatedSeries") -> None:
        if self.vars != other.vars:
            raise SeriesError(f"variable mismatch: {self.vars} vs {other.vars}")
        if self.field != other.field:
            raise SeriesError(f"field mismatch: {self.field} vs {other.field}")

    def _lift_scalar(self, c: int) -> "TruncatedSeries":
        return self.constant(self.field, self.vars, self.field.from_int(c), self.prec)

    def _coerce(self, other):
        if isinstance(other, TruncatedSeries):
            self._check(other)
            return other
        if isinstance(other, int):
            return self._lift_scalar(other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        prec = min(self.prec, other.prec)
        out = dict(self._t)
        add = self.field.add
        if self.field.p == 2:
            for k, c in other._t.items():
                out[k] = out.get(k, 0) ^ c
        else:
            for k, c in other._t.items():
                out[k] = add(out.get(k, 0), c)
        return self._make(self.field, self.vars, out, prec)

    __radd__ = __add__

    def __neg__(self):
        if self.field.p == 2:
            return self
        neg = self.field.neg
        return self._make(self.field, self.vars, {k: neg(c) for k, c in self._t.items()}, self.prec)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def scale(self, c: int) -> "TruncatedSeries":
        """Multiply by the field element ``c`` (raw int)."""
        if c == 0:
            return self._make(self.field, self.vars, {}, self.prec)
        mul = self.field.mul
        return self._make(self.field, self.vars, {k: mul(c, v) for k, v in self._t.items()}, self.prec)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        prec = min(self.prec + other.order(), other.prec + self.order(), MAX_PRECISION)
        return self._make(self.field, self.vars, _mul_terms(self.field, self._t, other._t, prec), prec)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "TruncatedSeries":
        if e < 0:
            raise SeriesError("negative powers are not supported")
        result = self.one(self.field, self.vars, self.prec)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def shift(self, exps: Sequence[int], c: int = 1) -> "TruncatedSeries":
        """Multiply by the monomial ``c * vars**exps``."""
        key = pack(exps)
        d = key % 255
        mul = self.field.mul
        prec = min(self.prec + d, MAX_PRECISION)
        return self._make(self.field, self.vars, {k + key: mul(c, v) for k, v in self._t.items()}, prec)

    def frobenius(self) -> "TruncatedSeries":
        """f ** p computed termwise (valid in characteristic p)."""
        p = self.field.p
        fr = self.field.frobenius
        prec = min(self.prec + (p - 1) * self.order(), MAX_PRECISION)
        return self._make(self.field, self.vars, {k * p: fr(c) for k, c in self._t.items()}, prec)

    def truncate(self, n: int) -> "TruncatedSeries":
        n = min(n, self.prec)
        if n == self.prec:
            return self
        return self._make(self.field, self.vars, self._t, n)

    def with_precision(self, n: int) -> "TruncatedSeries":
        """Same terms, declared known to precision ``n``.

        Raising the precision is only correct for honest polynomials; the
        caller vouches for that.
        """
        return self._make(self.field, self.vars, self._t, n)

    # -- calculus -------------------------------------------------------------

    def partial(self, var: str) -> "TruncatedSeries":
        i = self._index(var)
        unit = 1 << (_BITS * i)
        p = self.field.p
        out = {}
        for k, c in self._t.items():
            e = (k >> (_BITS * i)) & _MASK
            if e % p:
                coef = self.field.mul(c, self.field.from_int(e))
                if coef:
                    out[k - unit] = coef
        return self._make(self.field, self.vars, out, max(self.prec - 1, 0))

    # -- change of ambient ----------------------------------------------------

    def with_vars(self, new_vars: Sequence[str]) -> "TruncatedSeries":
        """Embed into (or reorder to) an ambient containing all used variables."""
        new_vars = tuple(new_vars)
        pos = []
        for j, v in enumerate(self.vars):
            if v in new_vars:
                pos.append(new_vars.index(v))
            else:
                pos.append(None)
        out = {}
        n = len(self.vars)
        for k, c in self._t.items():
            exps = unpack(k, n)
            nk = 0
            for j, e in enumerate(exps):
                if e:
                    if pos[j] is None:
                        raise SeriesError(f"variable {self.vars[j]!r} is used but absent from {new_vars}")
                    nk |= e << (_BITS * pos[j])
            out[nk] = c
        return self._make(self.field, new_vars, out, self.prec)

    def over(self, big: GF) -> "TruncatedSeries":
        """Coefficients pushed into an extension field."""
        if big == self.field:
            return self
        emb = self.field.embedding_into(big)
        return self._make(big, self.vars, {k: emb(c) for k, c in self._t.items()}, self.prec)

    def map_coefficients(self, fn) -> "TruncatedSeries":
        return self._make(self.field, self.vars, {k: fn(c) for k, c in self._t.items()}, self.prec)

    # -- substitution -----------------------------------------------------------

    def substitute(self, images: Mapping[str, "TruncatedSeries"] | Sequence["TruncatedSeries"]) -> "TruncatedSeries":
        """Ring map sending each variable to a series with zero constant term.

        ``images`` is a mapping var -> series, or a sequence aligned with
        ``self.vars``.  All images must share one ambient.  The result's
        precision is min(prec * min order of images, min image precision).
        """
        imgs = _aligned_images(self, images)
        target = imgs[0]
        for g in imgs[1:]:
            target._check(g)
        if target.field != self.field:
            raise SeriesError(f"field mismatch: {self.field} vs {target.field}")
        for v, g in zip(self.vars, imgs):
            if g.constant_term():
                raise SeriesError(f"image of {v!r} has a nonzero constant term")
        min_ord = min(g.order() for g in imgs)
        prec = min([self.prec * min_ord] + [g.prec for g in imgs] + [MAX_PRECISION])
        return _substitute(self, imgs, prec)

    def translate(self, var: str, c: int) -> "TruncatedSeries":
        """Polynomial translation ``var -> var + c``.

        Only meaningful when the series is an honest polynomial (all of its
        terms are known); callers use it to move chart points to the origin.
        """
        i = self._index(var)
        if c == 0:
            return self
        fld = self.field
        n = len(self.vars)
        out: dict[int, int] = {}
        for k, coef in self._t.items():
            exps = list(unpack(k, n))
            e = exps[i]
            base = k - (e << (_BITS * i))
            # (v + c)^e = sum binom(e, j) c^(e-j) v^j
            for j in range(e + 1):
                b = math.comb(e, j) % fld.p
                if not b:
                    continue
                term = fld.mul(coef, fld.mul(fld.from_int(b), fld.pow(c, e - j)))
                if term:
                    nk = base + (j << (_BITS * i))
                    out[nk] = fld.add(out.get(nk, 0), term)
        return self._make(fld, self.vars, out, self.prec)

    # -- text -------------------------------------------------------------------

    def __str__(self) -> str:
        from .grammar import format_series
        return format_series(self)

    def __repr__(self) -> str:
        return f"TruncatedSeries({self}, vars={self.vars}, prec={self.prec})"


def _mul_terms(fld: GF, a: dict, b: dict, prec: int) -> dict:
    if not a or not b:
        return {}
    if len(a) > len(b):
        a, b = b, a
    # bucket the larger operand by degree so that we only visit useful pairs
    buckets: dict[int, list] = {}
    for k, c in b.items():
        buckets.setdefault(k % 255, []).append((k, c))
    degs = sorted(buckets)
    out: dict[int, int] = {}
    log, exp, qm1 = fld._log, fld._exp, fld.order - 1
    char2 = fld.p == 2
    add = fld.add
    for ka, ca in a.items():
        da = ka % 255
        la = log[ca]
        for db in degs:
            if da + db >= prec:
                break
            for kb, cb in buckets[db]:
                c = exp[(la + log[cb]) % qm1]
                k = ka + kb
                if char2:
                    out[k] = out.get(k, 0) ^ c
                else:
                    out[k] = add(out.get(k, 0), c)
    return out


def _aligned_images(f: TruncatedSeries, images) -> list:
    if isinstance(images, Mapping):
        missing = [v for v in f.vars if v not in images]
        if missing:
            raise SeriesError(f"no image given for {missing}")
        return [images[v] for v in f.vars]
    imgs = list(images)
    if len(imgs) != len(f.vars):
        raise SeriesError("one image per variable is required")
    return imgs


def _substitute(f: TruncatedSeries, imgs: list, prec: int) -> TruncatedSeries:
    fld = f.field
    n = len(f.vars)
    target = imgs[0]
    tvars = target.vars
    imgs = [g.truncate(prec) for g in imgs]
    # powers of each image, built lazily
    powers: list[dict[int, TruncatedSeries]] = [dict() for _ in range(n)]

    def power(i: int, e: int) -> TruncatedSeries:
        cache = powers[i]
        if e not in cache:
            if e == 0:
                cache[0] = TruncatedSeries.one(fld, tvars, prec)
            elif e == 1:
                cache[1] = imgs[i]
            else:
                h = e // 2
                cache[e] = (power(i, h) * power(i, e - h)).truncate(prec)
        return cache[e]

    # prefix products along the variable order share work between terms
    prefix: dict[tuple, TruncatedSeries] = {(): TruncatedSeries.one(fld, tvars, prec)}

    def prod(exps: tuple) -> TruncatedSeries:
        if exps in prefix:
            return prefix[exps]
        head = prod(exps[:-1])
        e = exps[-1]
        res = head if e == 0 else (head * power(len(exps) - 1, e)).truncate(prec)
        prefix[exps] = res
        return res

    acc: dict[int, int] = {}
    min_ord = min(g.order() for g in imgs) if imgs else 0
    for k, c in sorted(f._t.items()):
        if min_ord and (k % 255) * min_ord >= prec:
            continue
        exps = unpack(k, n)
        term = prod(exps)
        mul = fld.mul
        for tk, tc in term._t.items():
            if tk % 255 < prec:
                acc[tk] = fld.add(acc.get(tk, 0), mul(c, tc))
    return TruncatedSeries._make(fld, tvars, acc, prec)


def series_arith(lhs: TruncatedSeries, rhs: TruncatedSeries, op: str) -> TruncatedSeries:
    if op == "add":
        return lhs + rhs
    if op == "mul":
        return lhs * rhs
    raise SeriesError(f"unknown operation {op!r}")


def substitute(f: TruncatedSeries, images) -> TruncatedSeries:
    return f.substitute(images)


def partial_derivative(f: TruncatedSeries, var: str) -> TruncatedSeries:
    return f.partial(var)


def variables(fld: GF, names: Sequence[str] | str, prec: int = 12) -> list[TruncatedSeries]:
    """The coordinate functions of k[[names]] as series."""
    if isinstance(names, str):
        names = names.replace(",", " ").split()
    return [TruncatedSeries.variable(fld, names, v, prec) for v in names]


def jacobian_minors(relations: Sequence[TruncatedSeries], vars: Sequence[str] | None = None):
    """Matrix of partials and, for two relations, all of its 2x2 minors.

    Returns ``(matrix, generators)`` where ``generators`` is the gradient for a
    single relation and the list of 2x2 minors for two.
    """
    if not relations:
        raise SeriesError("at least one relation is required")
    vars = tuple(vars or relations[0].vars)
    matrix = [[r.partial(v) for v in vars] for r in relations]
    if len(relations) == 1:
        return matrix, list(matrix[0])
    if len(relations) != 2:
        raise SeriesError("minors are implemented for one or two relations")
    minors = []
    r0, r1 = matrix
    for i in range(len(vars)):
        for j in range(i + 1, len(vars)):
            minors.append(r0[i] * r1[j] - r0[j] * r1[i])
    return matrix, minors


def default_field() -> GF:
    return _field(2, 1)
