"""Finite fields GF(p^k).

Elements are plain ints in ``range(p**k)``: base-p digit ``i`` is the
coefficient of ``alpha**i``, where ``alpha`` is the class of the indeterminate
modulo the field's modulus.  For p = 2 this is the usual bit-vector encoding,
so addition is XOR.

The moduli for p = 2, k <= 8 are fixed (Conway polynomials, which are
primitive and compatible under subfield inclusion); see ``CONWAY_2`` and
docs/formats.md.  For other (p, k) the first primitive polynomial in
lexicographic order is used.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

# Coefficients low -> high, monic.  C(2,k) for k = 1..8.
CONWAY_2: dict[int, tuple[int, ...]] = {
    1: (1, 1),                          # x + 1
    2: (1, 1, 1),                       # x^2 + x + 1
    3: (1, 1, 0, 1),                    # x^3 + x + 1
    4: (1, 1, 0, 0, 1),                 # x^4 + x + 1
    5: (1, 0, 1, 0, 0, 1),              # x^5 + x^2 + 1
    6: (1, 1, 0, 1, 1, 0, 1),           # x^6 + x^4 + x^3 + x + 1
    7: (1, 1, 0, 0, 0, 0, 0, 1),        # x^7 + x + 1
    8: (1, 0, 1, 1, 1, 0, 0, 0, 1),     # x^8 + x^4 + x^3 + x^2 + 1
}


class FieldError(ValueError):
    pass


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % d for d in range(2, int(n**0.5) + 1))


def _polymod(num: list[int], den: tuple[int, ...], p: int) -> list[int]:
    """Remainder of ``num`` by monic ``den`` over GF(p); lists low -> high."""
    num = list(num)
    dd = len(den) - 1
    for i in range(len(num) - 1, dd - 1, -1):
        c = num[i] % p
        if c:
            for j in range(dd + 1):
                num[i - dd + j] = (num[i - dd + j] - c * den[j]) % p
    rem = [c % p for c in num[:dd]]
    while rem and rem[-1] == 0:
        rem.pop()
    return rem


def is_irreducible(modulus: tuple[int, ...], p: int) -> bool:
    """Trial division by every monic polynomial of degree 1..k//2."""
    k = len(modulus) - 1
    for deg in range(1, k // 2 + 1):
        for tail in itertools.product(range(p), repeat=deg):
            if not _polymod(list(modulus), tuple(tail) + (1,), p):
                return False
    return True


@dataclass(frozen=True)
class FieldElement:
    """Boxed element with operator support, for API convenience.

    Series arithmetic works on raw ints; this wrapper is what callers see
    when they ask a field for ``element(...)`` or ``gen()``.
    """

    field: "GF"
    value: int

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldError("elements of different fields")
            return other.value
        if isinstance(other, int):
            return self.field.from_int(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        return FieldElement(self.field, self.field.add(self.value, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return FieldElement(self.field, self.field.sub(self.value, o))

    def __rsub__(self, other):
        o = self._coerce(other)
        return FieldElement(self.field, self.field.sub(o, self.value))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.value))

    def __mul__(self, other):
        o = self._coerce(other)
        return FieldElement(self.field, self.field.mul(self.value, o))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        return FieldElement(self.field, self.field.mul(self.value, self.field.inv(o)))

    def __pow__(self, e: int):
        return FieldElement(self.field, self.field.pow(self.value, e))

    def inverse(self) -> "FieldElement":
        return FieldElement(self.field, self.field.inv(self.value))

    def __bool__(self) -> bool:
        return self.value != 0

    def __int__(self) -> int:
        return self.value

    def __str__(self) -> str:
        return self.field.format(self.value)

    def __repr__(self) -> str:
        return f"FieldElement({self.field}, {self.field.format(self.value)})"


class GF:
    """The field with p**k elements.

    >>> F = GF(2, 4)
    >>> F.format(F.mul(F.gen_value, F.gen_value))
    'g^2'
    """

    def __init__(self, p: int = 2, k: int = 1, modulus: tuple[int, ...] | None = None):
        if not _is_prime(p):
            raise FieldError(f"characteristic {p} is not prime")
        if k < 1:
            raise FieldError("extension degree must be >= 1")
        self.p = p
        self.k = k
        self.order = p**k
        if modulus is None:
            modulus = _default_modulus(p, k)
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != k + 1 or modulus[-1] != 1:
            raise FieldError("modulus must be monic of degree k")
        if not is_irreducible(modulus, p):
            raise FieldError(f"modulus {modulus} is reducible over GF({p})")
        self.modulus = modulus
        self._build_tables()

    # -- construction -----------------------------------------------------

    def _digits(self, a: int) -> list[int]:
        out = []
        for _ in range(self.k):
            out.append(a % self.p)
            a //= self.p
        return out

    def _undigits(self, ds) -> int:
        v = 0
        for d in reversed(ds):
            v = v * self.p + d
        return v

    def _slow_mul(self, a: int, b: int) -> int:
        da, db = self._digits(a), self._digits(b)
        prod = [0] * (2 * self.k - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] += x * y
        rem = _polymod(prod, self.modulus, self.p)
        return self._undigits(rem + [0] * (self.k - len(rem)))

    def _build_tables(self) -> None:
        q = self.order
        if self.k == 1:
            g = next(c for c in range(1, self.p) if _mult_order_mod(c, self.p) == self.p - 1) if self.p > 2 else 1
        else:
            g = self.p  # the class of the indeterminate
        exp = [0] * (q - 1)
        log = [0] * q
        x = 1
        for i in range(q - 1):
            exp[i] = x
            log[x] = i
            x = self._slow_mul(x, g)
            if x == 1 and i < q - 2:
                raise FieldError(f"modulus {self.modulus} is not primitive")
        self.gen_value = g
        self._exp = exp
        self._log = log
        if self.p != 2:
            self._add = [[self._undigits([(x + y) % self.p for x, y in zip(self._digits(a), self._digits(b))])
                          for b in range(q)] for a in range(q)]
            self._neg = [self._undigits([(-x) % self.p for x in self._digits(a)]) for a in range(q)]

    # -- arithmetic on raw ints -------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        return self._add[a][b]

    def neg(self, a: int) -> int:
        if self.p == 2:
            return a
        return self._neg[a]

    def sub(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        return self._add[a][self._neg[b]]

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self._exp[(self._log[a] + self._log[b]) % (self.order - 1)]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in GF(%d)" % self.order)
        return self._exp[(-self._log[a]) % (self.order - 1)]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if e == 0:
            return 1
        if a == 0:
            if e < 0:
                raise ZeroDivisionError("0 to a negative power")
            return 0
        return self._exp[(self._log[a] * e) % (self.order - 1)]

    def frobenius(self, a: int) -> int:
        return self.pow(a, self.p)

    def from_int(self, n: int) -> int:
        """Image of the integer ``n`` in the prime field."""
        return n % self.p

    def log(self, a: int) -> int:
        if a == 0:
            raise ValueError("log of zero")
        return self._log[a]

    def exp(self, j: int) -> int:
        return self._exp[j % (self.order - 1)]

    # -- boxed elements ---------------------------------------------------

    def element(self, value: int) -> FieldElement:
        if not 0 <= value < self.order:
            raise FieldError(f"{value} is not an element encoding of GF({self.order})")
        return FieldElement(self, value)

    def gen(self) -> FieldElement:
        return FieldElement(self, self.gen_value)

    def elements(self) -> list[FieldElement]:
        return [FieldElement(self, v) for v in range(self.order)]

    # -- text ---------------------------------------------------------------

    def format(self, a: int) -> str:
        if a == 0:
            return "0"
        if self.k == 1:
            return str(a)
        if a == 1:
            return "1"
        return f"g^{self._log[a]}"

    def parse(self, text: str) -> int:
        t = text.strip()
        if t.startswith("g"):
            rest = t[1:].strip()
            if not rest:
                return self.gen_value
            if not rest.startswith("^"):
                raise FieldError(f"bad field literal {text!r}")
            return self.exp(int(rest[1:]))
        return self.from_int(int(t))

    # -- subfields ----------------------------------------------------------

    def embedding_into(self, big: "GF"):
        """Return the ring map GF(p^k) -> GF(p^m) as a callable on raw ints.

        Uses Conway compatibility: the generator goes to
        ``big_gen ** ((p^m - 1) / (p^k - 1))``.
        """
        if big.p != self.p or big.k % self.k:
            raise FieldError(f"GF({self.order}) does not embed in GF({big.order})")
        if self.k == 1:
            return lambda a: a
        e = (big.order - 1) // (self.order - 1)
        g_img = big.pow(big.gen_value, e)
        table = [0] * self.order
        for a in range(1, self.order):
            table[a] = big.pow(g_img, self._log[a])
        return table.__getitem__

    def __eq__(self, other) -> bool:
        return isinstance(other, GF) and (self.p, self.k, self.modulus) == (other.p, other.k, other.modulus)

    def __hash__(self) -> int:
        return hash((self.p, self.k, self.modulus))

    def __repr__(self) -> str:
        return f"GF({self.p}^{self.k})" if self.k > 1 else f"GF({self.p})"

    __str__ = __repr__


def _mult_order_mod(c: int, p: int) -> int:
    x, n = c % p, 1
    while x != 1:
        x = x * c % p
        n += 1
    return n


def _default_modulus(p: int, k: int) -> tuple[int, ...]:
    if p == 2 and k in CONWAY_2:
        return CONWAY_2[k]
    for tail in itertools.product(range(p), repeat=k):
        cand = tuple(reversed(tail)) + (1,)
        if cand[0] == 0 or not is_irreducible(cand, p):
            continue
        try:
            GF(p, k, cand)
        except FieldError:
            continue
        return cand
    raise FieldError(f"no primitive modulus found for GF({p}^{k})")


@lru_cache(maxsize=None)
def field(p: int = 2, k: int = 1) -> GF:
    """Shared instance of GF(p^k) with the default modulus."""
    return GF(p, k)


def parse_field_spec(text: str) -> GF:
    """Parse ``p^k`` or ``p`` (CLI field literal)."""
    t = text.strip()
    if "^" in t:
        p, k = t.split("^", 1)
        return field(int(p), int(k))
    return field(int(t), 1)
