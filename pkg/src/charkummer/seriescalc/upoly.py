"""Small univariate polynomial helpers over GF(p^k).

Polynomials are coefficient tuples, lowest degree first.
"""

from __future__ import annotations

from .field import GF


def strip(c) -> tuple[int, ...]:
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def degree(c) -> int:
    return len(strip(c)) - 1


def evaluate(fld: GF, c, t: int) -> int:
    acc = 0
    for coef in reversed(c):
        acc = fld.add(fld.mul(acc, t), coef)
    return acc


def divide_linear(fld: GF, c, r: int) -> tuple[int, ...]:
    """Quotient of c by (t - r); assumes r is a root."""
    c = strip(c)
    out = [0] * (len(c) - 1)
    carry = 0
    for i in range(len(c) - 1, 0, -1):
        carry = fld.add(c[i], fld.mul(carry, r))
        out[i - 1] = carry
    return tuple(out)


def roots_in(fld: GF, c) -> list[int]:
    c = strip(c)
    if not c:
        raise ValueError("the zero polynomial has every element as a root")
    return [t for t in range(fld.order) if evaluate(fld, c, t) == 0]


def distinct_roots_in_closure(fld: GF, c) -> int:
    """Number of distinct roots in an algebraic closure, for degree <= 3.

    Linear factors over ``fld`` are split off; what remains has degree <= 3
    and no root in ``fld``, hence is irreducible, hence separable (finite
    fields are perfect) and contributes its degree.
    """
    c = strip(c)
    if not c:
        raise ValueError("zero polynomial")
    if len(c) - 1 > 3:
        raise ValueError("only polynomials of degree <= 3 are supported")
    found = set()
    while len(c) > 1:
        rs = roots_in(fld, c)
        if not rs:
            break
        found.add(rs[0])
        c = divide_linear(fld, c, rs[0])
    return len(found) + (len(c) - 1)


def format_upoly(fld: GF, c, var: str = "t") -> str:
    parts = []
    for i, coef in enumerate(strip(c)):
        if not coef:
            continue
        mon = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
        if coef == 1 and mon:
            parts.append(mon)
        elif mon:
            parts.append(f"{fld.format(coef)}*{mon}")
        else:
            parts.append(fld.format(coef))
    return " + ".join(parts) if parts else "0"
