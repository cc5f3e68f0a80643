"""Text form of polynomials: ``z^2 + x^2*y^2*z + x*y^4 + y*x^4``.

Terms are joined by ``+`` (``-`` is accepted too and negates the term).  A
term is a ``*``-joined product of factors; a factor is an integer, the
field generator ``g`` / ``g^j`` (only in proper extension fields, where the
name ``g`` is therefore reserved), or a variable with an optional ``^e``.
Variables are identifiers (letters, digits, underscore, starting with a
letter).

Printing is canonical: terms by increasing total degree, and inside one
degree by decreasing exponent vector in the ambient variable order.
"""

from __future__ import annotations

import re
from typing import Sequence

from .field import GF
from .series import SeriesError, TruncatedSeries

_IDENT = re.compile(r"[A-Za-z][A-Za-z0-9_]*")
_FACTOR = re.compile(r"^\s*(?:(\d+)|([A-Za-z][A-Za-z0-9_]*)\s*(?:\^\s*(\d+))?)\s*$")


class ParseError(SeriesError):
    pass


def _generator_symbol(fld: GF) -> str | None:
    return "g" if fld.k > 1 else None


def _split_terms(text: str) -> list[tuple[int, str]]:
    out = []
    sign = 1
    buf = []
    for ch in text:
        if ch in "+-":
            chunk = "".join(buf).strip()
            if chunk:
                out.append((sign, chunk))
            elif ch == "+" and out:
                raise ParseError(f"empty term in {text!r}")
            sign = -1 if ch == "-" else 1
            buf = []
        else:
            buf.append(ch)
    chunk = "".join(buf).strip()
    if not chunk:
        raise ParseError(f"dangling operator or empty input in {text!r}")
    out.append((sign, chunk))
    return out


def variables_in(text: str, fld: GF) -> list[str]:
    gen = _generator_symbol(fld)
    names = set(_IDENT.findall(text))
    names.discard(gen)
    return sorted(names)


def parse_polynomial(text: str, fld: GF, vars: Sequence[str] | None = None, prec: int = 12) -> TruncatedSeries:
    """Parse ``text`` into a series over ``fld`` in ``vars``.

    When ``vars`` is omitted the variables found in the text are used in
    alphabetical order.
    """
    if vars is None:
        vars = variables_in(text, fld)
    vars = tuple(vars)
    gen = _generator_symbol(fld)
    terms: dict[tuple, int] = {}
    for sign, chunk in _split_terms(text):
        coef = 1
        exps = [0] * len(vars)
        for factor in chunk.split("*"):
            m = _FACTOR.match(factor)
            if not m:
                raise ParseError(f"cannot parse factor {factor!r} in {text!r}")
            num, name, power = m.groups()
            if num is not None:
                coef = fld.mul(coef, fld.from_int(int(num)))
                continue
            e = int(power) if power is not None else 1
            if name == gen:
                coef = fld.mul(coef, fld.pow(fld.gen_value, e))
            elif name in vars:
                exps[vars.index(name)] += e
            else:
                raise ParseError(f"unknown variable {name!r} (ambient {vars})")
        if sign < 0:
            coef = fld.neg(coef)
        key = tuple(exps)
        terms[key] = fld.add(terms.get(key, 0), coef)
    return TruncatedSeries(fld, vars, terms, prec)


def _sort_key(item):
    exps, _ = item
    return (sum(exps), tuple(-e for e in exps))


def format_series(f: TruncatedSeries) -> str:
    if f.is_zero():
        return "0"
    parts = []
    for exps, c in sorted(f.items(), key=_sort_key):
        factors = []
        for v, e in zip(f.vars, exps):
            if e == 1:
                factors.append(v)
            elif e > 1:
                factors.append(f"{v}^{e}")
        if c != 1 or not factors:
            factors.insert(0, f.field.format(c))
        parts.append("*".join(factors))
    return " + ".join(parts)
