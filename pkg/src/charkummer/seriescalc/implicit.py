"""Implicit coordinates of the double cover attached to a parameter pair (a, b).

Given a, b in k[[x,y]] we look for x, y in k[[u,v]] with

    x = u^2 + a(x, y) u,    y = v^2 + b(x, y) v,

and put z = u b(x, y) + v a(x, y).  The fixed point iteration from
x0 = u^2, y0 = v^2 gains at least one order of agreement per step, because
the right hand sides only see x, y through a(x, y) u and b(x, y) v.
"""

from __future__ import annotations

from typing import NamedTuple

from .series import SeriesError, TruncatedSeries

UV = ("u", "v")


class ImplicitSolution(NamedTuple):
    x: TruncatedSeries
    y: TruncatedSeries
    z: TruncatedSeries
    iterations: int


def _check_parameter_system(a: TruncatedSeries, b: TruncatedSeries) -> None:
    from ..localring import INFINITE, LocalIdeal, artinian_length

    if a.constant_term() or b.constant_term():
        raise SeriesError("a and b must vanish at the origin")
    if artinian_length(LocalIdeal([a, b])) == INFINITE:
        raise SeriesError("(a, b) is not primary to the maximal ideal")


def solve_implicit_pair(a: TruncatedSeries, b: TruncatedSeries, N: int = 12, check: bool = True) -> ImplicitSolution:
    """Series x(u,v), y(u,v), z(u,v) modulo (u,v)^N.

    ``a`` and ``b`` are series in two variables (by convention x, y); the
    result lives in k[[u, v]].
    """
    if a.vars != b.vars or len(a.vars) != 2:
        raise SeriesError("a and b must be series in the same two variables")
    if a.field != b.field:
        raise SeriesError("a and b must live over the same field")
    if check:
        _check_parameter_system(a, b)
    fld = a.field
    u = TruncatedSeries.variable(fld, UV, "u", N)
    v = TruncatedSeries.variable(fld, UV, "v", N)
    u2, v2 = u * u, v * v
    x, y = u2, v2
    for step in range(1, N + 1):
        ax = a.substitute([x, y]).truncate(N - 1)
        bx = b.substitute([x, y]).truncate(N - 1)
        nx = (u2 + ax * u).truncate(N)
        ny = (v2 + bx * v).truncate(N)
        if nx.prec < N or ny.prec < N:
            raise SeriesError("input precision too small for the requested N")
        if nx == x and ny == y:
            z = (u * b.substitute([x, y]) + v * a.substitute([x, y])).truncate(N)
            return ImplicitSolution(x, y, z, step)
        x, y = nx, ny
    raise SeriesError("fixed point iteration did not converge (internal error)")
