"""Command-line front end.

Exit codes: 0 all assertions pass, 1 an assertion failed, 2 input could not
be parsed, 3 the input parsed but is outside the domain (e.g. (a, b) is not
a parameter system).
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import __version__, lattice, serre
from .blowup import (
    blowup_invariant,
    chart_consistency_check,
    chart_singularities,
    exceptional_fiber_data,
    z_chart_exceptional_empty,
)
from .involution import (
    NONNORMAL,
    XY,
    InvolutionData,
    count_singular_chart_points,
    format_regularity_polynomial,
    has_embedded_component,
    invariant_equation,
    is_normal,
    verify_invariant_identity,
)
from .localring import INFINITE, tjurina_number
from .records import Assertion, check, sort_records
from .seriescalc.field import GF, parse_field_spec
from .seriescalc.grammar import parse_polynomial

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_DOMAIN = 0, 1, 2, 3
DEFAULT_PRECISION = 12


class ParseFailure(Exception):
    pass


class DomainFailure(Exception):
    pass


def default_precision() -> int:
    raw = os.environ.get("CHARKUMMER_PRECISION")
    if raw is None:
        return DEFAULT_PRECISION
    try:
        n = int(raw)
    except ValueError:
        raise ParseFailure(f"CHARKUMMER_PRECISION must be an integer, got {raw!r}") from None
    if not 1 <= n <= 64:
        raise ParseFailure("CHARKUMMER_PRECISION must lie in 1..64")
    return n


def _field(text: str) -> GF:
    try:
        return parse_field_spec(text)
    except ValueError as exc:
        raise ParseFailure(f"bad field {text!r}: {exc}") from None


def _poly(text: str, fld: GF, vars, prec: int):
    try:
        return parse_polynomial(text, fld, vars, prec)
    except ValueError as exc:
        raise ParseFailure(f"cannot parse {text!r}: {exc}") from None


def _data(args) -> InvolutionData:
    fld = _field(args.field)
    prec = args.precision or default_precision()
    a, b = _poly(args.a, fld, XY, prec), _poly(args.b, fld, XY, prec)
    try:
        return InvolutionData(a, b)
    except ValueError as exc:
        raise DomainFailure(str(exc)) from None


def _emit(args, assertions: list[Assertion], lines: list[str]) -> int:
    if getattr(args, "format", "human") == "records":
        for a in sort_records(assertions):
            print(a.record())
    else:
        for line in lines:
            print(line)
        for a in assertions:
            print(a.human())
    return EXIT_OK if all(a.passed for a in assertions) else EXIT_FAIL


# -- commands ------------------------------------------------------------------------

def cmd_quotient(args) -> int:
    d = _data(args)
    f = invariant_equation(d)
    rep = verify_invariant_identity(d, args.precision or default_precision())
    lines = [f"(a, b) = ({d.a}, {d.b}) over {d.field}", f"invariant equation: {f} = 0"]
    if not is_normal(d):
        lines.append(f"note: a and b have no linear terms; the blow-up of (a, b, z) is {NONNORMAL}")
    asserts = [
        check("quotient.equation_residual", "0", str(rep.equation_residual)),
        check("quotient.invariance_residuals", ["0", "0", "0"], [str(r) for r in rep.invariance_residuals]),
    ]
    return _emit(args, asserts, lines)


def cmd_blowup(args) -> int:
    d = _data(args)
    res = blowup_invariant(d)
    lines = [f"(a, b) = ({d.a}, {d.b}) over {d.field}", f"center length l = {res.center_length}"]
    for name, ch in res.charts.items():
        lines.append(f"{name}-chart in {', '.join(ch.vars)}:")
        lines.extend(f"    {r} = 0" for r in ch.relations)
    asserts = [check(f"blowup.consistency.{c}", True, chart_consistency_check(d, c).ok) for c in ("a", "b")]
    asserts.append(check("blowup.z_chart_empty", True, z_chart_exceptional_empty(d)))
    fib = exceptional_fiber_data(d)
    asserts.append(check("blowup.fiber_transition", True, fib.transition_ok))
    count = count_singular_chart_points(d)
    lines.append(f"singular points on the exceptional line: {count}")
    if is_normal(d):
        for c, var in (("a", "lambda"), ("b", "mu")):
            lines.append(f"{c}-chart regularity polynomial: {format_regularity_polynomial(d, c)}")
            cs = chart_singularities(d, c)
            for p in cs.points:
                slope = p.field.format(p.slope) if p.slope >= 0 else "?"
                lines.append(f"    {var} = {slope} (in {p.field}): nonsmoothness length {p.length}")
            lines.append(f"    total {cs.total_length}")
            asserts.append(check(f"blowup.roots_match.{c}", True, cs.roots_match))
    else:
        emb = has_embedded_component(d)
        lines.append(f"embedded component in the exceptional fiber: {emb.embedded}")
        asserts.append(check("blowup.embedded_witness", True, emb.witness_ok))
    return _emit(args, asserts, lines)


def cmd_tjurina(args) -> int:
    fld = _field(args.field)
    prec = args.precision or default_precision()
    f = _poly(args.poly, fld, tuple(args.vars), prec)
    if f.constant_term():
        raise DomainFailure("the polynomial does not vanish at the origin")
    tau = tjurina_number(f)
    print(tau if tau != INFINITE else "infinite")
    return EXIT_OK


def _load_graph(path: str) -> lattice.GraphFile:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseFailure(str(exc)) from None
    try:
        return lattice.parse_graph(text)
    except (lattice.LatticeError, ValueError) as exc:
        raise ParseFailure(f"{path}: {exc}") from None


def cmd_lattice(args) -> int:
    gf = _load_graph(args.graph)
    c = gf.config
    try:
        if args.action == "fundamental":
            z = lattice.fundamental_cycle(c)
            print(f"Z = {lattice.format_cycle(z)}  Z^2 = {lattice.self_intersection(c, z)}")
        elif args.action == "canonical":
            k = lattice.canonical_cycle(c)
            print(f"K = {lattice.format_cycle(k)}")
            print(f"minimally elliptic: {lattice.is_minimally_elliptic(c)}")
            if lattice.is_minimally_elliptic(c):
                print(f"multiplicity: {lattice.elliptic_multiplicity(c)}")
        elif args.action == "cartier":
            if not args.pairing:
                raise ParseFailure("cartier needs --pairing v1,v2,...")
            vec = _int_list(args.pairing)
            if len(vec) != c.n:
                raise ParseFailure(f"pairing vector needs {c.n} entries")
            r = lattice.numerically_cartier(c, vec)
            print(f"solution = {lattice.format_cycle(r.solution)}")
            print(f"integral: {r.integral}")
        elif args.action == "recognize":
            print(lattice.dynkin_recognize(c) or "not an ADE configuration")
        elif args.action == "remove":
            if not args.remove:
                raise ParseFailure("remove needs --remove label,...")
            comps = lattice.remove_labels(c, args.remove.split(","))
            for comp in comps:
                print(f"{','.join(comp.labels)}: {lattice.dynkin_recognize(comp) or '-'}")
        elif args.action == "blowup":
            if not args.on:
                raise ParseFailure("blowup needs --on <label>")
            print(lattice.format_graph(lattice.point_blowup(c, {c.index(args.on): 1}, args.label)), end="")
        for cyc in gf.cycles if args.action != "blowup" else []:
            v = lattice.cycle_vector(c, cyc)
            print(f"cycle {lattice.format_cycle(v)}: self-intersection {lattice.self_intersection(c, v)}, "
                  f"pairings {lattice.format_cycle(c.pairing_vector(v))}")
    except (lattice.LatticeError, ValueError) as exc:
        raise DomainFailure(str(exc)) from None
    return EXIT_OK


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",")]
    except ValueError:
        raise ParseFailure(f"expected comma separated integers, got {text!r}") from None


def cmd_serre(args) -> int:
    try:
        r = serre.sym_depth_report(serre.SymDepthQuery(args.g, args.n, args.p))
    except serre.SerreError as exc:
        raise DomainFailure(str(exc)) from None
    print(f"Sym^{args.n} of a smooth {args.g}-fold in characteristic {args.p}: dimension {r.query.dimension}")
    print(f"Cohen-Macaulay: {r.cohen_macaulay}")
    print(f"depth: {r.depth if r.depth is not None else 'unknown'}")
    print(f"(S_k) holds for k <= {r.guaranteed_level}"
          + (f"; fails for k >= {r.failing_level}" if r.failing_level else ""))
    for k in args.check or []:
        print(f"(S_{k}): {r.holds(k)}")
    for n in r.notes:
        print(f"note: {n}")
    return EXIT_OK


def cmd_scenario(args) -> int:
    from .kummer import GF16, ScenarioCase, ScenarioError, run_pipeline, stated_superspecial_lattice_note
    q = None
    if args.q is not None:
        try:
            q = GF16.parse(args.q)
        except ValueError as exc:
            raise ParseFailure(f"bad q {args.q!r}: {exc}") from None
    try:
        case = ScenarioCase(args.p_rank, args.a_number, q)
    except ScenarioError as exc:
        raise DomainFailure(str(exc)) from None
    rep = run_pipeline(case)
    if args.format == "records":
        return _emit(args, rep.assertions, [])
    print(rep.human())
    if case.superspecial:
        print("  note (informational, not asserted): " + stated_superspecial_lattice_note().human())
    return EXIT_OK if rep.ok else EXIT_FAIL


def cmd_verify_paper(args) -> int:
    from .acceptance import run_all
    from .rdp import RDPError
    only = _int_list(args.criteria) if args.criteria else None
    try:
        results, records = run_all(args.rdp_db, only)
    except (RDPError, OSError) as exc:
        raise ParseFailure(f"rdp database: {exc}") from None
    if args.format == "records":
        for a in records:
            print(a.record())
    else:
        for r in results:
            print(r.line())
            for a in r.assertions:
                if not a.passed:
                    print("    " + a.human())
    return EXIT_OK if all(a.passed for a in records) else EXIT_FAIL


# -- argument parsing ------------------------------------------------------------------------

def _add_data_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--a", required=True, help="series a(x, y)")
    p.add_argument("--b", required=True, help="series b(x, y)")
    p.add_argument("--field", default="2", help="coefficient field p^k (default 2)")
    p.add_argument("--precision", type=int, default=None, help="truncation order N")


def _add_format(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("human", "records"), default="human")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="charkummer", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("quotient", help="invariant equation of the involution given by (a, b)")
    _add_data_args(p)
    _add_format(p)
    p.set_defaults(func=cmd_quotient)

    p = sub.add_parser("blowup", help="charts and singular points of the blow-up of (a, b, z)")
    _add_data_args(p)
    _add_format(p)
    p.set_defaults(func=cmd_blowup)

    p = sub.add_parser("tjurina", help="Tjurina number of a hypersurface germ")
    p.add_argument("--poly", required=True)
    p.add_argument("--vars", default="xyz", help="variable names, one letter each (default xyz)")
    p.add_argument("--field", default="2")
    p.add_argument("--precision", type=int, default=None)
    p.set_defaults(func=cmd_tjurina)

    p = sub.add_parser("lattice", help="intersection lattice computations on a graph file")
    p.add_argument("action", choices=("fundamental", "canonical", "cartier", "recognize", "remove", "blowup"))
    p.add_argument("--graph", required=True)
    p.add_argument("--pairing", help="right-hand side for cartier, e.g. 2,0,0,0,0")
    p.add_argument("--remove", help="comma separated labels to delete")
    p.add_argument("--on", help="label of the curve carrying the blown-up point")
    p.add_argument("--label", default=None, help="label of the new curve")
    p.set_defaults(func=cmd_lattice)

    p = sub.add_parser("serre", help="depth of Sym^n of a smooth g-fold")
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--check", type=int, action="append", help="report (S_k) for this k")
    p.set_defaults(func=cmd_serre)

    p = sub.add_parser("scenario", help="singularities of A/{+-1} and its partial resolution")
    p.add_argument("--p-rank", type=int, required=True, choices=(0, 1, 2))
    p.add_argument("--a-number", type=int, default=None)
    p.add_argument("--q", default=None, help="element of GF(16): 0, 1 or g^j")
    _add_format(p)
    p.set_defaults(func=cmd_scenario)

    p = sub.add_parser("verify-paper", help="run the acceptance suite")
    _add_format(p)
    p.add_argument("--rdp-db", default=None, help="alternative RDP database file")
    p.add_argument("--criteria", default=None, help="comma separated criterion numbers")
    p.set_defaults(func=cmd_verify_paper)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except DomainFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except BrokenPipeError:
        # output piped into e.g. head; silence the flush at interpreter exit
        devnull = os.open(os.devnull, os.O_WRONLY)
        os.dup2(devnull, sys.stdout.fileno())
        return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
