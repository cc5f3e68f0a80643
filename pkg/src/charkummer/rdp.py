"""Rational double points in characteristic 2: a small database keyed by
Dynkin type and Tjurina number."""

from __future__ import annotations

import shlex
from dataclasses import dataclass, field as dc_field
from importlib import resources
from pathlib import Path
from typing import Iterator

from .involution import InvolutionData, invariant_equation
from .localring import tjurina_number
from .seriescalc.field import field as get_field
from .seriescalc.grammar import parse_polynomial
from .seriescalc.series import TruncatedSeries

FORMAT = "charkummer-rdp"
VERSION = 1
XYZ = ("x", "y", "z")
TJURINA_PRECISION = 24


class RDPError(ValueError):
    pass


@dataclass(frozen=True)
class RDPClass:
    name: str
    family: str
    index: int
    coindex: int | None = None
    equation: str | None = None
    tau: int | None = None
    provenance: str = "PAPER"
    pi1_order2: bool | None = None
    data: tuple[str, str] | None = None

    @property
    def dynkin(self) -> str:
        return f"{self.family}{self.index}"

    def polynomial(self, prec: int = TJURINA_PRECISION) -> TruncatedSeries:
        if self.equation is None:
            raise RDPError(f"{self.name} has no stored equation")
        return parse_polynomial(self.equation, get_field(2, 1), XYZ, prec)

    def involution_data(self, prec: int = 12) -> InvolutionData | None:
        if self.data is None:
            return None
        return InvolutionData.parse(self.data[0], self.data[1], get_field(2, 1), prec)


@dataclass
class SelfCheck:
    name: str
    stored: int | None
    computed: int | None
    ok: bool
    message: str = ""


@dataclass
class RDPDatabase:
    classes: list[RDPClass]
    checks: list[SelfCheck] = dc_field(default_factory=list)
    source: str = ""

    def by_name(self, name: str) -> RDPClass:
        for c in self.classes:
            if c.name == name:
                return c
        raise RDPError(f"no class {name!r} in the database")

    @property
    def consistent(self) -> bool:
        return all(c.ok for c in self.checks)


def default_database_path() -> Path:
    return Path(str(resources.files("charkummer") / "data" / "rdp_classes.txt"))


def parse_database(text: str, source: str = "<string>") -> list[RDPClass]:
    classes = []
    header_seen = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip() if not raw.lstrip().startswith("#") else ""
        if not line:
            continue
        try:
            toks = shlex.split(line)
        except ValueError as exc:
            raise RDPError(f"{source}:{lineno}: {exc}") from None
        if toks[0].startswith("format="):
            kv = dict(t.split("=", 1) for t in toks)
            if kv.get("format") != FORMAT or kv.get("version") != str(VERSION):
                raise RDPError(f"{source}:{lineno}: unsupported database format {kv}")
            header_seen = True
            continue
        if toks[0] != "class":
            raise RDPError(f"{source}:{lineno}: expected a class record")
        if not header_seen:
            raise RDPError(f"{source}: missing format header")
        kv = {}
        for t in toks[1:]:
            if "=" not in t:
                raise RDPError(f"{source}:{lineno}: bad field {t!r}")
            k, v = t.split("=", 1)
            kv[k] = v
        try:
            data = tuple(kv["data"].split(";")) if "data" in kv else None
            classes.append(RDPClass(
                name=kv["name"],
                family=kv["family"],
                index=int(kv["index"]),
                coindex=int(kv["coindex"]) if "coindex" in kv else None,
                equation=kv.get("equation"),
                tau=int(kv["tau"]) if "tau" in kv else None,
                provenance=kv.get("provenance", "PAPER"),
                pi1_order2=(kv["pi1_order2"] == "true") if "pi1_order2" in kv else None,
                data=data,
            ))
        except (KeyError, ValueError) as exc:
            raise RDPError(f"{source}:{lineno}: bad record ({exc})") from None
        c = classes[-1]
        if c.family not in ("A", "D", "E") or c.index < 1:
            raise RDPError(f"{source}:{lineno}: no Dynkin type {c.family}{c.index}")
        if (c.coindex is None) != (c.family == "A"):
            raise RDPError(f"{source}:{lineno}: coindex is required for D and E, and absent for A")
        if c.provenance not in ("PAPER", "DERIVED"):
            raise RDPError(f"{source}:{lineno}: unknown provenance {c.provenance!r}")
    if not header_seen:
        raise RDPError(f"{source}: missing format header")
    return classes


def self_check(classes: list[RDPClass]) -> list[SelfCheck]:
    """Recompute tau for every class with an equation; check the stored
    involution data reproduces the stored equation."""
    out = []
    for c in classes:
        if c.equation is None:
            continue
        computed = tjurina_number(c.polynomial())
        computed = None if computed == float("inf") else int(computed)
        ok = computed == c.tau
        msg = "" if ok else f"stored tau {c.tau} but computed {computed}"
        if c.data is not None:
            d = c.involution_data(TJURINA_PRECISION)
            if invariant_equation(d, TJURINA_PRECISION) != c.polynomial():
                ok = False
                msg = (msg + "; " if msg else "") + "involution data does not reproduce the equation"
        out.append(SelfCheck(c.name, c.tau, computed, ok, msg))
    return out


_CACHE: dict[str, RDPDatabase] = {}


def load_database(path: str | Path | None = None) -> RDPDatabase:
    p = Path(path) if path is not None else default_database_path()
    key = str(p.resolve())
    if key not in _CACHE:
        classes = parse_database(p.read_text(encoding="utf-8"), str(p))
        _CACHE[key] = RDPDatabase(classes, self_check(classes), key)
    return _CACHE[key]


def d_family_equation(r: int) -> str:
    return f"z^2 + x*y^{r}*z + x*y^{2 * r} + x^2*y" if r > 1 else "z^2 + x*y*z + x*y^2 + x^2*y"


def involution_quotient_classes(max_r: int = 3, db: RDPDatabase | None = None) -> Iterator[RDPClass]:
    """D_{4r}^r for r = 1..max_r (from (a, b) = (x, y^r)) followed by E_8^2."""
    db = db or load_database()
    names = {c.name: c for c in db.classes}
    for r in range(1, max_r + 1):
        name = f"D{4 * r}^{r}"
        if name in names:
            yield names[name]
            continue
        eq = d_family_equation(r)
        tau = tjurina_number(parse_polynomial(eq, get_field(2, 1), XYZ, TJURINA_PRECISION))
        yield RDPClass(name, "D", 4 * r, r, eq, int(tau), "DERIVED", None, ("x", f"y^{r}" if r > 1 else "y"))
    yield names["E8^2"]


def tjurina_of_class(c: RDPClass) -> int:
    if c.equation is not None:
        tau = tjurina_number(c.polynomial())
        if tau == float("inf"):
            raise RDPError(f"{c.name}: equation is not an isolated singularity")
        return int(tau)
    if c.tau is not None:
        return c.tau
    raise RDPError(f"{c.name} has neither a stored Tjurina number nor an equation")


@dataclass
class Ambiguous:
    dynkin: str
    tau: int
    candidates: list[RDPClass]

    def __str__(self) -> str:
        names = ", ".join(c.name for c in self.candidates) or "none"
        return f"ambiguous ({self.dynkin}, tau={self.tau}): candidates {names}"


def classify_by_tjurina(tau: int, dynkin: str, db: RDPDatabase | None = None) -> RDPClass | Ambiguous:
    db = db or load_database()
    if tau == float("inf"):
        raise RDPError("Tjurina number must be finite")
    cands = [c for c in db.classes if c.dynkin == dynkin and c.tau == tau]
    if len(cands) == 1:
        return cands[0]
    return Ambiguous(dynkin, tau, cands)


def collisions(db: RDPDatabase) -> list[tuple[str, int]]:
    seen: dict[tuple[str, int], str] = {}
    out = []
    for c in db.classes:
        key = (c.dynkin, c.tau)
        if key in seen:
            out.append(key)
        seen[key] = c.name
    return out
