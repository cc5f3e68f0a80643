"""Configurations of exceptional curves on a resolved surface.

A configuration is a symmetric intersection matrix (self-intersections on
the diagonal, intersection multiplicities off it) plus chi(O_E) per curve.
All arithmetic is exact (ints and Fractions).
"""

from __future__ import annotations

import itertools
import random
import shlex
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence


class LatticeError(ValueError):
    pass


@dataclass(frozen=True)
class CurveConfig:
    self_ints: tuple[int, ...]
    mult: tuple[tuple[int, ...], ...]          # symmetric, zero diagonal
    chi: tuple[int, ...] = ()
    labels: tuple[str, ...] = ()

    def __post_init__(self):
        n = len(self.self_ints)
        if not self.chi:
            object.__setattr__(self, "chi", (1,) * n)
        if not self.labels:
            object.__setattr__(self, "labels", tuple(str(i + 1) for i in range(n)))
        if len(self.chi) != n or len(self.labels) != n or len(self.mult) != n:
            raise LatticeError("inconsistent configuration sizes")
        for i in range(n):
            if len(self.mult[i]) != n or self.mult[i][i] != 0:
                raise LatticeError("multiplicity matrix must be square with zero diagonal")
            for j in range(n):
                if self.mult[i][j] != self.mult[j][i] or self.mult[i][j] < 0:
                    raise LatticeError("intersection multiplicities must be symmetric and nonnegative")

    @classmethod
    def from_edges(cls, self_ints: Sequence[int], edges: Iterable[tuple[int, int, int]] | Iterable[tuple[int, int]],
                   chi: Sequence[int] = (), labels: Sequence[str] = ()) -> "CurveConfig":
        """Edges as 0-based (i, j) or (i, j, multiplicity)."""
        n = len(self_ints)
        m = [[0] * n for _ in range(n)]
        for e in edges:
            i, j = e[0], e[1]
            k = e[2] if len(e) > 2 else 1
            if i == j:
                raise LatticeError("self-loops are not allowed")
            m[i][j] = m[j][i] = k
        return cls(tuple(self_ints), tuple(tuple(r) for r in m), tuple(chi), tuple(labels))

    @property
    def n(self) -> int:
        return len(self.self_ints)

    def matrix(self) -> list[list[int]]:
        return [[self.self_ints[i] if i == j else self.mult[i][j] for j in range(self.n)] for i in range(self.n)]

    def dot(self, z1: Sequence, z2: Sequence):
        M = self.matrix()
        return sum(z1[i] * M[i][j] * z2[j] for i in range(self.n) for j in range(self.n))

    def pairing_vector(self, z: Sequence) -> list:
        """(Z.E_1, ..., Z.E_n)."""
        M = self.matrix()
        return [sum(M[i][j] * z[j] for j in range(self.n)) for i in range(self.n)]

    def edges(self) -> list[tuple[int, int, int]]:
        return [(i, j, self.mult[i][j]) for i in range(self.n) for j in range(i + 1, self.n) if self.mult[i][j]]

    def is_connected(self) -> bool:
        if self.n == 0:
            return False
        seen = {0}
        stack = [0]
        while stack:
            i = stack.pop()
            for j in range(self.n):
                if self.mult[i][j] and j not in seen:
                    seen.add(j)
                    stack.append(j)
        return len(seen) == self.n

    def relabel(self, perm: Sequence[int]) -> "CurveConfig":
        """New config whose curve k is old curve perm[k]."""
        return CurveConfig(
            tuple(self.self_ints[p] for p in perm),
            tuple(tuple(self.mult[p][q] for q in perm) for p in perm),
            tuple(self.chi[p] for p in perm),
            tuple(self.labels[p] for p in perm),
        )

    def index(self, label: str) -> int:
        return self.labels.index(label)


# -- exact linear algebra -------------------------------------------------------

def leading_minors(M: Sequence[Sequence[int]]) -> list[int]:
    """Leading principal minors by fraction-free (Bareiss) elimination.

    Stops at the first vanishing minor (later entries omitted).
    """
    n = len(M)
    a = [list(r) for r in M]
    minors = []
    prev = 1
    for k in range(n):
        piv = a[k][k]
        minors.append(piv)
        if piv == 0:
            break
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * piv - a[i][k] * a[k][j]) // prev
        prev = piv
    return minors


def determinant(M: Sequence[Sequence[int]]) -> Fraction:
    n = len(M)
    a = [[Fraction(x) for x in r] for r in M]
    det = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if a[r][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            det = -det
        det *= a[c][c]
        for r in range(c + 1, n):
            f = a[r][c] / a[c][c]
            if f:
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return det


def solve(M: Sequence[Sequence[int]], rhs: Sequence) -> list[Fraction]:
    n = len(M)
    a = [[Fraction(x) for x in r] + [Fraction(b)] for r, b in zip(M, rhs)]
    for c in range(n):
        p = next((r for r in range(c, n) if a[r][c] != 0), None)
        if p is None:
            raise LatticeError("intersection matrix is singular")
        a[c], a[p] = a[p], a[c]
        piv = a[c][c]
        a[c] = [x / piv for x in a[c]]
        for r in range(n):
            if r != c and a[r][c]:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return [a[i][n] for i in range(n)]


def is_negative_definite(c: CurveConfig) -> bool:
    if c.n == 0:
        return True
    minors = leading_minors(c.matrix())
    if len(minors) < c.n:
        return False
    return all((m < 0) if k % 2 == 0 else (m > 0) for k, m in enumerate(minors))


# -- cycles ----------------------------------------------------------------------

def fundamental_cycle(c: CurveConfig, order: Sequence[int] | None = None) -> tuple[int, ...]:
    """Laufer's algorithm from Z = sum E_i.

    While some Z.E_j > 0, add E_j; ``order`` fixes which such j is taken
    first (default: smallest index).
    """
    if not c.is_connected():
        raise LatticeError("fundamental cycle needs a connected configuration")
    if not is_negative_definite(c):
        raise LatticeError("fundamental cycle needs a negative definite configuration")
    order = list(order) if order is not None else list(range(c.n))
    M = c.matrix()
    z = [1] * c.n
    pair = [sum(M[i][j] for j in range(c.n)) for i in range(c.n)]
    while True:
        j = next((j for j in order if pair[j] > 0), None)
        if j is None:
            return tuple(z)
        z[j] += 1
        for i in range(c.n):
            pair[i] += M[i][j]


def self_intersection(c: CurveConfig, z: Sequence) -> int | Fraction:
    return c.dot(z, z)


def canonical_cycle(c: CurveConfig) -> tuple[Fraction, ...]:
    """K = sum d_i E_i with K.E_i + E_i^2 = -2 chi(O_{E_i})."""
    rhs = [-c.self_ints[i] - 2 * c.chi[i] for i in range(c.n)]
    return tuple(solve(c.matrix(), rhs))


def is_minimally_elliptic(c: CurveConfig) -> bool:
    """Fundamental cycle equals minus the canonical cycle, exactly."""
    z = fundamental_cycle(c)
    k = canonical_cycle(c)
    return all(Fraction(-zi) == ki for zi, ki in zip(z, k))


def elliptic_multiplicity(c: CurveConfig) -> int:
    if not is_minimally_elliptic(c):
        raise LatticeError("configuration is not minimally elliptic")
    z = fundamental_cycle(c)
    return max(2, -self_intersection(c, z))


@dataclass(frozen=True)
class CartierResult:
    integral: bool
    solution: tuple[Fraction, ...]


def numerically_cartier(c: CurveConfig, pairing: Sequence[int]) -> CartierResult:
    if not is_negative_definite(c):
        raise LatticeError("numerical pullback needs a negative definite configuration")
    x = tuple(solve(c.matrix(), pairing))
    return CartierResult(all(v.denominator == 1 for v in x), x)


# -- surgery ----------------------------------------------------------------------

def point_blowup(c: CurveConfig, through: Mapping[int, int], label: str | None = None) -> CurveConfig:
    """Blow up a point lying on the listed curves (index -> multiplicity).

    A new (-1)-curve is appended meeting each listed curve with the given
    multiplicity, and each listed self-intersection drops by mult^2.  Only
    points on at most one curve are supported.
    """
    if len(through) > 1:
        raise LatticeError("only centers on a single curve (or on none) are supported")
    for i, m in through.items():
        if m < 1:
            raise LatticeError("multiplicities must be positive")
        if not 0 <= i < c.n:
            raise LatticeError(f"no curve {i}")
    n = c.n
    self_ints = list(c.self_ints) + [-1]
    mult = [list(r) + [0] for r in c.mult] + [[0] * (n + 1)]
    for i, m in through.items():
        self_ints[i] -= m * m
        mult[i][n] = mult[n][i] = m
    return CurveConfig(tuple(self_ints), tuple(tuple(r) for r in mult), tuple(c.chi) + (1,),
                       tuple(c.labels) + (label or str(n + 1),))


def subconfig(c: CurveConfig, keep: Sequence[int]) -> CurveConfig:
    keep = list(keep)
    return CurveConfig(
        tuple(c.self_ints[i] for i in keep),
        tuple(tuple(c.mult[i][j] for j in keep) for i in keep),
        tuple(c.chi[i] for i in keep),
        tuple(c.labels[i] for i in keep),
    )


def remove_curves(c: CurveConfig, subset: Iterable[int]) -> list[CurveConfig]:
    """Connected components of the configuration without ``subset``."""
    drop = set(subset)
    rest = [i for i in range(c.n) if i not in drop]
    comps = []
    seen: set[int] = set()
    for s in rest:
        if s in seen:
            continue
        comp = []
        stack = [s]
        seen.add(s)
        while stack:
            i = stack.pop()
            comp.append(i)
            for j in rest:
                if c.mult[i][j] and j not in seen:
                    seen.add(j)
                    stack.append(j)
        comps.append(subconfig(c, sorted(comp)))
    return comps


def remove_labels(c: CurveConfig, labels: Iterable[str]) -> list[CurveConfig]:
    return remove_curves(c, [c.index(str(l)) for l in labels])


# -- Dynkin diagrams -----------------------------------------------------------------

def dynkin_graph(kind: str, n: int | None = None) -> CurveConfig:
    """ADE graph with Bourbaki numbering; labels are "1".."n"."""
    kind, n = _split_type(kind, n)
    if kind == "A":
        if n < 1:
            raise LatticeError("A_n needs n >= 1")
        edges = [(i, i + 1) for i in range(n - 1)]
    elif kind == "D":
        if n < 4:
            raise LatticeError("D_n needs n >= 4")
        edges = [(i, i + 1) for i in range(n - 2)] + [(n - 3, n - 1)]
    elif kind == "E":
        if n not in (6, 7, 8):
            raise LatticeError("E_n needs n in 6, 7, 8")
        edges = [(0, 2), (1, 3)] + [(i, i + 1) for i in range(2, n - 1)]
    else:
        raise LatticeError(f"unknown Dynkin type {kind!r}")
    return CurveConfig.from_edges([-2] * n, edges)


def _split_type(kind: str, n: int | None) -> tuple[str, int]:
    kind = kind.strip()
    if n is None:
        if len(kind) < 2 or not kind[1:].isdigit():
            raise LatticeError(f"bad Dynkin type {kind!r}")
        return kind[0].upper(), int(kind[1:])
    return kind.upper(), n


def dynkin_recognize(c: CurveConfig) -> str | None:
    """"A5", "D7", "E8", ... or None."""
    n = c.n
    if n == 0:
        return None
    if any(s != -2 for s in c.self_ints) or any(x != 1 for x in c.chi):
        return None
    if any(m > 1 for row in c.mult for m in row):
        return None
    edges = c.edges()
    if len(edges) != n - 1 or not c.is_connected():
        return None
    deg = [sum(1 for j in range(n) if c.mult[i][j]) for i in range(n)]
    if max(deg, default=0) <= 2:
        return f"A{n}"
    branch = [i for i in range(n) if deg[i] >= 3]
    if len(branch) != 1 or deg[branch[0]] != 3:
        return None
    center = branch[0]
    arms = []
    for start in (j for j in range(n) if c.mult[center][j]):
        length, prev, cur = 1, center, start
        while True:
            nxt = [j for j in range(n) if c.mult[cur][j] and j != prev]
            if not nxt:
                break
            prev, cur = cur, nxt[0]
            length += 1
        arms.append(length)
    arms.sort()
    if arms[0] == 1 and arms[1] == 1:
        return f"D{n}"
    if arms[0] == 1 and arms[1] == 2 and arms[2] in (2, 3, 4):
        return f"E{n}"
    return None


# -- constraint search -----------------------------------------------------------------

SEARCH_LIMIT = 2_000_000


def constraint_search(n: int, self_ints: Sequence[int], chi_options: Sequence[int] = (1,),
                      target_z: Sequence[int] | None = None, target_z2: int | None = None,
                      require_minimally_elliptic: bool = False, max_mult: int = 2) -> list[CurveConfig]:
    """All configurations with the given self-intersections satisfying the
    constraints, in lexicographic order of the adjacency matrix."""
    if n > 7:
        raise LatticeError("constraint search is limited to n <= 7")
    if max_mult > 2:
        raise LatticeError("multiplicities are searched up to 2")
    if any(x not in (0, 1) for x in chi_options):
        raise LatticeError("chi options must be 0 or 1")
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    if target_z is None and (max_mult + 1) ** len(pairs) * len(chi_options) ** n > SEARCH_LIMIT:
        raise LatticeError("search space beyond bounds; supply a target cycle")
    # with a target Z, Z.E_i <= 0 bounds sum_j m_ij Z_j by -Z_i E_i^2
    budget = [(-target_z[i] * self_ints[i]) if target_z is not None else None for i in range(n)]
    used = [0] * n
    m = [[0] * n for _ in range(n)]
    found: list[CurveConfig] = []

    def accept():
        base = CurveConfig(tuple(self_ints), tuple(tuple(r) for r in m))
        if not base.is_connected() or not is_negative_definite(base):
            return
        z = fundamental_cycle(base)
        if target_z is not None and tuple(z) != tuple(target_z):
            return
        if target_z2 is not None and self_intersection(base, z) != target_z2:
            return
        for chi in itertools.product(chi_options, repeat=n):
            cfg = CurveConfig(base.self_ints, base.mult, tuple(chi))
            if require_minimally_elliptic and not is_minimally_elliptic(cfg):
                continue
            found.append(cfg)

    def rec(k: int):
        if k == len(pairs):
            accept()
            return
        i, j = pairs[k]
        for v in range(max_mult + 1):
            if budget[i] is not None:
                if used[i] + v * target_z[j] > budget[i] or used[j] + v * target_z[i] > budget[j]:
                    break
            m[i][j] = m[j][i] = v
            if budget[i] is not None:
                used[i] += v * target_z[j]
                used[j] += v * target_z[i]
            rec(k + 1)
            if budget[i] is not None:
                used[i] -= v * target_z[j]
                used[j] -= v * target_z[i]
        m[i][j] = m[j][i] = 0

    rec(0)
    found.sort(key=lambda c: (c.mult, c.chi))
    return found


# -- graph files ---------------------------------------------------------------------------

@dataclass
class GraphFile:
    config: CurveConfig
    cycles: list[dict[str, int]] = dc_field(default_factory=list)


def _kv(tok: str, key: str, lineno: int) -> int:
    if not tok.startswith(key + "="):
        raise LatticeError(f"line {lineno}: expected {key}=<int>, got {tok!r}")
    try:
        return int(tok[len(key) + 1:])
    except ValueError:
        raise LatticeError(f"line {lineno}: {key} must be an integer") from None


def parse_graph(text: str) -> GraphFile:
    labels: list[str] = []
    self_ints: list[int] = []
    chis: list[int] = []
    edges: dict[frozenset, int] = {}
    cycles = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = shlex.split(line)
        kind = toks[0]
        if kind == "curve":
            if len(toks) < 3:
                raise LatticeError(f"line {lineno}: curve <label> self=<int> [chi=<int>]")
            label = toks[1]
            if label in labels:
                raise LatticeError(f"line {lineno}: duplicate curve {label!r}")
            labels.append(label)
            self_ints.append(_kv(toks[2], "self", lineno))
            chis.append(_kv(toks[3], "chi", lineno) if len(toks) > 3 else 1)
        elif kind == "edge":
            if len(toks) not in (3, 4):
                raise LatticeError(f"line {lineno}: edge <label> <label> [mult=<int>]")
            a, b = toks[1], toks[2]
            if a == b:
                raise LatticeError(f"line {lineno}: self-loop on {a!r}")
            for l in (a, b):
                if l not in labels:
                    raise LatticeError(f"line {lineno}: unknown curve {l!r}")
            key = frozenset((a, b))
            if key in edges:
                raise LatticeError(f"line {lineno}: duplicate edge {a} {b}")
            edges[key] = _kv(toks[3], "mult", lineno) if len(toks) == 4 else 1
            if edges[key] < 0:
                raise LatticeError(f"line {lineno}: negative multiplicity")
        elif kind == "cycle":
            cyc = {}
            for tok in toks[1:]:
                if "=" not in tok:
                    raise LatticeError(f"line {lineno}: expected <label>=<int>")
                l, v = tok.split("=", 1)
                if l not in labels:
                    raise LatticeError(f"line {lineno}: unknown curve {l!r}")
                cyc[l] = int(v)
            cycles.append(cyc)
        else:
            raise LatticeError(f"line {lineno}: unknown directive {kind!r}")
    idx = {l: i for i, l in enumerate(labels)}
    cfg = CurveConfig.from_edges(self_ints, [(idx[a], idx[b], m) for (a, b), m in
                                             ((tuple(sorted(k, key=idx.get)), m) for k, m in edges.items())],
                                 chis, labels)
    return GraphFile(cfg, cycles)


def format_graph(c: CurveConfig) -> str:
    lines = [f"curve {l} self={s} chi={x}" for l, s, x in zip(c.labels, c.self_ints, c.chi)]
    lines += [f"edge {c.labels[i]} {c.labels[j]} mult={m}" for i, j, m in c.edges()]
    return "\n".join(lines) + "\n"


def cycle_vector(c: CurveConfig, cycle: Mapping[str, int]) -> list[int]:
    return [cycle.get(l, 0) for l in c.labels]


def format_cycle(z: Sequence) -> str:
    return ",".join(str(v) for v in z)


def random_relabeling(c: CurveConfig, rng: random.Random) -> CurveConfig:
    perm = list(range(c.n))
    rng.shuffle(perm)
    return c.relabel(perm)


# -- the configurations from the supersingular Kummer computation -------------------------

def star_config(center_self: int = -2, leaf_self: Sequence[int] = (-3, -2, -2, -2)) -> CurveConfig:
    """Curve 2 in the middle meeting curves 1, 3, 4, 5 once each."""
    s = [leaf_self[0], center_self, *leaf_self[1:]]
    return CurveConfig.from_edges(s, [(1, 0), (1, 2), (1, 3), (1, 4)], labels=("C1", "C2", "C3", "C4", "C5"))
