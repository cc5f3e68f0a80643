"""Depth and Serre-condition verdicts for symmetric products Sym^n(X).

X is a smooth variety of dimension g over a field of characteristic p
(p = 0 or prime).  Sym^n(X) has dimension ng.  The rules encoded here:

* Sym^n(X) is Cohen-Macaulay when p = 0 or p > n, and trivially when
  n <= 1 or g <= 1 (then it is smooth); also for g = 2, n = 2 (surfaces).
* It is not Cohen-Macaulay when g >= 3 and 0 < p <= n.
* It always satisfies (S_{g+2}).
* For p = 2, n = 2, g >= 3 its depth is 2 + g (two plus the number of
  irreducible representations of the involution on the tangent space), so
  (S_{g+3}) fails.
* For max(3, p) <= n < 2p its depth is min(g + 2, ng), so (S_{g+3}) fails
  (when g + 3 <= ng) and the singularities are canonical but not rational.

Anything else is reported as undetermined.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

UNDETERMINED = "UNDETERMINED"


class SerreError(ValueError):
    pass


def _is_prime(n: int) -> bool:
    return n >= 2 and all(n % d for d in range(2, int(n ** 0.5) + 1))


@dataclass(frozen=True)
class SymDepthQuery:
    g: int
    n: int
    p: int

    def __post_init__(self):
        if self.g < 1:
            raise SerreError("dimension g must be >= 1")
        if self.n < 0:
            raise SerreError("n must be >= 0")
        if self.p != 0 and not _is_prime(self.p):
            raise SerreError(f"characteristic {self.p} is neither 0 nor prime")

    @property
    def dimension(self) -> int:
        return self.n * self.g


@dataclass
class SymDepthReport:
    query: SymDepthQuery
    cohen_macaulay: bool | str          # True, False or UNDETERMINED
    guaranteed_level: int               # (S_k) holds for this k
    failing_level: int | None           # smallest k with (S_k) known to fail
    depth: int | None                   # exact depth at the worst point, if known
    notes: list[str] = dc_field(default_factory=list)

    def holds(self, k: int) -> bool | str:
        # (S_k) asks depth >= min(k, dim), so it holds for every k once the
        # guaranteed level reaches the dimension
        if k <= self.guaranteed_level or self.guaranteed_level >= self.query.dimension:
            return True
        if self.failing_level is not None and k >= self.failing_level:
            return False
        return UNDETERMINED


def ellingsrud_skjelbred_depth(num_irreducible_reps: int) -> int:
    if num_irreducible_reps < 0:
        raise SerreError("number of representations must be nonnegative")
    return 2 + num_irreducible_reps


def kemper_depth(g: int, n: int, p: int) -> int:
    if not (max(3, p) <= n < 2 * p):
        raise SerreError(f"requires max(3, p) <= n < 2p, got n={n}, p={p}")
    return min(g + 2, n * g)


def _cm_verdict(q: SymDepthQuery) -> bool | str:
    g, n, p = q.g, q.n, q.p
    if p == 0 or p > n:
        return True
    if n <= 1 or g <= 1:
        return True
    if g == 2 and n == 2:
        return True
    if g >= 3 and n >= p > 0:
        return False
    return UNDETERMINED


def sym_depth_report(q: SymDepthQuery) -> SymDepthReport:
    g, n, p = q.g, q.n, q.p
    dim = q.dimension
    cm = _cm_verdict(q)
    notes = []
    depth = None
    if cm is True:
        depth = dim
        notes.append("Cohen-Macaulay: depth equals dimension")
    elif p == 2 and n == 2 and g >= 3:
        depth = ellingsrud_skjelbred_depth(g)
        notes.append(f"depth 2 + g = {depth} from the {g} irreducible summands of the tangent representation")
    elif p > 0 and max(3, p) <= n < 2 * p:
        depth = kemper_depth(g, n, p)
        notes.append(f"depth min(g + 2, ng) = {depth}")
        notes.append("singularities are canonical but not rational")
    # (S_k) holds iff depth >= min(k, dim) at every point
    if cm is True:
        guaranteed = dim
        failing = None
    elif depth is not None:
        guaranteed = depth
        failing = depth + 1 if depth < dim else None
    else:
        guaranteed = min(g + 2, dim)
        failing = None
    return SymDepthReport(q, cm, guaranteed, failing, depth, notes)


@dataclass
class GridIssue:
    query: SymDepthQuery
    message: str


def grid_consistency(gs=range(1, 7), ns=range(0, 9), ps=(0, 2, 3, 5, 7)) -> list[GridIssue]:
    """Internal contradictions over a grid of queries (empty list = clean)."""
    issues = []
    for g in gs:
        for n in ns:
            for p in ps:
                q = SymDepthQuery(g, n, p)
                r = sym_depth_report(q)
                dim = q.dimension
                if r.guaranteed_level > max(dim, 0) and dim > 0:
                    issues.append(GridIssue(q, "guaranteed level exceeds the dimension"))
                if r.guaranteed_level < min(g + 2, dim):
                    issues.append(GridIssue(q, "guaranteed level below g + 2"))
                if r.cohen_macaulay is True and r.failing_level is not None and r.failing_level <= dim:
                    issues.append(GridIssue(q, "Cohen-Macaulay but some (S_k), k <= dim, fails"))
                if r.cohen_macaulay is False and r.failing_level is None and r.depth is not None:
                    issues.append(GridIssue(q, "not Cohen-Macaulay but no failing level"))
                if r.depth is not None:
                    if (r.depth >= dim) != (r.cohen_macaulay is True):
                        issues.append(GridIssue(q, "exact depth disagrees with the Cohen-Macaulay verdict"))
                    if r.depth < r.guaranteed_level:
                        issues.append(GridIssue(q, "exact depth below the guaranteed level"))
    return issues
