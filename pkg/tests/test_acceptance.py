"""Acceptance criteria 1-15, one test each, with one PASS/FAIL line per criterion."""

from __future__ import annotations

import time

import pytest

from charkummer.acceptance import CRITERIA, CriterionResult, database_checks, run_criterion

PER_CRITERION_SECONDS = 5.0
SUITE_SECONDS = 60.0

KNOWN_RED = {
    11: ("for q in F4* no automorphism with f o phi = g exists mod m^8 (exact GF(2)-linear "
         "decision over GF(16)); the rings are isomorphic via multiplication by a unit"),
}

_elapsed: list[float] = []
LINES: list[str] = []   # collected for the terminal summary (see conftest)


def _report(res: CriterionResult) -> None:
    LINES.append(res.line())
    print()
    print(res.line())
    for a in res.assertions:
        if not a.passed:
            print("    " + a.human())


def test_database_self_checks():
    t = time.perf_counter()
    checks = database_checks()
    res = CriterionResult(0, "RDP database self-checks", checks, time.perf_counter() - t)
    _report(res)
    assert res.passed


@pytest.mark.parametrize("number", [
    pytest.param(n, id=f"criterion_{n:02d}",
                 marks=[pytest.mark.xfail(strict=True, reason=KNOWN_RED[n])] if n in KNOWN_RED else [])
    for n, _, _ in CRITERIA
])
def test_criterion(number):
    res = run_criterion(number)
    _elapsed.append(res.seconds)
    _report(res)
    assert res.seconds < PER_CRITERION_SECONDS
    assert res.passed


def test_known_red_is_confined():
    # the red criterion fails only on its right-equivalence records and keeps its contact records green
    res = run_criterion(11)
    assert len(res.assertions) == 4
    red = sorted(a.id for a in res.assertions if not a.passed)
    assert red == ["c11.right_equivalence.q=1", "c11.right_equivalence.q=gen_gf4"]
    assert all("no_automorphism" in str(a.got) for a in res.assertions if not a.passed)


def test_suite_budget():
    if len(_elapsed) < len(CRITERIA):
        pytest.skip("criteria were not all run in this session")
    assert sum(_elapsed) < SUITE_SECONDS
