from __future__ import annotations

from hypothesis import settings, strategies as st

from charkummer.seriescalc.field import field
from charkummer.seriescalc.series import TruncatedSeries

settings.register_profile("default", max_examples=40, deadline=None, derandomize=True)
settings.load_profile("default")

FIELDS = [field(2, 1), field(2, 2), field(2, 4), field(3, 1), field(3, 2), field(5, 1)]


def fields():
    return st.sampled_from(FIELDS)


@st.composite
def elements(draw, fld):
    return draw(st.integers(0, fld.order - 1))


@st.composite
def series(draw, fld, vars=("x", "y"), prec=6, min_order=0, max_terms=5):
    exps = st.tuples(*[st.integers(0, prec - 1) for _ in vars]).filter(
        lambda e: min_order <= sum(e) < prec)
    terms = draw(st.dictionaries(exps, st.integers(1, fld.order - 1), max_size=max_terms))
    return TruncatedSeries(fld, vars, terms, prec)


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    lines = getattr(mod, "LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
