"""Finite fields and truncated power series."""

from .field import CONWAY_2, GF, FieldElement, FieldError, field, parse_field_spec
from .grammar import ParseError, format_series, parse_polynomial
from .series import (
    SeriesError,
    TruncatedSeries,
    jacobian_minors,
    partial_derivative,
    series_arith,
    substitute,
    variables,
)
from .implicit import ImplicitSolution, solve_implicit_pair

__all__ = [
    "CONWAY_2", "GF", "FieldElement", "FieldError", "field", "parse_field_spec",
    "ParseError", "format_series", "parse_polynomial",
    "SeriesError", "TruncatedSeries", "jacobian_minors", "partial_derivative",
    "series_arith", "substitute", "variables",
    "ImplicitSolution", "solve_implicit_pair",
]
