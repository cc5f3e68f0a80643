"""Exact computations for wild involution quotients in characteristic 2."""

__version__ = "0.1.0"
