"""Exact computations around Kazhdan-Lusztig theory and combinatorial Hodge theory."""

__version__ = "0.1.0"
