"""Canonical disjunctive databases for the repairs of inconsistent databases."""

__version__ = "0.1.0"
