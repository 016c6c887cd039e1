"""Exact bijective analysis of online algorithms on small discrete metrics."""

__version__ = "0.1.0"
