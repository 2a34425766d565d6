"""Builders and numerical verifiers for transitive bounded-degree 2-dimensional expander complexes."""

__version__ = "0.1.0"
