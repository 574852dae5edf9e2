"""Exact cohomology and topological complexity of spatial polygon spaces."""

__version__ = "0.1.0"
