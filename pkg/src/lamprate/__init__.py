"""Lamplighter random walks: exact metrics, TSP lengths and rate-of-escape estimation."""

__version__ = "0.1.0"
