"""Closures of linear-projection maps: dimension, multidegree, initial ideal and Hilbert polynomial."""

__version__ = "0.1.0"
