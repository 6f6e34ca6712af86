"""Clique complexes of affine preferential attachment graphs and their Betti numbers."""

__version__ = "0.1.0"
