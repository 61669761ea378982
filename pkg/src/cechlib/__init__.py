"""Exact Cech cohomology of abelian sheaves on finite covers."""

__version__ = "0.1.0"
