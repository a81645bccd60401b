"""Finitely presented groups: word problems, constructions and certificates."""

__version__ = "0.1.0"
