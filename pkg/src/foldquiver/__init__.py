"""Admissible automorphisms of quivers, fixed points of the induced
involutions on ADHM data, and the type-A slice map in the small case."""

__version__ = "0.1.0"
