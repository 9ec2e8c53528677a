"""Exact Lie-algebra cohomology and the Klein-Gordon-Fock equation in invariant fields on Lie groups."""

__version__ = "0.1.0"
