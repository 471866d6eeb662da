"""Sections, projections and functionals of convex bodies in John, Löwner and
minimal surface area position."""

__version__ = "0.1.0"
