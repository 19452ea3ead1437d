"""Abelian congruences and solvability in finite Moufang loops."""

__version__ = "0.1.0"
