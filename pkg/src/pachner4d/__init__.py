"""Exact Grassmann-Berezin calculus for 4-simplex weights and Pachner move identities."""

__version__ = "0.1.0"
