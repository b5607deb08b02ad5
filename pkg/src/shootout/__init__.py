"""Exact analysis of penalty shootout first-mover mechanisms."""

__version__ = "0.1.0"
