"""Exact fourth-order Chern-Moser normal forms and CMW tensor obstructions."""

__version__ = "0.1.0"
