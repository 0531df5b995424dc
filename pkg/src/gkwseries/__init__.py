"""Recursive rational-function series for the Gauss-Kuzmin-Wirsing eigenvalues."""

__version__ = "0.1.0"
