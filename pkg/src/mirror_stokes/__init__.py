"""Stokes matrices of x**a + x**-b by numerical monodromy, and the mirror
comparison with the quantum connection and Gram matrix of P(a, b)."""

__version__ = "0.1.0"
