"""Exact Padé approximants to polylogarithms and the integer linear forms
in zeta values and Dirichlet L-values they produce."""

__version__ = "0.1.0"
