"""Symbolic verification of identities in infinitesimal Hecke algebras of so_N."""

__version__ = "0.1.0"
