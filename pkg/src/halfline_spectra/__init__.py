"""Eigenvalue enclosures for half-line Schrödinger operators with complex potentials."""
