"""Exact singular values of anisotropic mixed-smoothness embeddings.

Subpackages: core (problem specs and weights), enumeration (lazy frontier
walk producing the nonincreasing singular-value sequence), counting (lattice
counting functions), specfun (zeta-type special functions), bounds (published
upper/lower bounds and rate exponents), harness (oracles and verification),
cli (command-line interface).
"""
from . import core  # noqa: F401

__version__ = "1.0.0"
