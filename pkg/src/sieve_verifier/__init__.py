"""Numerical verifier for a sieve-decomposition loss budget.

Builds the Buchstab function and its bounds, decides membership in the
asymptotic-region system, evaluates the 22 declared loss integrals by
reproducible Monte Carlo, and checks that the signed grand total stays
below 1 (target 0.994669, margin > 0.005).
"""

from .buchstab import (
    BuchstabTable,
    build_table,
    omega_lower,
    omega_simple_upper,
    omega_upper,
)

__all__ = [
    "BuchstabTable",
    "build_table",
    "omega_lower",
    "omega_upper",
    "omega_simple_upper",
]

__version__ = "0.1.0"
