"""Exact densities of primes in arithmetic progressions having a prescribed
primitive root, an independent series oracle, and an empirical census."""

from .arith import DomainError, GClass, compute_g_invariants, factorize, kronecker, jacobi_extended
from .density import (
    A,
    ARTIN,
    DensityResult,
    artin_coefficient,
    artin_constant_partial,
    delta_closed,
    delta_jacobi_form,
    is_wud,
    vanishing_criterion,
    wud_set,
)
from .lenstra import delta_truncated
from .census import CensusReport, build_sieve, heuristic_sum, run_census

__all__ = [
    "A",
    "CensusReport",
    "ARTIN",
    "DensityResult",
    "DomainError",
    "GClass",
    "artin_coefficient",
    "artin_constant_partial",
    "build_sieve",
    "compute_g_invariants",
    "delta_closed",
    "delta_jacobi_form",
    "delta_truncated",
    "factorize",
    "heuristic_sum",
    "is_wud",
    "jacobi_extended",
    "kronecker",
    "run_census",
    "vanishing_criterion",
    "wud_set",
]
