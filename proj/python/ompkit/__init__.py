"""Minimum-error discrimination and optimal-measurement-preserving channels for qubit ensembles."""

from ._ompkit import (
    CaseTag,
    DiscriminationSolution,
    Ensemble,
    Herm2,
    OmpFamily,
    OmpkitError,
    OmpReport,
    OmpSystem,
    QubitChannel,
    Tolerances,
    build_system,
    check_omp,
    delta_slice,
    invariant_violations,
    oracle_random_search,
    reference,
    sieve,
    solve,
    solve_family,
    solve_two_state,
    unital_family,
    unpack,
)

__version__ = "0.1.0"
