"""Distributions of the number of understood sessions in an n-session course.

A student understands session 1 with probability sf(1 - q) under an initial
distribution F; every understood session makes the next easier by eps,
every missed one harder by eps.  The package computes the distribution of
the total understood count exactly (dynamic programming, validated by
exhaustive enumeration), through the recursive mixture formulation with its
uniform closed forms, via its binomial approximation with convergence
diagnostics, and by seeded Monte Carlo simulation.
"""

from .asymptotic import (
    ConvergenceReport,
    ConvergenceRow,
    EpsSchedule,
    RatioProfile,
    binomial_pmf,
    central_mass_window,
    convergence_study,
    ratio_profile,
)
from .chain import (
    BRUTE_FORCE_MAX_N,
    EnumerationBudgetError,
    ModelParams,
    OutcomePath,
    ValidationError,
    ValidationReport,
    apply_transition,
    boundary_log_masses,
    brute_force_pmf,
    exact_marginals,
    exact_pmf,
    session_success_prob,
    transition_row,
    validate,
)
from .initial import InitialDistribution, TableFormatError, load_cdf_table, uniform01
from .mixture import (
    MixtureLattice,
    build_lattice,
    mixture_marginal,
    theorem1_marginal,
    uniform_marginal_closed,
    uniform_sf_closed,
)
from .montecarlo import SimulationResult, sample_paths, tv_distance

__version__ = "0.1.0"

__all__ = [
    "BRUTE_FORCE_MAX_N",
    "ConvergenceReport",
    "ConvergenceRow",
    "EnumerationBudgetError",
    "EpsSchedule",
    "InitialDistribution",
    "MixtureLattice",
    "ModelParams",
    "OutcomePath",
    "RatioProfile",
    "SimulationResult",
    "TableFormatError",
    "ValidationError",
    "ValidationReport",
    "apply_transition",
    "binomial_pmf",
    "boundary_log_masses",
    "brute_force_pmf",
    "build_lattice",
    "central_mass_window",
    "convergence_study",
    "exact_marginals",
    "exact_pmf",
    "load_cdf_table",
    "mixture_marginal",
    "ratio_profile",
    "sample_paths",
    "session_success_prob",
    "theorem1_marginal",
    "transition_row",
    "tv_distance",
    "uniform01",
    "uniform_marginal_closed",
    "uniform_sf_closed",
    "validate",
]
