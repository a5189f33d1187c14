"""Well-balanced finite-volume solvers for relativistic Burgers and Euler flows
on a Schwarzschild background, with the benchmark catalog and acceptance suite."""

from .burgers import (
    BurgersStationary,
    PiecewiseStationaryB,
    DomainError,
    fit_b,
    fit_exact_avg_b,
    fit_gauss2_b,
    fit_point_b,
    flux_b,
    godunov_flux_b,
    source_b,
    stationary_cell_avg_b,
    stationary_domain_sup_b,
    stationary_eval_b,
    stationary_primitive_b,
    wave_speed_b,
)
from .driver import RunResult, Snapshot, run
from .euler import (
    DegenerateStateError,
    EulerStationary,
    cons_to_prim,
    critical_eval,
    critical_radius,
    critical_stationary,
    eigenvalues_e,
    flux_e,
    g_max,
    g_of_v,
    lax_friedrichs_flux,
    prim_to_cons,
    roe_average,
    roe_type_flux,
    solve_g,
    source_e,
    stationary_constants,
    stationary_eval_e,
    stationary_profile_e,
    steady_shock_jump,
)
from .experiments import (
    TestCase,
    catalog,
    case_ids,
    convergence_study,
    displacement_measure,
    get_case,
    initial_datum,
    l1_error,
    perturbation_integral,
    reference_profile,
    run_case,
    shock_locate,
)
from .grid import ConfigError, Grid, RunConfig, SolverAbort, build_grid, metric

__version__ = "0.1.0"

__all__ = [
    "BurgersStationary",
    "ConfigError",
    "DegenerateStateError",
    "DomainError",
    "EulerStationary",
    "Grid",
    "PiecewiseStationaryB",
    "RunConfig",
    "RunResult",
    "Snapshot",
    "SolverAbort",
    "TestCase",
    "build_grid",
    "case_ids",
    "catalog",
    "cons_to_prim",
    "convergence_study",
    "critical_eval",
    "critical_radius",
    "critical_stationary",
    "displacement_measure",
    "eigenvalues_e",
    "fit_b",
    "fit_exact_avg_b",
    "fit_gauss2_b",
    "fit_point_b",
    "flux_b",
    "flux_e",
    "g_max",
    "g_of_v",
    "get_case",
    "godunov_flux_b",
    "initial_datum",
    "l1_error",
    "lax_friedrichs_flux",
    "metric",
    "perturbation_integral",
    "prim_to_cons",
    "reference_profile",
    "roe_average",
    "roe_type_flux",
    "run",
    "run_case",
    "shock_locate",
    "solve_g",
    "source_b",
    "source_e",
    "stationary_cell_avg_b",
    "stationary_constants",
    "stationary_domain_sup_b",
    "stationary_eval_b",
    "stationary_eval_e",
    "stationary_primitive_b",
    "stationary_profile_e",
    "steady_shock_jump",
    "wave_speed_b",
]
