"""Equilibrium and Monte Carlo toolkit for a leader-follower reform game.

The package solves the participation equilibrium of an institutional-reform
coordination game (closed forms and a contraction fixed point), validates
it with a seeded agent-based Monte Carlo engine, runs comparative-statics
sweeps, and reads/writes scenario and result files. See the README for the
model and the CLI.
"""

from .model import (
    BOUNDARY_MARGIN,
    Beneficiary,
    CostReport,
    DomainError,
    GAIN_ALLOCATION,
    LeaderType,
    ModelParams,
    ParameterError,
    PosteriorConvention,
    StateGainAllocation,
    ThresholdConvention,
    WorldState,
    gain_allocation,
    info_acquisition_cost,
    optimal_info_effort,
    partisan_participation_cost,
    posterior_change_state,
    state_probabilities,
    success_probability,
    validate_params,
)
from .equilibrium import (
    ConvergenceError,
    EquilibriumReport,
    EquilibriumResult,
    best_response_map,
    closed_form_threshold,
    effective_gain,
    equilibrium_report,
    participation_fraction,
    solve_fixed_point,
)
from .abm import (
    AbmEstimate,
    Agent,
    Population,
    SimOutcome,
    best_response_cascade,
    derive_seed,
    estimate_equilibrium,
    realize_world,
    simulate_once,
    spawn_population,
)
from .sweep import (
    Monotonicity,
    SuccessResponse,
    SweepPoint,
    SweepSeries,
    finite_difference_sensitivity,
    grid_sweep,
    monotonicity_check,
    success_response_series,
)
from .scenario import (
    AbmSettings,
    BancarizationSeries,
    CaseDataSettings,
    CaseTableError,
    RunKind,
    Scenario,
    ScenarioError,
    ScenarioParseError,
    ScenarioSchemaError,
    SweepSettings,
    bundled_path,
    ingest_case_table,
    load_scenario,
    write_results,
    write_scenario,
)
from .cli import run_command

__version__ = "0.1.0"
