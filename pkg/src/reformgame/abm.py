"""Agent-based Monte Carlo engine validating the analytic equilibrium.

One simulation run samples a population (follower flags, participation
costs, reach flags), realizes the world state, lets the policy maker decide
whether to call, and then iterates the empirical best response: each reached
agent joins once their cost falls below ``a * Gamma_eff`` times the previous
round's participating fraction. The iteration starts from the follower core
and stops when the participating set no longer changes; success is then a
single draw at the realized participation level.

Agent state is held in parallel numpy arrays so that populations of 1e5
agents replicate in milliseconds; :class:`Agent` objects are materialized
on demand for inspection. All randomness flows from explicit integer seeds
(replication seeds derive from the master seed by a splitmix64 counter), so
identical inputs reproduce identical outputs bit for bit. Replications are
independent; they may be dispatched in parallel as long as their seeds are
assigned up front and results are aggregated in replication order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .equilibrium import effective_gain, solve_fixed_point
from .model import (
    DomainError,
    LeaderType,
    ModelParams,
    StateGainAllocation,
    WorldState,
    gain_allocation,
    optimal_info_effort,
    state_probabilities,
    success_probability,
    validate_params,
)

__all__ = [
    "Agent",
    "Population",
    "SimOutcome",
    "AbmEstimate",
    "derive_seed",
    "spawn_population",
    "realize_world",
    "best_response_cascade",
    "simulate_once",
    "estimate_equilibrium",
]

_MASK64 = (1 << 64) - 1
_SPLITMIX_GAMMA = 0x9E3779B97F4A7C15


def derive_seed(master: int, index: int) -> int:
    """Derive the index-th child seed from a master seed (splitmix64 mix)."""
    z = (master + (index + 1) * _SPLITMIX_GAMMA) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (z ^ (z >> 31)) & _MASK64


@dataclass(frozen=True)
class Agent:
    """One member of the population.

    Followers carry zero cost; a non-follower's cost lies in
    [0, kappa_max]. An agent can only participate if reached by the call.
    """

    is_follower: bool
    cost: float
    reached: bool
    participates: bool = False


@dataclass(frozen=True)
class Population:
    """Sampled agents, stored as parallel arrays keyed by agent index."""

    is_follower: np.ndarray
    cost: np.ndarray
    reached: np.ndarray
    seed: int
    n: int

    def agent(self, i: int, participates: bool = False) -> Agent:
        return Agent(
            is_follower=bool(self.is_follower[i]),
            cost=float(self.cost[i]),
            reached=bool(self.reached[i]),
            participates=participates,
        )

    @property
    def agents(self) -> list[Agent]:
        return [self.agent(i) for i in range(self.n)]


@dataclass(frozen=True)
class SimOutcome:
    """Result of a single simulation run."""

    world_state: WorldState
    called: bool
    participation_fraction: float
    success: bool
    beneficiary: StateGainAllocation
    iterations_to_converge: int
    participated: np.ndarray = field(repr=False)


@dataclass(frozen=True)
class AbmEstimate:
    """Monte Carlo estimate of the equilibrium participation fraction."""

    mean_x: float
    stderr_x: float
    mean_success_rate: float
    replications: int
    agents_per_replication: int
    analytic_x: float
    abs_gap: float


def spawn_population(n: int, params: ModelParams, seed: int) -> Population:
    """Sample a population of n agents from the model's cost mixture.

    Each agent is independently a follower with probability theta (cost 0),
    otherwise draws a cost uniform on [0, kappa_max]; each is reached with
    probability gamma, independent of follower status. Draw order is fixed
    (follower uniforms, then costs, then reach uniforms) so that raising
    theta under a common seed only converts non-followers into followers.
    """
    validate_params(params)
    if n < 1:
        raise DomainError(f"population size must be >= 1, got {n}")
    rng = np.random.default_rng(seed)
    is_follower = rng.random(n) < params.theta
    cost = np.where(is_follower, 0.0, rng.uniform(0.0, params.kappa_max, size=n))
    reached = rng.random(n) < params.gamma
    return Population(is_follower=is_follower, cost=cost, reached=reached, seed=seed, n=n)


def _state_from_uniform(p1: float, p2: float, u: float) -> WorldState:
    e1, e2, _ = state_probabilities(p1, p2)
    if u < e1:
        return WorldState.E1
    if u < e1 + e2:
        return WorldState.E2
    return WorldState.E3


def realize_world(p1: float, p2: float, seed: int) -> WorldState:
    """Draw the world state with probabilities (p1, (1-p1)p2, (1-p1)(1-p2))."""
    rng = np.random.default_rng(seed)
    return _state_from_uniform(p1, p2, float(rng.random()))


def best_response_cascade(
    population: Population, params: ModelParams
) -> tuple[np.ndarray, int, list[float]]:
    """Iterate the empirical best response until the participating set is stable.

    Seeds beliefs at the analytic follower core gamma*theta, then each round
    admits the reached agents whose cost is at most ``a * Gamma_eff`` times
    the previous round's realized fraction. Followers (cost 0) stay in from
    the first round, so the set ratchets up and the loop ends within n
    rounds; a cap of n rounds guards it regardless.

    Returns the final participation mask, the number of rounds executed, and
    the realized fraction after each round.
    """
    coef = params.a * effective_gain(params)
    x_prev = params.gamma * params.theta
    mask = population.reached & (population.cost <= coef * x_prev)
    trajectory = [float(mask.sum()) / population.n]
    rounds = 1
    while rounds <= population.n:
        nxt = population.reached & (population.cost <= coef * trajectory[-1])
        if np.array_equal(nxt, mask):
            break
        mask = nxt
        trajectory.append(float(mask.sum()) / population.n)
        rounds += 1
    return mask, rounds, trajectory


def simulate_once(
    population: Population,
    params: ModelParams,
    seed: int,
    force_state: WorldState | None = None,
    force_call: bool = False,
) -> SimOutcome:
    """Run one realization of the reform game on a sampled population.

    The world state is drawn (or forced), then the policy maker calls for
    change only in the states their type favours: E3 for a non-partisan,
    E2 or E3 for a partisan. The call additionally requires the policy
    maker to have learned the state, a single draw with the optimal
    information-effort probability; ``force_call`` bypasses both gates to
    isolate the participation game. Without a call nobody participates.
    """
    validate_params(params)
    rng = np.random.default_rng(seed)

    state = force_state if force_state is not None else _state_from_uniform(
        params.p1, params.p2, float(rng.random())
    )

    if force_call:
        called = True
    else:
        if params.leader_type is LeaderType.NON_PARTISAN:
            favourable = state is WorldState.E3
        else:
            favourable = state in (WorldState.E2, WorldState.E3)
        if favourable:
            effort = optimal_info_effort(params, state)
            called = bool(rng.random() < effort)
        else:
            called = False

    if not called:
        return SimOutcome(
            world_state=state,
            called=False,
            participation_fraction=0.0,
            success=False,
            beneficiary=gain_allocation(state),
            iterations_to_converge=0,
            participated=np.zeros(population.n, dtype=bool),
        )

    mask, rounds, _ = best_response_cascade(population, params)
    x_hat = float(mask.sum()) / population.n
    psi = success_probability(params.a, params.phi, x_hat) if x_hat > 0.0 else 0.0
    success = bool(rng.random() < psi)
    return SimOutcome(
        world_state=state,
        called=True,
        participation_fraction=x_hat,
        success=success,
        beneficiary=gain_allocation(state),
        iterations_to_converge=rounds,
        participated=mask,
    )


def estimate_equilibrium(
    params: ModelParams, n: int, replications: int, seed: int
) -> AbmEstimate:
    """Estimate the equilibrium participation fraction by replication.

    Each replication spawns a fresh population and runs the participation
    game with the call issued and the majority-benefiting state forced, so
    the estimate targets the analytic fixed point. Replication seeds derive
    deterministically from the master seed; results aggregate in
    replication order.
    """
    validate_params(params)
    if n < 1000:
        raise DomainError(f"need at least 1000 agents per replication, got {n}")
    if replications < 2:
        raise DomainError(f"need at least 2 replications, got {replications}")

    fractions = np.empty(replications)
    successes = np.empty(replications)
    for rep in range(replications):
        rep_seed = derive_seed(seed, rep)
        population = spawn_population(n, params, derive_seed(rep_seed, 0))
        outcome = simulate_once(
            population,
            params,
            derive_seed(rep_seed, 1),
            force_state=WorldState.E3,
            force_call=True,
        )
        fractions[rep] = outcome.participation_fraction
        successes[rep] = 1.0 if outcome.success else 0.0

    mean_x = float(fractions.mean())
    stderr_x = float(fractions.std(ddof=1) / math.sqrt(replications))
    analytic_x = solve_fixed_point(params).x_star
    return AbmEstimate(
        mean_x=mean_x,
        stderr_x=stderr_x,
        mean_success_rate=float(successes.mean()),
        replications=replications,
        agents_per_replication=n,
        analytic_x=analytic_x,
        abs_gap=abs(mean_x - analytic_x),
    )
