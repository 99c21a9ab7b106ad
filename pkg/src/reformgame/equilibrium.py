"""Equilibrium participation threshold: fixed-point solver and closed forms.

A reached non-follower participates when their cost is below the threshold
``kappa* = a * Gamma_eff * E{x}``, where ``E{x}`` is the expected
participating fraction and ``Gamma_eff`` is the participant gain, discounted
by the posterior belief of a majority-benefiting state when the policy maker
is partisan. Aggregating over followers and non-followers gives
``x = gamma * (theta + (1 - theta) * kappa*/kappa_max)``. Under rational
expectations both hold at once, so the threshold is the unique fixed point
of the best-response map; the participant gain bound makes the map a
contraction with modulus ``a * Gamma_eff * gamma * (1 - theta) / kappa_max``
below 1.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import (
    CostReport,
    DomainError,
    LeaderType,
    ModelParams,
    ThresholdConvention,
    WorldState,
    info_acquisition_cost,
    optimal_info_effort,
    partisan_participation_cost,
    posterior_change_state,
    success_probability,
    validate_params,
)

__all__ = [
    "ConvergenceError",
    "EquilibriumResult",
    "EquilibriumReport",
    "effective_gain",
    "best_response_map",
    "participation_fraction",
    "closed_form_threshold",
    "solve_fixed_point",
    "equilibrium_report",
]

DEFAULT_TOL = 1e-12
DEFAULT_MAX_ITER = 10_000


class ConvergenceError(RuntimeError):
    """The fixed-point iteration did not reach tolerance within the cap."""


@dataclass(frozen=True)
class EquilibriumResult:
    """Solved equilibrium of the participation game.

    ``kappa_star`` is the cost threshold below which reached non-followers
    participate (the demand for leadership), ``x_star`` the participating
    fraction, ``psi_star`` the implied success probability, and
    ``closed_form_gap`` the distance between the fixed point and the
    closed form selected by ``convention``.
    """

    kappa_star: float
    x_star: float
    expected_participation: float
    psi_star: float
    effective_gain: float
    convention: ThresholdConvention
    iterations: int
    residual: float
    closed_form_gap: float


@dataclass(frozen=True)
class EquilibriumReport:
    equilibrium: EquilibriumResult
    costs: CostReport


def effective_gain(params: ModelParams) -> float:
    """Participation gain as perceived by a reached non-follower.

    A non-partisan policy maker only calls in the majority-benefiting
    state, so the gain is ``Gamma_gain`` outright. A partisan also calls
    in the minority state, so the gain is discounted by the posterior
    belief that the state benefits the majority.
    """
    if params.leader_type is LeaderType.NON_PARTISAN:
        return params.Gamma_gain
    belief = posterior_change_state(params.s, params.p2, params.posterior_convention)
    return params.Gamma_gain * belief


def best_response_map(params: ModelParams, kappa: float) -> float:
    """One round of the threshold best response.

    If non-followers currently participate up to cost ``kappa``, the
    participating fraction is ``gamma * (theta + (1-theta) * min(kappa,
    kappa_max)/kappa_max)`` and the next-round threshold is ``a * Gamma_eff``
    times that fraction.
    """
    validate_params(params)
    if kappa < 0.0:
        raise DomainError(f"threshold kappa must be >= 0, got {kappa}")
    gain = effective_gain(params)
    clipped = min(kappa, params.kappa_max)
    return (
        params.a
        * gain
        * params.gamma
        * (params.theta + (1.0 - params.theta) * clipped / params.kappa_max)
    )


def participation_fraction(params: ModelParams, kappa_star: float) -> float:
    """Participating fraction induced by a threshold kappa_star.

    All reached followers participate, plus reached non-followers with cost
    up to the threshold; the result lies in [gamma*theta, gamma].
    """
    validate_params(params)
    if not (0.0 <= kappa_star <= params.kappa_max):
        raise DomainError(
            f"kappa_star must lie in [0, kappa_max = {params.kappa_max}], got {kappa_star}"
        )
    return params.gamma * (
        params.theta + (1.0 - params.theta) * kappa_star / params.kappa_max
    )


def closed_form_threshold(
    params: ModelParams, convention: ThresholdConvention | None = None
) -> float:
    """Closed-form equilibrium threshold under the chosen sign convention.

    DERIVED_CONSISTENT solves the participation recursion exactly:
    ``theta / (1/(a*gamma*Gamma_eff) - (1-theta)/kappa_max)``. PAPER_LITERAL
    flips the inner sign to ``+`` as printed in the published expression;
    that variant is increasing in kappa_max, contradicting the stated
    comparative statics, and is kept for reference only.
    """
    validate_params(params)
    if convention is None:
        convention = params.threshold_convention
    gain = effective_gain(params)
    inverse_gain = 1.0 / (params.a * params.gamma * gain)
    tail = (1.0 - params.theta) / params.kappa_max
    if convention is ThresholdConvention.PAPER_LITERAL:
        return params.theta / (inverse_gain + tail)
    denom = inverse_gain - tail
    if denom <= 0.0:
        raise DomainError(
            "closed form undefined: a*gamma*Gamma_eff*(1-theta) >= kappa_max "
            "(the participant gain bound rules this out for validated parameters)"
        )
    return params.theta / denom


def solve_fixed_point(
    params: ModelParams,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> EquilibriumResult:
    """Iterate the best-response map from 0 until successive thresholds agree.

    Starting at 0 makes the iterate sequence monotone increasing and bounded
    by ``a * Gamma_eff * gamma``, which the participant gain bound keeps
    strictly below ``kappa_max``; the contraction modulus then guarantees
    convergence long before ``max_iter``.
    """
    validate_params(params)
    if tol <= 0.0:
        raise DomainError(f"tolerance must be > 0, got {tol}")
    if max_iter < 1:
        raise DomainError(f"max_iter must be >= 1, got {max_iter}")

    gain = effective_gain(params)
    seed = params.a * gain * params.gamma * params.theta
    slope = params.a * gain * params.gamma * (1.0 - params.theta) / params.kappa_max

    kappa = 0.0
    iterations = 0
    residual = float("inf")
    previous = float("inf")
    within_tol = False
    while iterations < max_iter:
        nxt = seed + slope * min(kappa, params.kappa_max)
        iterations += 1
        residual = abs(nxt - kappa)
        kappa = nxt
        if residual <= tol:
            within_tol = True
            # Keep polishing while each step still strictly improves; this
            # lands on the machine fixed point at negligible extra cost.
            if residual == 0.0 or residual >= previous:
                break
        previous = residual
    if not within_tol:
        raise ConvergenceError(
            f"no fixed point within {max_iter} iterations (residual {residual:.3e}); "
            "the parameters violate the contraction condition"
        )

    x_star = participation_fraction(params, kappa)
    psi_star = success_probability(params.a, params.phi, x_star)
    gap = abs(kappa - closed_form_threshold(params, params.threshold_convention))
    return EquilibriumResult(
        kappa_star=kappa,
        x_star=x_star,
        expected_participation=x_star,
        psi_star=psi_star,
        effective_gain=gain,
        convention=params.threshold_convention,
        iterations=iterations,
        residual=residual,
        closed_form_gap=gap,
    )


def equilibrium_report(
    params: ModelParams,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> EquilibriumReport:
    """Solve the equilibrium and attach the standalone cost metrics.

    The information cost is evaluated at the optimal acquisition effort for
    the majority-state gain; a partisan policy maker also weighs the
    minority-state gain and the larger effort is reported.
    """
    result = solve_fixed_point(params, tol=tol, max_iter=max_iter)
    effort = optimal_info_effort(params, WorldState.E3)
    if params.leader_type is LeaderType.PARTISAN:
        effort = max(effort, optimal_info_effort(params, WorldState.E2))
    costs = CostReport(
        info_cost=info_acquisition_cost(params.q, effort),
        partisan_cost=partisan_participation_cost(params.w, params.theta),
    )
    return EquilibriumReport(equilibrium=result, costs=costs)
